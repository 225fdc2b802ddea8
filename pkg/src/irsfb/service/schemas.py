"""Request/response models for the HTTP service."""

from typing import Literal

from pydantic import BaseModel, Field, model_validator

ComplexPair = tuple[float, float]


class LinkBudget(BaseModel):
    """Feedback control-link description used to turn bits into seconds."""

    bf_hz: float = Field(gt=0)
    feedback_power_w: float = Field(gt=0)
    n0_w_hz: float = Field(gt=0, default=10 ** ((-174.0 - 30.0) / 10.0))
    gf_gain: float = Field(gt=0, description="linear |g_F|^2 of the control channel")


class PayloadRequest(BaseModel):
    n: int = Field(ge=1)
    model: Literal["baseline", "parafac", "tucker"]
    sizes: list[int] | None = None
    auto_p: int | None = Field(default=None, ge=1)
    r: int = Field(default=1, ge=1)
    ranks: list[int] | None = None
    phase_bits: int | list[int] = 3
    weight_bits: int = Field(default=4, ge=1, le=16)
    include_preamble: bool = True
    baseline_bits: int = Field(default=3, ge=1, le=16)
    link: LinkBudget | None = None

    @model_validator(mode="after")
    def _check_shape(self):
        if self.model != "baseline" and self.sizes is None and self.auto_p is None:
            raise ValueError("factorized models need sizes or auto_p")
        if self.model == "tucker" and self.ranks is None:
            raise ValueError("tucker payloads need ranks")
        return self


class PayloadResponse(BaseModel):
    model: str
    sizes: list[int] | None
    phases_conveyed: int
    core_phases: int
    payload_bits: int
    preamble_bits: int
    total_bits: int
    baseline_total_bits: int
    ratio_vs_baseline: float
    tf_s: float | None = None


class DecomposeRequest(BaseModel):
    values: list[ComplexPair]
    shape: list[int]
    model: Literal["parafac", "tucker"] = "parafac"
    r: int = Field(default=1, ge=1)
    ranks: list[int] | None = None
    max_iters: int = Field(default=100, ge=1)
    epsilon: float = Field(default=1e-6, gt=0)
    seed: int = 0
    include_factors: bool = False

    @model_validator(mode="after")
    def _check(self):
        if self.model == "tucker" and self.ranks is None:
            raise ValueError("tucker decomposition needs ranks")
        return self


class DecomposeResponse(BaseModel):
    model: str
    shape: list[int]
    iterations: int
    converged: bool
    over_parameterized: bool
    final_nmse: float
    nmse_trace: list[float]
    weights: list[float] | None = None
    sigmas: list[list[float]] | None = None
    factors: list[list[list[ComplexPair]]] | None = None
    core: list[ComplexPair] | None = None


class CodecMessage(BaseModel):
    """JSON form of a quantized feedback message."""

    model: Literal["baseline", "parafac", "tucker"]
    n: int | None = None
    sizes: list[int] | None = None
    r: int | None = None
    ranks: list[int] | None = None
    phase_bits: int | list[int] = 3
    weight_bits: int = 4
    phase_indices: list[int] | None = None  # baseline body
    factor_indices: list[list[list[int]]] | None = None  # per factor: N_p x R
    weight_indices: list[int] | None = None
    core_phase_indices: list[int] | None = None
    core_mag_indices: list[int] | None = None
    sigma_indices: list[list[int]] | None = None


class CodecResponse(BaseModel):
    model: str
    bit_length: int
    byte_length: int
    analytic_bits: int
    length_matches: bool
    roundtrip_ok: bool
    encoded_hex: str


class SimulateRequest(BaseModel):
    config_text: str
    trials_override: int | None = Field(default=None, ge=1)


class SimulateResponse(BaseModel):
    scenario: str
    rows: int
    csv: str


class HealthResponse(BaseModel):
    status: str
    version: str
