"""Seeded Monte-Carlo experiment runner with a flat config format and CSV output.

Scenarios
---------
fig5 / fig7 / fig8   achievable-rate sweeps over the Rician factor (dB);
                     rate uses the noise floor B*N_0 with unit TX power.
fig9                 spectral/energy efficiency sweep over the feedback
                     bandwidth; rate is evaluated at the frame operating
                     point (TX power over B*N_0).
fig10_12             SE/EE sweep over the feedback power split.
fig6                 analytic payload sweep over the panel size; no channel
                     draws, only bit counters.

Config files are flat ``key = value`` text; ``model = <kind> k=v ...`` lines
stack up.  Identical config plus master seed reproduces every output byte:
per-trial generators are seeded by a hash of (seed, scenario, sweep index,
trial index), and the elapsed column stays 0.0 unless ``measure_time`` is
enabled.
"""

import csv
import hashlib
import io
import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import codec
from .channel import sample_channels, sample_geometry
from .decomposition import parafac_als, sort_components, tucker_hosvd
from .quantization import (
    AmplitudeCodebook,
    PhaseCodebook,
    dequantize_amplitudes,
    dequantize_phases,
    dequantize_weights,
    quantize_amplitudes,
    quantize_parafac_weights,
    quantize_phases,
    quantize_tucker_weights,
    QuantizedWeights,
)
from .reconstruction import reconstruct_from_parafac, reconstruct_from_tucker, reconstruct_model
from .system import (
    SystemParams,
    cascade_gain,
    db_to_linear,
    design_beamformers,
    energy_efficiency,
    feedback_duration_baseline,
    feedback_duration_parafac,
    feedback_duration_tucker,
    link_rate_bpshz,
    spectral_efficiency,
)
from .tensor_ops import tensorize, untensorize

SCENARIOS = ("fig5", "fig6", "fig7", "fig8", "fig9", "fig10_12")
SWEEPS = ("k_db", "n", "bf_hz", "pf_w")

CSV_COLUMNS = (
    "scenario",
    "model",
    "sweep_name",
    "sweep_value",
    "seed",
    "rate_bpshz",
    "se_bps",
    "ee_bpj",
    "tf_s",
    "payload_bits",
    "nmse",
    "elapsed_s",
)


class ConfigError(ValueError):
    """Malformed experiment configuration."""


@dataclass
class BaselineSpec:
    bits: int = 3
    quantized: bool = True
    tag: str | None = None

    def label(self) -> str:
        if self.tag:
            return self.tag
        suffix = "" if self.quantized else "_unq"
        return f"baseline_b{self.bits}{suffix}"


@dataclass
class ParafacSpec:
    sizes: tuple[int, ...] | None = None
    auto_p: int | None = None  # sizes = [n / 2^(p-1), 2, ..., 2]
    r: int = 1
    phase_bits: tuple[int, ...] | int = 3
    weight_bits: int = 4
    quantized: bool = True
    tag: str | None = None

    def label(self) -> str:
        if self.tag:
            return self.tag
        sz = "auto%d" % self.auto_p if self.auto_p else "-".join(map(str, self.sizes))
        b = self.phase_bits
        b_txt = str(b) if isinstance(b, int) else "-".join(map(str, b))
        suffix = "" if self.quantized else "_unq"
        return f"parafac_{sz}_r{self.r}_b{b_txt}{suffix}"


@dataclass
class TuckerSpec:
    sizes: tuple[int, ...] | None = None
    auto_p: int | None = None
    ranks: tuple[int, ...] = (1,)
    phase_bits: tuple[int, ...] | int = 3
    weight_bits: int = 4
    quantized: bool = True
    tag: str | None = None

    def label(self) -> str:
        if self.tag:
            return self.tag
        sz = "auto%d" % self.auto_p if self.auto_p else "-".join(map(str, self.sizes))
        rk = "-".join(map(str, self.ranks))
        b = self.phase_bits
        b_txt = str(b) if isinstance(b, int) else "-".join(map(str, b))
        suffix = "" if self.quantized else "_unq"
        return f"tucker_{sz}_rk{rk}_b{b_txt}{suffix}"


ModelSpec = BaselineSpec | ParafacSpec | TuckerSpec


@dataclass
class ExperimentConfig:
    scenario: str = "fig5"
    sweep: str = "k_db"
    grid: tuple[float, ...] = (-10.0, -5.0, 0.0, 5.0, 10.0, 15.0)
    trials: int = 200
    seed: int = 0
    models: list[ModelSpec] = field(default_factory=list)
    n: int = 1024
    n_h: int = 32
    n_v: int = 32
    m_t: int = 2
    m_r: int = 2
    k_db: float = 10.0
    pathloss_db: float = 0.0
    feedback_pathloss_db: float | None = None
    b_max_hz: float = 100e6
    bf_hz: float = 1e6
    pf_w: float | None = None
    include_preamble: bool = True
    measure_time: bool = False
    max_iters: int = 100
    epsilon: float = 1e-6
    output: str = "results.csv"

    def validate(self) -> None:
        if self.scenario not in SCENARIOS:
            raise ConfigError(f"unknown scenario {self.scenario!r}; expected one of {SCENARIOS}")
        if self.sweep not in SWEEPS:
            raise ConfigError(f"unknown sweep {self.sweep!r}; expected one of {SWEEPS}")
        if not self.grid:
            raise ConfigError("sweep grid is empty")
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if not self.models:
            raise ConfigError("at least one model line is required")
        if self.n_h * self.n_v != self.n:
            raise ConfigError(f"panel {self.n_h}x{self.n_v} inconsistent with n={self.n}")
        if self.sweep != "n":
            for spec in self.models:
                if isinstance(spec, (ParafacSpec, TuckerSpec)):
                    resolve_sizes(spec, self.n)  # raises on mismatch


@dataclass
class ResultRow:
    scenario: str
    model: str
    sweep_name: str
    sweep_value: float
    seed: int
    rate_bpshz: float
    se_bps: float
    ee_bpj: float
    tf_s: float
    payload_bits: int
    nmse: float
    elapsed_s: float


def resolve_sizes(spec: ParafacSpec | TuckerSpec, n: int) -> tuple[int, ...]:
    """Concrete factor sizes for a model at panel size n."""
    if spec.auto_p is not None:
        p = spec.auto_p
        if p < 1 or n % (1 << (p - 1)) != 0:
            raise ConfigError(f"auto sizes need n divisible by 2^{p - 1}, got n={n}")
        return (n >> (p - 1),) + (2,) * (p - 1)
    if spec.sizes is None:
        raise ConfigError("model needs sizes=... or sizes=auto p=...")
    if math.prod(spec.sizes) != n:
        raise ConfigError(f"sizes {spec.sizes} do not multiply to n={n}")
    return spec.sizes


def _phase_bits_tuple(spec, sizes) -> tuple[int, ...]:
    b = spec.phase_bits
    if isinstance(b, int):
        return (b,) * len(sizes)
    if len(b) != len(sizes):
        raise ConfigError(f"{len(b)} resolutions given for {len(sizes)} factors")
    return tuple(b)


# --- config parsing ---------------------------------------------------------

_BOOL = {"true": True, "false": False, "1": True, "0": False, "yes": True, "no": False}


def _parse_bool(text: str) -> bool:
    try:
        return _BOOL[text.strip().lower()]
    except KeyError:
        raise ConfigError(f"expected a boolean, got {text!r}") from None


def _parse_int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(",") if x.strip())
    except ValueError:
        raise ConfigError(f"expected a comma-separated integer list, got {text!r}") from None


def parse_model_spec(text: str) -> ModelSpec:
    """Parse one ``model =`` value: ``<kind> key=value ...``."""
    parts = text.split()
    if not parts:
        raise ConfigError("empty model spec")
    kind, opts = parts[0].lower(), {}
    for item in parts[1:]:
        if "=" not in item:
            raise ConfigError(f"malformed model option {item!r}")
        k, v = item.split("=", 1)
        opts[k.strip().lower()] = v.strip()

    def phase_bits(default=3):
        if "b" not in opts:
            return default
        vals = _parse_int_list(opts["b"])
        return vals[0] if len(vals) == 1 else vals

    quantized = _parse_bool(opts.get("quantized", "true"))
    tag = opts.get("tag")
    if kind == "baseline":
        b = phase_bits()
        if not isinstance(b, int):
            raise ConfigError("baseline takes a single resolution")
        return BaselineSpec(bits=b, quantized=quantized, tag=tag)
    if kind in ("parafac", "tucker"):
        auto_p = int(opts["p"]) if opts.get("sizes") == "auto" else None
        sizes = None if auto_p else (_parse_int_list(opts["sizes"]) if "sizes" in opts else None)
        common = dict(
            sizes=sizes,
            auto_p=auto_p,
            phase_bits=phase_bits(),
            weight_bits=int(opts.get("bw", 4)),
            quantized=quantized,
            tag=tag,
        )
        if kind == "parafac":
            return ParafacSpec(r=int(opts.get("r", 1)), **common)
        if "ranks" not in opts:
            raise ConfigError("tucker model needs ranks=...")
        return TuckerSpec(ranks=_parse_int_list(opts["ranks"]), **common)
    raise ConfigError(f"unknown model kind {kind!r}")


_INT_KEYS = {"trials", "seed", "n", "n_h", "n_v", "m_t", "m_r", "max_iters"}
_FLOAT_KEYS = {"k_db", "pathloss_db", "feedback_pathloss_db", "b_max_hz", "bf_hz", "pf_w", "epsilon"}
_BOOL_KEYS = {"include_preamble", "measure_time"}
_STR_KEYS = {"scenario", "sweep", "output"}


def parse_config(text: str) -> ExperimentConfig:
    """Parse the flat ``key = value`` config format (# starts a comment)."""
    cfg = ExperimentConfig(models=[])
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected key = value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        key = key.lower()
        try:
            if key == "model":
                cfg.models.append(parse_model_spec(value))
            elif key == "grid":
                cfg.grid = tuple(float(x) for x in value.split(",") if x.strip())
            elif key in _INT_KEYS:
                setattr(cfg, key, int(value))
            elif key in _FLOAT_KEYS:
                setattr(cfg, key, float(value))
            elif key in _BOOL_KEYS:
                setattr(cfg, key, _parse_bool(value))
            elif key in _STR_KEYS:
                setattr(cfg, key, value)
            else:
                raise ConfigError(f"unknown key {key!r}")
        except ConfigError as exc:
            raise ConfigError(f"line {lineno}: {exc}") from None
        except ValueError:
            raise ConfigError(f"line {lineno}: bad value for {key!r}: {value!r}") from None
    cfg.validate()
    return cfg


def load_config(path: str) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


# --- experiment execution ---------------------------------------------------


def trial_seed(master: int, scenario: str, sweep_index: int, trial_index: int) -> int:
    """Stable per-trial seed; appending sweep points never moves existing rows."""
    digest = hashlib.sha256(
        f"{master}|{scenario}|{sweep_index}|{trial_index}".encode()
    ).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def _params_at(cfg: ExperimentConfig, sweep_value: float) -> tuple[SystemParams, float, int]:
    """System parameters, Rician K (linear) and panel size at one sweep point."""
    n, n_h, n_v = cfg.n, cfg.n_h, cfg.n_v
    bf, pf = cfg.bf_hz, cfg.pf_w
    k_db = cfg.k_db
    if cfg.sweep == "k_db":
        k_db = sweep_value
    elif cfg.sweep == "n":
        n = int(sweep_value)
        n_h, n_v = _square_panel(n)
    elif cfg.sweep == "bf_hz":
        bf = sweep_value
    elif cfg.sweep == "pf_w":
        pf = sweep_value
    params = SystemParams(
        n=n,
        m_t=cfg.m_t,
        m_r=cfg.m_r,
        n_h=n_h,
        n_v=n_v,
        b_max_hz=cfg.b_max_hz,
        bf_hz=bf,
        p_f_w=pf,
        pathloss_db=cfg.pathloss_db,
        feedback_pathloss_db=cfg.feedback_pathloss_db,
        include_preamble=cfg.include_preamble,
    )
    return params, db_to_linear(k_db), n


def _square_panel(n: int) -> tuple[int, int]:
    """Most-square 2-D panel factorization of n."""
    h = int(math.isqrt(n))
    while n % h:
        h -= 1
    return max(h, n // h), min(h, n // h)


def _quantize_factor_phases(factors, phase_bits):
    """Phase-only quantization of every factor column; returns index blocks
    and the unit-modulus factor matrices."""
    idx_blocks, q_factors = [], []
    for f, b in zip(factors, phase_bits):
        cb = PhaseCodebook(b)
        idx = np.empty(f.shape, dtype=np.int64)
        qf = np.empty(f.shape, dtype=np.complex128)
        for r in range(f.shape[1]):
            idx[:, r], qf[:, r] = quantize_phases(f[:, r], cb)
        idx_blocks.append(idx)
        q_factors.append(qf)
    return idx_blocks, q_factors


def _run_baseline(spec, params, s_opt, gf_gain):
    if spec.quantized:
        cb = PhaseCodebook(spec.bits)
        idx, s_used = quantize_phases(s_opt, cb)
        msg = codec.QuantizedBaseline(n=params.n, phase_bits=spec.bits, phase_indices=idx)
        decoded = codec.decode_feedback(codec.encode_feedback(msg).data)
        s_used = dequantize_phases(decoded.phase_indices, cb)
    else:
        s_used = s_opt
    tf, payload = feedback_duration_baseline(params, gf_gain, spec.bits)
    return s_used, tf, payload, math.nan


def _run_parafac(spec, params, s_opt, gf_gain, sizes, fit_seed, cfg):
    phase_bits = _phase_bits_tuple(spec, sizes)
    t = tensorize(s_opt, sizes)
    model, report = parafac_als(
        t, spec.r, max_iters=cfg.max_iters, epsilon=cfg.epsilon, rng=fit_seed
    )
    model = sort_components(model)
    if spec.quantized:
        idx_blocks, _ = _quantize_factor_phases(model.factors, phase_bits)
        acb = AmplitudeCodebook(spec.weight_bits)
        qw = quantize_parafac_weights(model.weights, acb)
        # components are weight-sorted, so the implicit unit weight is first
        msg = codec.QuantizedParafac(
            sizes=tuple(sizes),
            r=spec.r,
            phase_bits=phase_bits,
            weight_bits=spec.weight_bits,
            factor_indices=idx_blocks,
            weight_indices=qw.indices,
        )
        decoded = codec.decode_feedback(codec.encode_feedback(msg).data)
        factors = [
            dequantize_phases(fi.reshape(-1, order="F"), PhaseCodebook(b)).reshape(fi.shape)
            for fi, b in zip(decoded.factor_indices, phase_bits)
        ]
        weights = dequantize_weights(
            QuantizedWeights(indices=decoded.weight_indices, omitted_index=0, size=spec.r),
            acb,
        )
        s_used = reconstruct_from_parafac(factors, weights).entries
    else:
        s_used = reconstruct_model(model).entries
    tf, payload = feedback_duration_parafac(
        params, gf_gain, sizes, spec.r, phase_bits, spec.weight_bits
    )
    return s_used, tf, payload, report.final_nmse


def _run_tucker(spec, params, s_opt, gf_gain, sizes):
    phase_bits = _phase_bits_tuple(spec, sizes)
    if len(spec.ranks) != len(sizes):
        raise ConfigError("one rank per factor required")
    t = tensorize(s_opt, sizes)
    model, report = tucker_hosvd(t, spec.ranks)
    if spec.quantized:
        idx_blocks, _ = _quantize_factor_phases(model.factors, phase_bits)
        acb = AmplitudeCodebook(spec.weight_bits)
        core_cb = PhaseCodebook(phase_bits[0])
        core_vec = untensorize(model.core)
        core_phase_idx, _ = quantize_phases(core_vec, core_cb)
        mags = np.abs(core_vec)
        peak = mags.max()
        if peak == 0:
            raise ValueError("all-zero core tensor")
        core_mag_idx = quantize_amplitudes(mags / peak, acb)
        sig_q = quantize_tucker_weights(model.sigmas, acb)
        msg = codec.QuantizedTucker(
            sizes=tuple(sizes),
            ranks=tuple(spec.ranks),
            phase_bits=phase_bits,
            weight_bits=spec.weight_bits,
            factor_indices=idx_blocks,
            core_phase_indices=core_phase_idx,
            core_mag_indices=core_mag_idx,
            sigma_indices=[qw.indices for qw in sig_q],
        )
        decoded = codec.decode_feedback(codec.encode_feedback(msg).data)
        factors = [
            dequantize_phases(fi.reshape(-1, order="F"), PhaseCodebook(b)).reshape(fi.shape)
            for fi, b in zip(decoded.factor_indices, phase_bits)
        ]
        core = tensorize(
            dequantize_amplitudes(decoded.core_mag_indices, acb)
            * np.exp(1j * core_cb.codewords[decoded.core_phase_indices]),
            spec.ranks,
        )
        # the conveyed core magnitudes already carry the cross-component
        # weighting, so the decode keeps the per-mode weight slots at one;
        # the sigma indices stay in the message for phase-only-core decoders
        ones = [np.ones(r) for r in spec.ranks]
        s_used = reconstruct_from_tucker(factors, core, ones).entries
    else:
        s_used = reconstruct_model(model).entries
    tf, payload = feedback_duration_tucker(
        params, gf_gain, sizes, spec.ranks, phase_bits, spec.weight_bits
    )
    return s_used, tf, payload, report.final_nmse


def run_experiment(cfg: ExperimentConfig) -> list[ResultRow]:
    """Execute every (sweep point, trial, model) cell of the configuration."""
    cfg.validate()
    if cfg.scenario == "fig6":
        return _run_payload_sweep(cfg)

    link_scenario = cfg.scenario in ("fig9", "fig10_12")
    rows: list[ResultRow] = []
    for sweep_idx, sweep_value in enumerate(cfg.grid):
        params, k_linear, n = _params_at(cfg, sweep_value)
        sigma_b2 = params.b_hz * params.n0_w_hz
        for trial in range(cfg.trials):
            seed = trial_seed(cfg.seed, cfg.scenario, sweep_idx, trial)
            rng = np.random.default_rng(seed)
            geo = sample_geometry(params.n_h, params.n_v, rng)
            ch = sample_channels(
                geo,
                params.m_t,
                params.m_r,
                rician_k_h=k_linear,
                rician_k_g=k_linear,
                alpha_h=params.alpha,
                alpha_g=params.alpha,
                beta_f=params.beta_f,
                rng=rng,
            )
            w, q, s_opt = design_beamformers(ch)
            gf_gain = abs(ch.g_f) ** 2
            fit_seeds = rng.integers(0, 2**63, size=len(cfg.models))
            for spec, fit_seed in zip(cfg.models, fit_seeds):
                started = time.perf_counter()
                if isinstance(spec, BaselineSpec):
                    s_used, tf, payload, fit_nmse = _run_baseline(
                        spec, params, s_opt, gf_gain
                    )
                elif isinstance(spec, ParafacSpec):
                    sizes = resolve_sizes(spec, n)
                    s_used, tf, payload, fit_nmse = _run_parafac(
                        spec, params, s_opt, gf_gain, sizes, int(fit_seed), cfg
                    )
                else:
                    sizes = resolve_sizes(spec, n)
                    s_used, tf, payload, fit_nmse = _run_tucker(
                        spec, params, s_opt, gf_gain, sizes
                    )
                gain = cascade_gain(ch, w, q, s_used)
                if link_scenario:
                    rate = link_rate_bpshz(params, gain)
                else:
                    rate = math.log2(1.0 + gain / sigma_b2)
                t_e = params.estimation_time_s()
                se = spectral_efficiency(params, rate, t_e, tf)
                ee = energy_efficiency(params, se, t_e, tf)
                elapsed = time.perf_counter() - started if cfg.measure_time else 0.0
                rows.append(
                    ResultRow(
                        scenario=cfg.scenario,
                        model=spec.label(),
                        sweep_name=cfg.sweep,
                        sweep_value=float(sweep_value),
                        seed=seed,
                        rate_bpshz=rate,
                        se_bps=se,
                        ee_bpj=ee,
                        tf_s=tf,
                        payload_bits=payload,
                        nmse=fit_nmse,
                        elapsed_s=elapsed,
                    )
                )
    return rows


def _run_payload_sweep(cfg: ExperimentConfig) -> list[ResultRow]:
    """Analytic bit-counting sweep (no channel draws)."""
    rows = []
    for sweep_value in cfg.grid:
        n = int(sweep_value) if cfg.sweep == "n" else cfg.n
        for spec in cfg.models:
            if isinstance(spec, BaselineSpec):
                payload = codec.baseline_payload_bits(n, spec.bits)
            elif isinstance(spec, ParafacSpec):
                sizes = resolve_sizes(spec, n)
                payload = codec.parafac_payload_bits(
                    sizes, spec.r, _phase_bits_tuple(spec, sizes), spec.weight_bits
                )
                if cfg.include_preamble:
                    payload += codec.preamble_bits("parafac", len(sizes))
            else:
                sizes = resolve_sizes(spec, n)
                payload = codec.tucker_nominal_payload_bits(
                    sizes, spec.ranks, _phase_bits_tuple(spec, sizes), spec.weight_bits
                )
                if cfg.include_preamble:
                    payload += codec.preamble_bits("tucker", len(sizes))
            rows.append(
                ResultRow(
                    scenario=cfg.scenario,
                    model=spec.label(),
                    sweep_name=cfg.sweep,
                    sweep_value=float(sweep_value),
                    seed=0,
                    rate_bpshz=math.nan,
                    se_bps=math.nan,
                    ee_bpj=math.nan,
                    tf_s=math.nan,
                    payload_bits=payload,
                    nmse=math.nan,
                    elapsed_s=0.0,
                )
            )
    return rows


# --- CSV contract -----------------------------------------------------------


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    return str(value)


def render_csv(rows: list[ResultRow]) -> str:
    """CSV text with the fixed column contract and 17-significant-digit floats."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for row in rows:
        writer.writerow([_fmt(getattr(row, col)) for col in CSV_COLUMNS])
    return buf.getvalue()


def emit_csv(rows: list[ResultRow], path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(render_csv(rows))


def parse_csv(text: str) -> list[dict]:
    """Read the CSV contract back into typed dicts (tests and tooling)."""
    reader = csv.DictReader(io.StringIO(text))
    out = []
    for rec in reader:
        row = dict(rec)
        for key in ("sweep_value", "rate_bpshz", "se_bps", "ee_bpj", "tf_s", "nmse", "elapsed_s"):
            row[key] = float(rec[key])
        for key in ("seed", "payload_bits"):
            row[key] = int(rec[key])
        out.append(row)
    return out
