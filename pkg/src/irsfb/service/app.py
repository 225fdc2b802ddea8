"""HTTP service wrapping the feedback-compression library.

Endpoints mirror the CLI subcommands: payload accounting, tensor fits of a
phase vector, codec round-trip checks and full simulation runs.  All state
lives in the request; the app is safe to share across workers.
"""

import math

import numpy as np
from fastapi import FastAPI, HTTPException

from .. import codec
from ..decomposition import parafac_als, sort_components, tucker_hosvd
from ..harness import ConfigError, parse_config, render_csv, run_experiment
from ..tensor_ops import tensorize, untensorize
from .schemas import (
    CodecMessage,
    CodecResponse,
    DecomposeRequest,
    DecomposeResponse,
    HealthResponse,
    PayloadRequest,
    PayloadResponse,
    SimulateRequest,
    SimulateResponse,
)

API_VERSION = "0.1.0"


def _resolve_sizes(req: PayloadRequest) -> tuple[int, ...] | None:
    if req.model == "baseline":
        return None
    if req.auto_p is not None:
        p = req.auto_p
        if req.n % (1 << (p - 1)) != 0:
            raise HTTPException(422, f"auto sizes need n divisible by 2^{p - 1}")
        return (req.n >> (p - 1),) + (2,) * (p - 1)
    sizes = tuple(req.sizes)
    if math.prod(sizes) != req.n:
        raise HTTPException(422, f"sizes {sizes} do not multiply to n={req.n}")
    return sizes


def _pairs_to_vector(values) -> np.ndarray:
    arr = np.asarray(values, dtype=float)
    return arr[:, 0] + 1j * arr[:, 1]


def _vector_to_pairs(v) -> list[tuple[float, float]]:
    return [(float(z.real), float(z.imag)) for z in np.asarray(v).reshape(-1)]


def _matrix_to_pairs(m) -> list[list[tuple[float, float]]]:
    return [[(float(z.real), float(z.imag)) for z in row] for row in np.asarray(m)]


def create_app() -> FastAPI:
    app = FastAPI(
        title="irsfb",
        version=API_VERSION,
        description="Low-rank tensor compression of IRS phase-shift feedback",
    )

    @app.get("/healthz", response_model=HealthResponse)
    def healthz():
        return HealthResponse(status="ok", version=API_VERSION)

    @app.post("/payload", response_model=PayloadResponse)
    def payload(req: PayloadRequest):
        sizes = _resolve_sizes(req)
        pre = 0
        core_phases = 0
        if req.model == "baseline":
            bits = codec.baseline_payload_bits(req.n, int(req.phase_bits))
            phases = req.n
        elif req.model == "parafac":
            bits = codec.parafac_payload_bits(sizes, req.r, req.phase_bits, req.weight_bits)
            phases = req.r * sum(sizes)
            if req.include_preamble:
                pre = codec.preamble_bits("parafac", len(sizes))
        else:
            ranks = tuple(req.ranks)
            if len(ranks) != len(sizes):
                raise HTTPException(422, "one rank per factor required")
            bits = codec.tucker_nominal_payload_bits(
                sizes, ranks, req.phase_bits, req.weight_bits
            )
            phases = sum(r * n for r, n in zip(ranks, sizes))
            core_phases = math.prod(ranks)
            if req.include_preamble:
                pre = codec.preamble_bits("tucker", len(sizes))
        total = bits + pre
        baseline_total = codec.baseline_payload_bits(req.n, req.baseline_bits)
        tf_s = None
        if req.link is not None:
            snr = req.link.feedback_power_w * req.link.gf_gain / (
                req.link.bf_hz * req.link.n0_w_hz
            )
            capacity = req.link.bf_hz * math.log2(1.0 + snr)
            if capacity <= 0:
                raise HTTPException(422, "feedback link capacity is zero")
            tf_s = total / capacity
        return PayloadResponse(
            model=req.model,
            sizes=list(sizes) if sizes else None,
            phases_conveyed=phases,
            core_phases=core_phases,
            payload_bits=bits,
            preamble_bits=pre,
            total_bits=total,
            baseline_total_bits=baseline_total,
            ratio_vs_baseline=baseline_total / total,
            tf_s=tf_s,
        )

    @app.post("/decompose", response_model=DecomposeResponse)
    def decompose(req: DecomposeRequest):
        if math.prod(req.shape) != len(req.values):
            raise HTTPException(422, "shape does not match the vector length")
        vec = _pairs_to_vector(req.values)
        try:
            tensor = tensorize(vec, req.shape)
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from exc
        if req.model == "parafac":
            model, report = parafac_als(
                tensor, req.r, max_iters=req.max_iters, epsilon=req.epsilon, rng=req.seed
            )
            model = sort_components(model)
            return DecomposeResponse(
                model="parafac",
                shape=req.shape,
                iterations=report.iterations,
                converged=report.converged,
                over_parameterized=report.over_parameterized,
                final_nmse=report.final_nmse,
                nmse_trace=report.nmse_trace,
                weights=[float(x) for x in model.weights],
                factors=[_matrix_to_pairs(f) for f in model.factors]
                if req.include_factors
                else None,
            )
        try:
            model, report = tucker_hosvd(tensor, req.ranks)
        except ValueError as exc:
            raise HTTPException(422, str(exc)) from exc
        return DecomposeResponse(
            model="tucker",
            shape=req.shape,
            iterations=report.iterations,
            converged=report.converged,
            over_parameterized=report.over_parameterized,
            final_nmse=report.final_nmse,
            nmse_trace=report.nmse_trace,
            sigmas=[[float(x) for x in s] for s in model.sigmas],
            factors=[_matrix_to_pairs(f) for f in model.factors]
            if req.include_factors
            else None,
            core=_vector_to_pairs(untensorize(model.core)) if req.include_factors else None,
        )

    @app.post("/codec/roundtrip", response_model=CodecResponse)
    def codec_roundtrip(req: CodecMessage):
        try:
            msg = _message_from_schema(req)
            encoded = codec.encode_feedback(msg)
            decoded = codec.decode_feedback(encoded.data)
            analytic = codec.message_bit_length(msg)
        except codec.CodecError as exc:
            raise HTTPException(422, str(exc)) from exc
        return CodecResponse(
            model=req.model,
            bit_length=encoded.bit_length,
            byte_length=len(encoded.data),
            analytic_bits=analytic,
            length_matches=encoded.bit_length == analytic,
            roundtrip_ok=codec.messages_equal(msg, decoded),
            encoded_hex=encoded.data.hex(),
        )

    @app.post("/simulate", response_model=SimulateResponse)
    def simulate(req: SimulateRequest):
        try:
            cfg = parse_config(req.config_text)
            if req.trials_override is not None:
                cfg.trials = req.trials_override
            rows = run_experiment(cfg)
        except ConfigError as exc:
            raise HTTPException(422, str(exc)) from exc
        return SimulateResponse(scenario=cfg.scenario, rows=len(rows), csv=render_csv(rows))

    return app


def _message_from_schema(req: CodecMessage):
    if req.model == "baseline":
        if req.n is None or req.phase_indices is None:
            raise codec.CodecError("baseline messages need n and phase_indices")
        return codec.QuantizedBaseline(
            n=req.n,
            phase_bits=int(req.phase_bits),
            phase_indices=np.asarray(req.phase_indices, dtype=np.int64),
        )
    if req.sizes is None or req.factor_indices is None:
        raise codec.CodecError("factorized messages need sizes and factor_indices")
    factors = [np.asarray(block, dtype=np.int64) for block in req.factor_indices]
    if req.model == "parafac":
        if req.r is None:
            raise codec.CodecError("parafac messages need r")
        return codec.QuantizedParafac(
            sizes=tuple(req.sizes),
            r=req.r,
            phase_bits=_bits_tuple(req.phase_bits, len(req.sizes)),
            weight_bits=req.weight_bits,
            factor_indices=factors,
            weight_indices=np.asarray(req.weight_indices or [], dtype=np.int64),
        )
    if req.ranks is None:
        raise codec.CodecError("tucker messages need ranks")
    return codec.QuantizedTucker(
        sizes=tuple(req.sizes),
        ranks=tuple(req.ranks),
        phase_bits=_bits_tuple(req.phase_bits, len(req.sizes)),
        weight_bits=req.weight_bits,
        factor_indices=factors,
        core_phase_indices=np.asarray(req.core_phase_indices or [], dtype=np.int64),
        core_mag_indices=np.asarray(req.core_mag_indices or [], dtype=np.int64),
        sigma_indices=[np.asarray(s, dtype=np.int64) for s in (req.sigma_indices or [])],
    )


def _bits_tuple(bits, p):
    if isinstance(bits, int):
        return (bits,) * p
    return tuple(bits)
