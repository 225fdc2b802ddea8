"""Rebuild the unit-modulus phase-shift vector from (quantized) factors.

The controller receives factor matrices plus weights, sums the weighted
Kronecker terms into a complex vector and projects every entry back onto the
unit circle by keeping only its angle.  Entries whose superposition cancels
to exactly zero take phase 0; they are counted, not dropped.
"""

from dataclasses import dataclass

import numpy as np

from .decomposition import ParafacModel, TuckerModel, mode_product
from .tensor_ops import khatri_rao_chain, untensorize


@dataclass(frozen=True)
class PhaseShiftVector:
    """Unit-modulus configuration vector plus reconstruction diagnostics."""

    entries: np.ndarray
    zero_phase_entries: int = 0

    @property
    def n(self) -> int:
        return int(self.entries.size)


def _project_unit_modulus(raw: np.ndarray) -> PhaseShiftVector:
    zeros = int(np.count_nonzero(raw == 0))
    return PhaseShiftVector(
        entries=np.exp(1j * np.angle(raw)), zero_phase_entries=zeros
    )


def _ordered(factors: list[np.ndarray], factor_order: str) -> list[np.ndarray]:
    if factor_order == "modes-ascending":
        return list(factors)
    if factor_order == "modes-descending":
        return list(reversed(factors))
    raise ValueError(f"unknown factor order {factor_order!r}")


def reconstruct_from_parafac(
    factors: list[np.ndarray],
    weights: np.ndarray,
    factor_order: str = "modes-ascending",
) -> PhaseShiftVector:
    """Sum of weighted Kronecker columns, highest mode slowest, then the
    unit-modulus projection.

    `factors[p]` holds the mode-(p+1) factor (N_p x R); `weights` has one
    non-negative entry per component.
    """
    factors = _ordered(factors, factor_order)
    weights = np.asarray(weights, dtype=float).reshape(-1)
    if any(f.shape[1] != weights.size for f in factors):
        raise ValueError("factor column counts must match the weight count")
    stacked = khatri_rao_chain(list(reversed(factors)))
    raw = stacked @ weights.astype(np.complex128)
    return _project_unit_modulus(raw)


def reconstruct_from_tucker(
    factors: list[np.ndarray],
    core: np.ndarray,
    sigmas: list[np.ndarray],
    factor_order: str = "modes-ascending",
) -> PhaseShiftVector:
    """Weighted multilinear expansion of the core, then unit-modulus projection.

    Each factor's columns are scaled by that mode's weights before the core
    is expanded, matching the per-mode normalization done on the encoder side.
    """
    factors = _ordered(factors, factor_order)
    if len(sigmas) != len(factors):
        raise ValueError("one weight vector needed per factor")
    core = np.asarray(core, dtype=np.complex128)
    if core.ndim != len(factors):
        raise ValueError("core order must match the factor count")
    out = core
    for p, (f, sig) in enumerate(zip(factors, sigmas), start=1):
        sig = np.asarray(sig, dtype=float).reshape(-1)
        if f.shape[1] != sig.size or core.shape[p - 1] != sig.size:
            raise ValueError(f"mode {p} rank mismatch")
        out = mode_product(out, f * sig[None, :], p)
    return _project_unit_modulus(untensorize(out))


def reconstruct_model(model: ParafacModel | TuckerModel) -> PhaseShiftVector:
    """Convenience wrapper for unquantized models.

    A multilinear model's core already carries the full weighting, so the
    per-mode weight slots are fed with ones here; explicit weights belong to
    decoders that only received core phases and must reintroduce magnitudes
    through the per-mode singular weights.
    """
    if isinstance(model, ParafacModel):
        return reconstruct_from_parafac(model.factors, model.weights)
    ones = [np.ones(r) for r in model.ranks]
    return reconstruct_from_tucker(model.factors, model.core, ones)
