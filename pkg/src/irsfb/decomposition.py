"""Low-rank tensor fits of the phase-shift tensor.

Two models are supported:

* a canonical-polyadic fit (sum of R rank-one terms) computed by alternating
  least squares, with unit-norm factor columns and the column norms collected
  into a weighting vector; and
* a multilinear (orthogonal factors + core) fit computed by truncated
  higher-order SVD, where the per-mode singular values are kept as weights.

Both report a normalized reconstruction error trace so callers can reason
about convergence and model quality.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .linalg import pseudo_inverse, svd
from .tensor_ops import khatri_rao_chain, unfold, untensorize

DEFAULT_EPSILON = 1e-6
DEFAULT_MAX_ITERS = 200
_DEGENERATE_NORM = 1e-14


@dataclass
class ParafacModel:
    """Rank-R canonical model: P factor matrices (N_p x R, unit-norm columns)
    and a non-negative weight per component."""

    factors: list[np.ndarray]
    weights: np.ndarray

    @property
    def order(self) -> int:
        return len(self.factors)

    @property
    def rank(self) -> int:
        return int(self.weights.size)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(f.shape[0] for f in self.factors)


@dataclass
class TuckerModel:
    """Multilinear model: orthonormal factors (N_p x R_p), core tensor of
    shape (R_1, ..., R_P) and per-mode singular-value weights."""

    factors: list[np.ndarray]
    core: np.ndarray
    sigmas: list[np.ndarray]

    @property
    def order(self) -> int:
        return len(self.factors)

    @property
    def ranks(self) -> tuple[int, ...]:
        return tuple(f.shape[1] for f in self.factors)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(f.shape[0] for f in self.factors)


@dataclass
class FitReport:
    iterations: int
    nmse_trace: list[float] = field(default_factory=list)
    converged: bool = False
    over_parameterized: bool = False

    @property
    def final_nmse(self) -> float:
        return self.nmse_trace[-1] if self.nmse_trace else math.nan


def nmse(reference, estimate) -> float:
    """Normalized squared error ||ref - est||_F^2 / ||ref||_F^2."""
    reference = np.asarray(reference, dtype=np.complex128)
    estimate = np.asarray(estimate, dtype=np.complex128)
    if reference.shape != estimate.shape:
        raise ValueError(f"shape mismatch {reference.shape} vs {estimate.shape}")
    ref_energy = float(np.sum(np.abs(reference) ** 2))
    if ref_energy == 0.0:
        raise ValueError("reference tensor has zero norm")
    return float(np.sum(np.abs(reference - estimate) ** 2)) / ref_energy


def _kr_others(factors: list[np.ndarray], skip: int, rank: int) -> np.ndarray:
    """Khatri-Rao chain of all factors except `skip`, highest mode first."""
    mats = [factors[q] for q in range(len(factors) - 1, -1, -1) if q != skip]
    if not mats:
        return np.ones((1, rank), dtype=np.complex128)
    return khatri_rao_chain(mats)


def _weighted(factor: np.ndarray, lam: np.ndarray) -> np.ndarray:
    return factor * lam[None, :]


def reconstruct_parafac_unfolding(model: ParafacModel) -> np.ndarray:
    """Mode-1 unfolding of the model: S^(1) diag(w) (S^(P) kr ... kr S^(2))^T."""
    right = _kr_others(model.factors, 0, model.rank)
    return (model.factors[0] * model.weights) @ right.T


def parafac_als(
    t,
    rank: int,
    max_iters: int = DEFAULT_MAX_ITERS,
    epsilon: float = DEFAULT_EPSILON,
    rng=None,
) -> tuple[ParafacModel, FitReport]:
    """Alternating-least-squares canonical fit of a dense complex tensor.

    Each iteration solves one linear LS problem per mode through the mode
    unfolding and the Khatri-Rao product of the remaining factors, then
    normalizes the new factor's columns, accumulating the norms into the
    per-mode weight vector.  The run stops once the change of the normalized
    reconstruction error between consecutive iterations drops to `epsilon`,
    or after `max_iters` iterations.

    Parameters
    ----------
    t:
        Complex tensor (any order >= 1) with finite entries.
    rank:
        Number of rank-one components R >= 1.
    rng:
        Seed or numpy Generator for the random factor initialization.
    """
    t = np.asarray(t, dtype=np.complex128)
    if rank < 1:
        raise ValueError("rank must be >= 1")
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    if epsilon <= 0:
        raise ValueError("epsilon must be > 0")
    if not (np.all(np.isfinite(t.real)) and np.all(np.isfinite(t.imag))):
        raise ValueError("non-finite entries in input tensor")
    gen = np.random.default_rng(rng)
    shape = t.shape
    order = t.ndim

    def random_unit_columns(n: int) -> np.ndarray:
        f = gen.standard_normal((n, rank)) + 1j * gen.standard_normal((n, rank))
        return f / np.linalg.norm(f, axis=0, keepdims=True)

    factors = [random_unit_columns(n) for n in shape]
    lambdas = [np.ones(rank) for _ in range(order)]
    unfoldings = [unfold(t, p + 1) for p in range(order)]
    ref_unfold = unfoldings[0]
    ref_energy = float(np.sum(np.abs(ref_unfold) ** 2))
    if ref_energy == 0.0:
        raise ValueError("cannot fit an all-zero tensor")

    max_rank = min(
        math.prod(shape[q] for q in range(order) if q != p) for p in range(order)
    )
    report = FitReport(iterations=0, over_parameterized=rank > max_rank)

    weights = np.ones(rank)
    for it in range(1, max_iters + 1):
        for p in range(order):
            # the LS design carries each remaining factor's column norms, so
            # the solved norms replace this mode's weights rather than stack
            # the global scale up once per mode
            others = [_weighted(f, lam) for f, lam in zip(factors, lambdas)]
            design = _kr_others(others, p, rank)
            estimate = unfoldings[p] @ pseudo_inverse(design.T)
            norms = np.linalg.norm(estimate, axis=0)
            degenerate = norms < _DEGENERATE_NORM
            if np.any(degenerate):
                refresh = random_unit_columns(shape[p])
                estimate[:, degenerate] = refresh[:, degenerate]
                estimate[:, ~degenerate] /= norms[~degenerate]
            else:
                estimate /= norms
            factors[p] = estimate
            lambdas[p] = norms
        weights = lambdas[0].copy()
        for lam in lambdas[1:]:
            weights = weights * lam
        model = ParafacModel(factors=[f.copy() for f in factors], weights=weights)
        err = float(
            np.sum(np.abs(ref_unfold - reconstruct_parafac_unfolding(model)) ** 2)
        ) / ref_energy
        report.nmse_trace.append(err)
        report.iterations = it
        if it >= 2 and abs(report.nmse_trace[-1] - report.nmse_trace[-2]) <= epsilon:
            report.converged = True
            break

    return ParafacModel(factors=factors, weights=weights), report


def sort_components(model: ParafacModel) -> ParafacModel:
    """Reorder components by non-increasing weight (stable).

    The canonical model is invariant under component permutations; sorting
    makes the largest weight sit at index 0 so the codec can store the unit
    weight implicitly.
    """
    order = np.argsort(-model.weights, kind="stable")
    return ParafacModel(
        factors=[f[:, order] for f in model.factors],
        weights=model.weights[order],
    )


def mode_product(t, m, mode: int) -> np.ndarray:
    """Multiply tensor `t` along 1-based `mode` by matrix `m` (rows index out)."""
    t = np.asarray(t, dtype=np.complex128)
    m = np.asarray(m, dtype=np.complex128)
    moved = np.moveaxis(t, mode - 1, 0)
    out = np.tensordot(m, moved, axes=(1, 0))
    return np.moveaxis(out, 0, mode - 1)


def reconstruct_tucker(model: TuckerModel) -> np.ndarray:
    """Dense tensor from a multilinear model: core multiplied by every factor."""
    out = model.core
    for p, f in enumerate(model.factors, start=1):
        out = mode_product(out, f, p)
    return out


def tucker_hosvd(t, ranks) -> tuple[TuckerModel, FitReport]:
    """Truncated higher-order SVD fit.

    The p-th factor is the first R_p left singular vectors of the mode-p
    unfolding and the core is the projection of the tensor onto those bases,
    equal to (S^(P) kron ... kron S^(1))^H vec(t) reshaped to (R_1, ..., R_P).
    Non-iterative; the report carries the one-shot reconstruction error.
    """
    t = np.asarray(t, dtype=np.complex128)
    ranks = tuple(int(r) for r in ranks)
    if len(ranks) != t.ndim:
        raise ValueError(f"{len(ranks)} ranks given for an order-{t.ndim} tensor")
    for p, (r, n) in enumerate(zip(ranks, t.shape), start=1):
        if not 1 <= r <= n:
            raise ValueError(f"rank {r} out of range for mode {p} of size {n}")

    factors: list[np.ndarray] = []
    sigmas: list[np.ndarray] = []
    for p in range(1, t.ndim + 1):
        res = svd(unfold(t, p))
        factors.append(res.u[:, : ranks[p - 1]])
        sigmas.append(res.singular_values[: ranks[p - 1]].copy())

    core = t
    for p, f in enumerate(factors, start=1):
        core = mode_product(core, f.conj().T, p)

    model = TuckerModel(factors=factors, core=core, sigmas=sigmas)
    err = nmse(t, reconstruct_tucker(model))
    report = FitReport(iterations=1, nmse_trace=[err], converged=True)
    return model, report


def tucker_core_vector(model: TuckerModel) -> np.ndarray:
    """Column-major vectorization of the core tensor."""
    return untensorize(model.core)
