"""Complex SVD, pseudo-inverse and dominant singular triplets.

Thin wrappers over LAPACK with a deterministic phase convention: the
largest-magnitude entry of every left singular vector is rotated to be real
and positive (the matching row of Vh absorbs the conjugate rotation), so
repeated runs and different BLAS builds produce the same factors up to
floating-point noise.  Downstream phase-shift design depends on that.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class SvdResult:
    u: np.ndarray
    singular_values: np.ndarray
    vh: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.u * self.singular_values) @ self.vh


def _check_finite(m: np.ndarray, what: str) -> None:
    if not (np.all(np.isfinite(m.real)) and np.all(np.isfinite(m.imag))):
        raise ValueError(f"non-finite entries in {what}")


def svd(m) -> SvdResult:
    """Thin SVD of a complex matrix with the phase convention applied.

    Singular values come back non-increasing; U has orthonormal columns and
    Vh orthonormal rows.
    """
    m = np.asarray(m, dtype=np.complex128)
    _check_finite(m, "svd input")
    u, s, vh = np.linalg.svd(m, full_matrices=False)
    # rotate each column of u so its largest-|.| entry is real positive
    anchor = np.abs(u).argmax(axis=0)
    phases = u[anchor, np.arange(u.shape[1])]
    mags = np.abs(phases)
    rot = np.where(mags > 0, np.conj(phases) / np.where(mags > 0, mags, 1.0), 1.0)
    u = u * rot[None, :]
    vh = vh * np.conj(rot)[:, None]
    return SvdResult(u=u, singular_values=s, vh=vh)


def pseudo_inverse(m, rtol: float = 1e-12) -> np.ndarray:
    """Moore-Penrose pseudo-inverse; singular values below rtol*s_max drop out."""
    m = np.asarray(m, dtype=np.complex128)
    _check_finite(m, "pseudo_inverse input")
    return np.linalg.pinv(m, rcond=rtol)


def dominant_singular_vectors(m) -> tuple[np.ndarray, float, np.ndarray]:
    """First singular triplet (u_1, sigma_1, v_1) under the phase convention."""
    res = svd(m)
    return res.u[:, 0], float(res.singular_values[0]), res.vh[0, :].conj()
