"""Phase-shift and weighting-factor codebooks with nearest-codeword quantizers.

The phase codebook at resolution b holds the 2^b uniformly spaced angles
{-pi + 2*pi*k/2^b : k = 1..2^b}; quantization maps an angle to the codeword
at minimum wrapped angular distance, breaking exact ties toward the smaller
codeword index.  The amplitude codebook spans [0.01, 1] in 2^b steps, each
codeword rounded to two decimals.

Weight vectors are normalized so the largest entry becomes an implicit,
cost-free 1; only the remaining entries are quantized.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class PhaseCodebook:
    bits: int

    def __post_init__(self):
        if self.bits < 1:
            raise ValueError("phase codebook needs at least 1 bit")

    @property
    def size(self) -> int:
        return 1 << self.bits

    @property
    def codewords(self) -> np.ndarray:
        k = np.arange(1, self.size + 1)
        return -np.pi + 2.0 * np.pi * k / self.size

    @property
    def spacing(self) -> float:
        return 2.0 * np.pi / self.size


@dataclass(frozen=True)
class AmplitudeCodebook:
    bits: int

    def __post_init__(self):
        if self.bits < 1:
            raise ValueError("amplitude codebook needs at least 1 bit")

    @property
    def size(self) -> int:
        return 1 << self.bits

    @property
    def codewords(self) -> np.ndarray:
        step = (1.0 - 0.01) / (self.size - 1)
        return np.round(0.01 + step * np.arange(self.size), 2)


@dataclass(frozen=True)
class QuantizedWeights:
    """Codebook indices for all weights except the largest one, which is
    reconstructed as an exact 1 at `omitted_index`."""

    indices: np.ndarray
    omitted_index: int
    size: int


def _wrapped_distance(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return np.abs(np.mod(a - b + np.pi, 2.0 * np.pi) - np.pi)


def quantize_phases(v, codebook: PhaseCodebook) -> tuple[np.ndarray, np.ndarray]:
    """Quantize the angles of a complex vector onto the phase codebook.

    Returns (0-based codeword indices, unit-modulus quantized vector).  Zero
    entries quantize by their principal angle 0.  The wrapped error never
    exceeds half the codeword spacing.
    """
    v = np.asarray(v, dtype=np.complex128).reshape(-1)
    theta = np.angle(v)  # (-pi, pi]
    size = codebook.size
    delta = codebook.spacing
    x = (theta + np.pi) / delta  # in [0, size]
    lo = np.floor(x).astype(int)
    # candidate codeword numbers in 1..size with circular wrap on both ends
    k_lo = np.where(lo == 0, size, lo)
    hi = lo + 1
    k_hi = np.where(hi > size, 1, hi)
    cw = codebook.codewords
    d_lo = _wrapped_distance(theta, cw[k_lo - 1])
    d_hi = _wrapped_distance(theta, cw[k_hi - 1])
    pick_lo = (d_lo < d_hi) | ((d_lo == d_hi) & (k_lo < k_hi))
    k = np.where(pick_lo, k_lo, k_hi)
    idx = k - 1
    return idx, np.exp(1j * cw[idx])


def dequantize_phases(indices, codebook: PhaseCodebook) -> np.ndarray:
    """Unit-modulus vector from 0-based phase codeword indices."""
    indices = np.asarray(indices, dtype=int).reshape(-1)
    if indices.size and (indices.min() < 0 or indices.max() >= codebook.size):
        raise ValueError("phase codeword index out of range")
    return np.exp(1j * codebook.codewords[indices])


def quantize_amplitudes(values, codebook: AmplitudeCodebook) -> np.ndarray:
    """0-based nearest-codeword indices; ties go to the smaller index."""
    values = np.asarray(values, dtype=float).reshape(-1)
    cw = codebook.codewords
    dist = np.abs(values[:, None] - cw[None, :])
    return dist.argmin(axis=1)


def dequantize_amplitudes(indices, codebook: AmplitudeCodebook) -> np.ndarray:
    indices = np.asarray(indices, dtype=int).reshape(-1)
    if indices.size and (indices.min() < 0 or indices.max() >= codebook.size):
        raise ValueError("amplitude codeword index out of range")
    return codebook.codewords[indices]


def quantize_parafac_weights(weights, codebook: AmplitudeCodebook) -> QuantizedWeights:
    """Normalize by the largest weight (first maximal index on ties), store it
    implicitly as 1 and quantize the remaining entries."""
    weights = np.asarray(weights, dtype=float).reshape(-1)
    if weights.size == 0:
        raise ValueError("empty weight vector")
    peak = int(np.argmax(weights))
    if weights[peak] <= 0.0:
        raise ValueError("weight vector needs a strictly positive maximum")
    normalized = weights / weights[peak]
    rest = np.delete(normalized, peak)
    return QuantizedWeights(
        indices=quantize_amplitudes(rest, codebook),
        omitted_index=peak,
        size=weights.size,
    )


def quantize_tucker_weights(sigmas, codebook: AmplitudeCodebook) -> list[QuantizedWeights]:
    """Per-mode singular weights: each vector is normalized by its first
    (largest) entry, which is stored implicitly."""
    out = []
    for p, sigma in enumerate(sigmas, start=1):
        sigma = np.asarray(sigma, dtype=float).reshape(-1)
        if sigma.size == 0:
            raise ValueError(f"mode {p} weight vector is empty")
        if sigma[0] <= 0.0:
            raise ValueError(f"mode {p} leading singular value must be > 0")
        if np.any(np.diff(sigma) > 0):
            raise ValueError(f"mode {p} weights must be non-increasing")
        rest = sigma[1:] / sigma[0]
        out.append(
            QuantizedWeights(
                indices=quantize_amplitudes(rest, codebook),
                omitted_index=0,
                size=sigma.size,
            )
        )
    return out


def dequantize_weights(q: QuantizedWeights, codebook: AmplitudeCodebook) -> np.ndarray:
    """Rebuild the normalized weight vector with the exact 1 reinserted."""
    if not 0 <= q.omitted_index < q.size:
        raise ValueError("omitted index out of range")
    if q.indices.size != q.size - 1:
        raise ValueError("index count inconsistent with weight vector size")
    rest = dequantize_amplitudes(q.indices, codebook)
    return np.insert(rest, q.omitted_index, 1.0)
