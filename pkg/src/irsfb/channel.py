"""Rician MIMO channel synthesis with geometric line-of-sight components.

The TX and RX carry half-wavelength uniform linear arrays; the reflecting
surface is a uniform planar array whose steering vectors factor as the
Kronecker product of a vertical and a horizontal component (horizontal
element index fastest, matching the column-major tensorization of the
phase-shift vector).  Draws are parameterized by an explicit numpy
Generator so Monte-Carlo trials stay reproducible and independent.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class GeometrySample:
    """Angles of one propagation geometry draw (radians).

    Azimuths live in [-pi, pi], elevations in [0, pi/2].
    """

    theta_tx: float
    theta_rx: float
    psi_aoa: float
    psi_aod: float
    phi_aoa: float
    phi_aod: float
    n_h: int
    n_v: int


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the TX-IRS channel H (N x M_T), the IRS-RX channel G
    (M_R x N) and the scalar feedback control channel g_f."""

    h: np.ndarray
    g: np.ndarray
    g_f: complex
    rician_k_h: float
    rician_k_g: float
    alpha_h: float
    alpha_g: float

    @property
    def n(self) -> int:
        return self.h.shape[0]


def ula_steering(m: int, theta: float) -> np.ndarray:
    """Half-wavelength ULA steering vector: entries e^{j pi (m-1) sin(theta)}."""
    if m < 1:
        raise ValueError("array size must be >= 1")
    return np.exp(1j * np.pi * np.arange(m) * np.sin(theta))


def upa_steering(n_h: int, n_v: int, azimuth: float, elevation: float) -> np.ndarray:
    """Planar-array steering vector as vertical (x) horizontal Kronecker factors.

    Horizontal phases grow as pi (n_h - 1) sin(azimuth) cos(elevation) and
    vertical phases as pi (n_v - 1) cos(elevation); the horizontal index runs
    fastest in the flat output of length n_h * n_v.
    """
    if n_h < 1 or n_v < 1:
        raise ValueError("panel dimensions must be >= 1")
    horiz = np.exp(1j * np.pi * np.arange(n_h) * np.sin(azimuth) * np.cos(elevation))
    vert = np.exp(1j * np.pi * np.arange(n_v) * np.cos(elevation))
    return np.kron(vert, horiz)


def sample_geometry(n_h: int, n_v: int, rng: np.random.Generator) -> GeometrySample:
    """Draw all link angles from their uniform distributions."""
    return GeometrySample(
        theta_tx=float(rng.uniform(-np.pi, np.pi)),
        theta_rx=float(rng.uniform(-np.pi, np.pi)),
        psi_aoa=float(rng.uniform(-np.pi, np.pi)),
        psi_aod=float(rng.uniform(-np.pi, np.pi)),
        phi_aoa=float(rng.uniform(0.0, np.pi / 2)),
        phi_aod=float(rng.uniform(0.0, np.pi / 2)),
        n_h=n_h,
        n_v=n_v,
    )


def _cn(rng: np.random.Generator, *shape) -> np.ndarray:
    """Circularly symmetric complex Gaussian entries, unit variance."""
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)


def sample_channels(
    geometry: GeometrySample,
    m_t: int,
    m_r: int,
    rician_k_h: float,
    rician_k_g: float,
    alpha_h: float = 1.0,
    alpha_g: float = 1.0,
    beta_f: float | None = None,
    rng: np.random.Generator | None = None,
) -> ChannelRealization:
    """Draw one Rician channel pair plus the scalar feedback channel.

    H mixes a rank-one geometric LOS term b_irs a_tx^H with an i.i.d.
    CN(0, 1) NLOS matrix under the K-factor weighting
    sqrt(alpha K/(K+1)) LOS + sqrt(alpha/(K+1)) NLOS; G is built the same
    way from b_rx a_irs^H.  The feedback channel is CN(0, 1) scaled by
    sqrt(beta_f), beta_f defaulting to the common pathloss.
    """
    if rician_k_h < 0 or rician_k_g < 0:
        raise ValueError("Rician K factors must be >= 0")
    if alpha_h < 0 or alpha_g < 0:
        raise ValueError("pathloss gains must be >= 0")
    if rng is None:
        rng = np.random.default_rng()
    if beta_f is None:
        beta_f = alpha_h

    b_irs = upa_steering(geometry.n_h, geometry.n_v, geometry.psi_aoa, geometry.phi_aoa)
    a_irs = upa_steering(geometry.n_h, geometry.n_v, geometry.psi_aod, geometry.phi_aod)
    a_tx = ula_steering(m_t, geometry.theta_tx)
    b_rx = ula_steering(m_r, geometry.theta_rx)

    n = geometry.n_h * geometry.n_v
    h_los = np.outer(b_irs, a_tx.conj())
    g_los = np.outer(b_rx, a_irs.conj())
    h_nlos = _cn(rng, n, m_t)
    g_nlos = _cn(rng, m_r, n)

    kh, kg = rician_k_h, rician_k_g
    h = np.sqrt(alpha_h * kh / (kh + 1.0)) * h_los + np.sqrt(alpha_h / (kh + 1.0)) * h_nlos
    g = np.sqrt(alpha_g * kg / (kg + 1.0)) * g_los + np.sqrt(alpha_g / (kg + 1.0)) * g_nlos
    g_f = complex(np.sqrt(beta_f) * _cn(rng))

    return ChannelRealization(
        h=h,
        g=g,
        g_f=g_f,
        rician_k_h=kh,
        rician_k_g=kg,
        alpha_h=alpha_h,
        alpha_g=alpha_g,
    )
