"""Link-budget model: beamformer design, feedback durations, SE and EE.

Durations follow the limited-feedback control-link model: the time to convey
a payload of B bits over a feedback channel of capacity
B_F * log2(1 + p_F |g_F|^2 / (B_F N_0)).  The frame splits 30% pilots / 70%
data, the channel-estimation phase lasts (M_T N + 1) pilot tones, and the
total frame is the pilot+data block plus the feedback duration.  All logs
are base 2.
"""

import math
from dataclasses import dataclass, replace

import numpy as np

from . import codec
from .channel import ChannelRealization
from .linalg import svd


def db_to_linear(db: float) -> float:
    return 10.0 ** (db / 10.0)


def linear_to_db(x: float) -> float:
    return 10.0 * math.log10(x)


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** ((dbm - 30.0) / 10.0)


@dataclass(frozen=True)
class SystemParams:
    """All link constants; defaults follow the reference parameter table
    (P_max = P_c0 = 45 dBm, P_cn = 10 dBm, B_max = 100 MHz, N_0 = -174 dBm/Hz,
    110 dB pathloss, unit amplifier efficiencies, 0.8 us pilot tones of
    0.8 mW)."""

    n: int = 1024
    m_t: int = 16
    m_r: int = 16
    n_h: int = 32
    n_v: int = 32
    b_max_hz: float = 100e6
    bf_hz: float = 1e6
    p_max_w: float = dbm_to_watts(45.0)
    p_f_w: float | None = None  # defaults to half of p_max
    n0_w_hz: float = dbm_to_watts(-174.0)
    pathloss_db: float = 110.0
    feedback_pathloss_db: float | None = None  # defaults to pathloss_db
    mu: float = 1.0
    mu_f: float = 1.0
    t0_s: float = 0.8e-6
    p0_w: float = 0.8e-3
    p_c0_w: float = dbm_to_watts(45.0)
    p_cn_w: float = dbm_to_watts(10.0)
    pilot_fraction: float = 0.3
    data_fraction: float = 0.7
    include_preamble: bool = True

    def __post_init__(self):
        if min(self.n, self.m_t, self.m_r, self.n_h, self.n_v) < 1:
            raise ValueError("array sizes must be >= 1")
        if self.n_h * self.n_v != self.n:
            raise ValueError(f"panel {self.n_h}x{self.n_v} inconsistent with n={self.n}")
        for name in ("b_max_hz", "bf_hz", "p_max_w", "n0_w_hz", "t0_s", "p0_w"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if not self.bf_hz < self.b_max_hz:
            raise ValueError("feedback bandwidth must leave room for transmission")
        if abs(self.pilot_fraction + self.data_fraction - 1.0) > 1e-12:
            raise ValueError("pilot and data fractions must sum to 1")
        if self.p_f_w is not None and not 0 < self.p_f_w < self.p_max_w:
            raise ValueError("feedback power must split the total budget")

    @property
    def b_hz(self) -> float:
        return self.b_max_hz - self.bf_hz

    @property
    def feedback_power_w(self) -> float:
        return self.p_max_w / 2.0 if self.p_f_w is None else self.p_f_w

    @property
    def tx_power_w(self) -> float:
        return self.p_max_w - self.feedback_power_w

    @property
    def alpha(self) -> float:
        """Linear pathloss gain of each hop."""
        return db_to_linear(-self.pathloss_db)

    @property
    def beta_f(self) -> float:
        """Linear pathloss gain of the feedback control link."""
        db = self.pathloss_db if self.feedback_pathloss_db is None else self.feedback_pathloss_db
        return db_to_linear(-db)

    def estimation_time_s(self) -> float:
        """Channel estimation duration: (M_T N + 1) pilot tones."""
        return (self.m_t * self.n + 1) * self.t0_s

    def pilot_data_time_s(self) -> float:
        """Pilot+data block duration from the 30/70 split."""
        return self.estimation_time_s() / self.pilot_fraction

    def estimation_power_w(self) -> float:
        return self.p0_w * (1 + self.n * self.m_t) * self.t0_s

    def static_power_w(self) -> float:
        return self.p_c0_w + self.n * self.p_cn_w

    def with_overrides(self, **kwargs) -> "SystemParams":
        return replace(self, **kwargs)


def design_beamformers(ch: ChannelRealization):
    """Upper-bound combiner/precoder plus the phase-aligning reflection vector.

    w is the dominant left singular vector of G, q the dominant right singular
    vector of H, and each reflection phase cancels the cascaded phase of its
    element so all N terms of w^H G diag(s) H q add coherently.
    """
    res_g = svd(ch.g)
    res_h = svd(ch.h)
    if res_g.singular_values[0] == 0 or res_h.singular_values[0] == 0:
        raise ValueError("zero channel")
    w = res_g.u[:, 0]
    q = res_h.vh[0, :].conj()
    v_g = res_g.vh[0, :].conj()  # dominant right singular vector of G
    u_h = res_h.u[:, 0]  # dominant left singular vector of H
    s_opt = np.exp(-1j * np.angle(np.conj(v_g) * u_h))
    return w, q, s_opt


def cascade_gain(ch: ChannelRealization, w, q, s) -> float:
    """|w^H G diag(s) H q|^2 for a reflection configuration s."""
    inner = np.conj(w) @ (ch.g * np.asarray(s)[None, :]) @ (ch.h @ q)
    return float(np.abs(inner) ** 2)


def achievable_rate(ch: ChannelRealization, w, q, s, sigma_b2: float) -> float:
    """Upper-bound data rate log2(1 + |w^H G S H q|^2 / sigma_b^2), bits/s/Hz."""
    if sigma_b2 <= 0:
        raise ValueError("noise power must be > 0")
    return math.log2(1.0 + cascade_gain(ch, w, q, s) / sigma_b2)


def feedback_capacity_bps(params: SystemParams, gf_gain: float) -> float:
    """Control link capacity B_F log2(1 + p_F |g_F|^2 / (B_F N_0))."""
    snr = params.feedback_power_w * gf_gain / (params.bf_hz * params.n0_w_hz)
    cap = params.bf_hz * math.log2(1.0 + snr)
    if cap <= 0.0:
        raise ValueError("feedback link capacity is zero")
    return cap


def feedback_duration_baseline(
    params: SystemParams, gf_gain: float, bits_per_phase: int
) -> tuple[float, int]:
    """Unfactorized benchmark: N phases at b bits each, no preamble."""
    payload = codec.baseline_payload_bits(params.n, bits_per_phase)
    return payload / feedback_capacity_bps(params, gf_gain), payload


def feedback_duration_parafac(
    params: SystemParams,
    gf_gain: float,
    sizes,
    r: int,
    phase_bits,
    weight_bits: int,
) -> tuple[float, int]:
    """Canonical model: R * sum(N_p b_p) phase bits plus R-1 weights, plus the
    preamble when the configuration charges it."""
    payload = codec.parafac_payload_bits(sizes, r, phase_bits, weight_bits)
    if params.include_preamble:
        payload += codec.preamble_bits("parafac", len(tuple(sizes)))
    return payload / feedback_capacity_bps(params, gf_gain), payload


def feedback_duration_tucker(
    params: SystemParams,
    gf_gain: float,
    sizes,
    ranks,
    phase_bits,
    weight_bits: int,
    core_bits_per_phase: int = 1,
) -> tuple[float, int]:
    """Multilinear model using the nominal duration formula; the ambiguous
    core term defaults to one bit per core entry (pass the phase resolution
    to charge full-width core phases instead)."""
    payload = codec.tucker_nominal_payload_bits(
        sizes, ranks, phase_bits, weight_bits, core_bits_per_phase
    )
    if params.include_preamble:
        payload += codec.preamble_bits("tucker", len(tuple(sizes)))
    return payload / feedback_capacity_bps(params, gf_gain), payload


def frame_time_s(params: SystemParams, t_f: float) -> float:
    return params.pilot_data_time_s() + t_f


def spectral_efficiency(
    params: SystemParams, rate_bpshz: float, t_e: float, t_f: float
) -> float:
    """Overhead-discounted throughput (1 - (T_E+T_F)/T) * B * rate, bits/s."""
    t = frame_time_s(params, t_f)
    if t_e + t_f > t:
        raise ValueError("estimation plus feedback exceeds the frame")
    return (1.0 - (t_e + t_f) / t) * params.b_hz * rate_bpshz


def total_power_w(params: SystemParams, t_e: float, t_f: float) -> float:
    """Estimation + transmission + feedback + static power."""
    t = frame_time_s(params, t_f)
    return (
        params.estimation_power_w()
        + ((t - t_e - t_f) / t) * params.mu * params.tx_power_w
        + params.mu_f * params.feedback_power_w * t_f / t
        + params.static_power_w()
    )


def energy_efficiency(
    params: SystemParams, se_bps: float, t_e: float, t_f: float
) -> float:
    """Bits per joule: SE divided by the total consumed power."""
    p_tot = total_power_w(params, t_e, t_f)
    if p_tot <= 0:
        raise ValueError("total power must be > 0")
    return se_bps / p_tot


def link_rate_bpshz(params: SystemParams, gain: float) -> float:
    """Rate at the frame operating point: log2(1 + p_TX gain / (B N_0))."""
    return math.log2(1.0 + params.tx_power_w * gain / (params.b_hz * params.n0_w_hz))
