"""Bit-exact encoding of quantized feedback messages.

Wire format (MSB-first, big-endian bit packing):

  preamble:
    model id        2 bits   (0 = uncompressed, 1 = canonical/PARAFAC,
                              2 = multilinear/Tucker)
    P               4 bits   number of factors (1 for uncompressed)
    sizes           16 bits  per factor
    components      8 bits   R (uncompressed and PARAFAC write one field,
                             Tucker writes one per factor)
    phase bits      4 bits   per factor, stored as b-1 so b up to 16 fits
    weight bits     4 bits   stored as b_w-1
  body ("payload"):
    uncompressed: N phase indices at b bits.
    PARAFAC: factor-major phase indices (factor p contributes its R columns
      back to back, N_p indices per column), then R-1 weight indices.  The
      component with the unit weight must be component 0 (sort components by
      weight first), so no position field is needed.
    Tucker: factor-major phase indices, core phases (column-major, at the
      first factor's phase resolution), core magnitudes (all of them, at the
      weight resolution; the largest normalizes to exactly 1.00 which is a
      codeword), then the per-mode weight indices (first entry of each mode
      is the implicit 1).

Every field width is fixed by the preamble, so decoding is unambiguous and
`decode(encode(x)) == x` bit for bit.  The encoded bit length equals
`preamble_bits(...) + *_payload_bits(...)` exactly.
"""

import math
from dataclasses import dataclass

import numpy as np

MODEL_UNCOMPRESSED = 0
MODEL_PARAFAC = 1
MODEL_TUCKER = 2

_SIZE_FIELD = 16
_RANK_FIELD = 8
_BITS_FIELD = 4
_MAX_B = 16


class CodecError(ValueError):
    """Malformed, truncated or out-of-range feedback message."""


@dataclass
class QuantizedBaseline:
    n: int
    phase_bits: int
    phase_indices: np.ndarray


@dataclass
class QuantizedParafac:
    sizes: tuple[int, ...]
    r: int
    phase_bits: tuple[int, ...]
    weight_bits: int
    factor_indices: list[np.ndarray]  # each (N_p, R)
    weight_indices: np.ndarray  # (R-1,), component 0 carries the implicit 1


@dataclass
class QuantizedTucker:
    sizes: tuple[int, ...]
    ranks: tuple[int, ...]
    phase_bits: tuple[int, ...]
    weight_bits: int
    factor_indices: list[np.ndarray]  # each (N_p, R_p)
    core_phase_indices: np.ndarray  # (prod R_p,), column-major core order
    core_mag_indices: np.ndarray  # (prod R_p,)
    sigma_indices: list[np.ndarray]  # each (R_p - 1,)


FeedbackMessage = QuantizedBaseline | QuantizedParafac | QuantizedTucker


def preamble_bits(model: str | int, p: int) -> int:
    """Bit cost of the frame preamble for a model kind and factor count."""
    kind = _model_id(model)
    rank_fields = p if kind == MODEL_TUCKER else 1
    return 2 + 4 + p * _SIZE_FIELD + rank_fields * _RANK_FIELD + p * _BITS_FIELD + _BITS_FIELD


def baseline_payload_bits(n: int, phase_bits: int) -> int:
    return n * phase_bits


def parafac_payload_bits(sizes, r: int, phase_bits, weight_bits: int) -> int:
    sizes, phase_bits = _normalize_sizes_bits(sizes, phase_bits)
    return r * sum(n * b for n, b in zip(sizes, phase_bits)) + (r - 1) * weight_bits


def tucker_message_payload_bits(sizes, ranks, phase_bits, weight_bits: int) -> int:
    """Exact bit count of the Tucker body as encoded (decodable form)."""
    sizes, phase_bits = _normalize_sizes_bits(sizes, phase_bits)
    ranks = tuple(int(r) for r in ranks)
    core = math.prod(ranks)
    return (
        sum(r * n * b for r, n, b in zip(ranks, sizes, phase_bits))
        + phase_bits[0] * core
        + weight_bits * core
        + weight_bits * sum(r - 1 for r in ranks)
    )


def tucker_nominal_payload_bits(
    sizes, ranks, phase_bits, weight_bits: int, core_bits_per_phase: int = 1
) -> int:
    """Nominal duration-formula bit count: core entries charged
    `core_bits_per_phase` each and the weight term uses the product form."""
    sizes, phase_bits = _normalize_sizes_bits(sizes, phase_bits)
    ranks = tuple(int(r) for r in ranks)
    return (
        sum(r * n * b for r, n, b in zip(ranks, sizes, phase_bits))
        + core_bits_per_phase * math.prod(ranks)
        + weight_bits * math.prod(r - 1 for r in ranks)
    )


def message_bit_length(msg: FeedbackMessage, include_preamble: bool = True) -> int:
    """Analytic encoded length of a message (preamble + payload)."""
    if isinstance(msg, QuantizedBaseline):
        bits = baseline_payload_bits(msg.n, msg.phase_bits)
        pre = preamble_bits(MODEL_UNCOMPRESSED, 1)
    elif isinstance(msg, QuantizedParafac):
        bits = parafac_payload_bits(msg.sizes, msg.r, msg.phase_bits, msg.weight_bits)
        pre = preamble_bits(MODEL_PARAFAC, len(msg.sizes))
    elif isinstance(msg, QuantizedTucker):
        bits = tucker_message_payload_bits(
            msg.sizes, msg.ranks, msg.phase_bits, msg.weight_bits
        )
        pre = preamble_bits(MODEL_TUCKER, len(msg.sizes))
    else:
        raise CodecError(f"unsupported message type {type(msg)!r}")
    return bits + (pre if include_preamble else 0)


def _model_id(model: str | int) -> int:
    if isinstance(model, str):
        try:
            return {
                "baseline": MODEL_UNCOMPRESSED,
                "uncompressed": MODEL_UNCOMPRESSED,
                "parafac": MODEL_PARAFAC,
                "tucker": MODEL_TUCKER,
            }[model]
        except KeyError:
            raise CodecError(f"unknown model {model!r}") from None
    if model not in (MODEL_UNCOMPRESSED, MODEL_PARAFAC, MODEL_TUCKER):
        raise CodecError(f"unknown model id {model}")
    return int(model)


def _normalize_sizes_bits(sizes, phase_bits):
    sizes = tuple(int(n) for n in sizes)
    if isinstance(phase_bits, (int, np.integer)):
        phase_bits = (int(phase_bits),) * len(sizes)
    else:
        phase_bits = tuple(int(b) for b in phase_bits)
    if len(phase_bits) != len(sizes):
        raise CodecError("one phase resolution needed per factor")
    return sizes, phase_bits


class _BitWriter:
    def __init__(self):
        self._acc = 0
        self.bits = 0

    def write(self, value: int, width: int) -> None:
        value = int(value)
        if width <= 0 or not 0 <= value < (1 << width):
            raise CodecError(f"value {value} does not fit in {width} bits")
        self._acc = (self._acc << width) | value
        self.bits += width

    def write_many(self, values, width: int) -> None:
        for v in np.asarray(values).reshape(-1):
            self.write(int(v), width)

    def to_bytes(self) -> bytes:
        pad = (-self.bits) % 8
        return ((self._acc << pad)).to_bytes((self.bits + pad) // 8 or 1, "big")


class _BitReader:
    def __init__(self, data: bytes):
        self._val = int.from_bytes(data, "big")
        self._total = len(data) * 8
        self._pos = 0

    def read(self, width: int) -> int:
        if self._pos + width > self._total:
            raise CodecError("truncated message")
        shift = self._total - self._pos - width
        self._pos += width
        return (self._val >> shift) & ((1 << width) - 1)

    def read_array(self, count: int, width: int) -> np.ndarray:
        return np.array([self.read(width) for _ in range(count)], dtype=np.int64)


def _check_fields(sizes, ranks, phase_bits, weight_bits):
    p = len(sizes)
    if not 1 <= p < (1 << 4):
        raise CodecError(f"factor count {p} out of range")
    for n in sizes:
        if not 1 <= n < (1 << _SIZE_FIELD):
            raise CodecError(f"factor size {n} overflows the {_SIZE_FIELD}-bit field")
    for r in ranks:
        if not 1 <= r < (1 << _RANK_FIELD):
            raise CodecError(f"component count {r} overflows the {_RANK_FIELD}-bit field")
    for b in phase_bits:
        if not 1 <= b <= _MAX_B:
            raise CodecError(f"phase resolution {b} out of range 1..{_MAX_B}")
    if not 1 <= weight_bits <= _MAX_B:
        raise CodecError(f"weight resolution {weight_bits} out of range 1..{_MAX_B}")


def _write_preamble(w, model_id, sizes, ranks, phase_bits, weight_bits):
    _check_fields(sizes, ranks, phase_bits, weight_bits)
    w.write(model_id, 2)
    w.write(len(sizes), 4)
    for n in sizes:
        w.write(n, _SIZE_FIELD)
    for r in ranks:
        w.write(r, _RANK_FIELD)
    for b in phase_bits:
        w.write(b - 1, _BITS_FIELD)
    w.write(weight_bits - 1, _BITS_FIELD)


@dataclass(frozen=True)
class EncodedFeedback:
    data: bytes
    bit_length: int


def encode_feedback(msg: FeedbackMessage) -> EncodedFeedback:
    """Pack a quantized feedback message into its wire format."""
    w = _BitWriter()
    if isinstance(msg, QuantizedBaseline):
        _write_preamble(w, MODEL_UNCOMPRESSED, (msg.n,), (1,), (msg.phase_bits,), 1)
        idx = np.asarray(msg.phase_indices)
        if idx.shape != (msg.n,):
            raise CodecError("phase index count inconsistent with n")
        w.write_many(idx, msg.phase_bits)
    elif isinstance(msg, QuantizedParafac):
        sizes, phase_bits = _normalize_sizes_bits(msg.sizes, msg.phase_bits)
        _write_preamble(w, MODEL_PARAFAC, sizes, (msg.r,), phase_bits, msg.weight_bits)
        if len(msg.factor_indices) != len(sizes):
            raise CodecError("factor count mismatch")
        for n, b, f in zip(sizes, phase_bits, msg.factor_indices):
            f = np.asarray(f)
            if f.shape != (n, msg.r):
                raise CodecError(f"factor index block {f.shape} != ({n}, {msg.r})")
            w.write_many(f.T, b)  # column by column: component-major
        wi = np.asarray(msg.weight_indices)
        if wi.shape != (msg.r - 1,):
            raise CodecError("weight index count must be R-1")
        w.write_many(wi, msg.weight_bits)
    elif isinstance(msg, QuantizedTucker):
        sizes, phase_bits = _normalize_sizes_bits(msg.sizes, msg.phase_bits)
        ranks = tuple(int(r) for r in msg.ranks)
        _write_preamble(w, MODEL_TUCKER, sizes, ranks, phase_bits, msg.weight_bits)
        core = math.prod(ranks)
        for n, r, b, f in zip(sizes, ranks, phase_bits, msg.factor_indices):
            f = np.asarray(f)
            if f.shape != (n, r):
                raise CodecError(f"factor index block {f.shape} != ({n}, {r})")
            w.write_many(f.T, b)
        cp = np.asarray(msg.core_phase_indices)
        cm = np.asarray(msg.core_mag_indices)
        if cp.shape != (core,) or cm.shape != (core,):
            raise CodecError("core index count inconsistent with ranks")
        w.write_many(cp, phase_bits[0])
        w.write_many(cm, msg.weight_bits)
        if len(msg.sigma_indices) != len(ranks):
            raise CodecError("one weight vector needed per factor")
        for r, si in zip(ranks, msg.sigma_indices):
            si = np.asarray(si)
            if si.shape != (r - 1,):
                raise CodecError("weight index count must be R_p - 1")
            w.write_many(si, msg.weight_bits)
    else:
        raise CodecError(f"unsupported message type {type(msg)!r}")
    return EncodedFeedback(data=w.to_bytes(), bit_length=w.bits)


def decode_feedback(data: bytes) -> FeedbackMessage:
    """Inverse of :func:`encode_feedback`; trailing byte padding is ignored."""
    r = _BitReader(data)
    model_id = r.read(2)
    p = r.read(4)
    if p < 1:
        raise CodecError("factor count must be >= 1")
    sizes = tuple(r.read(_SIZE_FIELD) for _ in range(p))
    if model_id == MODEL_TUCKER:
        ranks = tuple(r.read(_RANK_FIELD) for _ in range(p))
    else:
        ranks = (r.read(_RANK_FIELD),)
    phase_bits = tuple(r.read(_BITS_FIELD) + 1 for _ in range(p))
    weight_bits = r.read(_BITS_FIELD) + 1
    _check_fields(sizes, ranks, phase_bits, weight_bits)

    if model_id == MODEL_UNCOMPRESSED:
        if p != 1:
            raise CodecError("uncompressed messages carry a single size field")
        n = sizes[0]
        return QuantizedBaseline(
            n=n, phase_bits=phase_bits[0], phase_indices=r.read_array(n, phase_bits[0])
        )
    if model_id == MODEL_PARAFAC:
        rank = ranks[0]
        factors = []
        for n, b in zip(sizes, phase_bits):
            block = r.read_array(n * rank, b).reshape(rank, n).T
            factors.append(block)
        weights = r.read_array(rank - 1, weight_bits)
        return QuantizedParafac(
            sizes=sizes,
            r=rank,
            phase_bits=phase_bits,
            weight_bits=weight_bits,
            factor_indices=factors,
            weight_indices=weights,
        )
    if model_id == MODEL_TUCKER:
        factors = []
        for n, rk, b in zip(sizes, ranks, phase_bits):
            factors.append(r.read_array(n * rk, b).reshape(rk, n).T)
        core = math.prod(ranks)
        core_phase = r.read_array(core, phase_bits[0])
        core_mag = r.read_array(core, weight_bits)
        sig = [r.read_array(rk - 1, weight_bits) for rk in ranks]
        return QuantizedTucker(
            sizes=sizes,
            ranks=ranks,
            phase_bits=phase_bits,
            weight_bits=weight_bits,
            factor_indices=factors,
            core_phase_indices=core_phase,
            core_mag_indices=core_mag,
            sigma_indices=sig,
        )
    raise CodecError(f"unknown model id {model_id}")


def messages_equal(a: FeedbackMessage, b: FeedbackMessage) -> bool:
    """Field-by-field equality including every index array."""
    if type(a) is not type(b):
        return False
    if isinstance(a, QuantizedBaseline):
        return (
            a.n == b.n
            and a.phase_bits == b.phase_bits
            and np.array_equal(a.phase_indices, b.phase_indices)
        )
    if isinstance(a, QuantizedParafac):
        return (
            a.sizes == b.sizes
            and a.r == b.r
            and tuple(a.phase_bits) == tuple(b.phase_bits)
            and a.weight_bits == b.weight_bits
            and all(np.array_equal(x, y) for x, y in zip(a.factor_indices, b.factor_indices))
            and np.array_equal(a.weight_indices, b.weight_indices)
        )
    return (
        a.sizes == b.sizes
        and a.ranks == b.ranks
        and tuple(a.phase_bits) == tuple(b.phase_bits)
        and a.weight_bits == b.weight_bits
        and all(np.array_equal(x, y) for x, y in zip(a.factor_indices, b.factor_indices))
        and np.array_equal(a.core_phase_indices, b.core_phase_indices)
        and np.array_equal(a.core_mag_indices, b.core_mag_indices)
        and all(np.array_equal(x, y) for x, y in zip(a.sigma_indices, b.sigma_indices))
    )
