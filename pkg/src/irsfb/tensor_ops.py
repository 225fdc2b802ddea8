"""Dense complex tensor kernels: tensorization, unfoldings and product operators.

All routines use the column-major ("first index fastest") element order, so
``tensorize`` is a pure reshape of the flat vector: element (n_1, ..., n_P)
of the tensor is ``v[n_1 + (n_2-1)N_1 + ... + (n_P-1)N_{P-1}...N_1]`` in
1-based notation.  Unfolding modes are 1-based to match that convention.

Everything here is a pure function of immutable inputs; outputs never alias
caller data unless the operation is a genuine reinterpretation (reshape).
"""

import math

import numpy as np


def _as_complex(a) -> np.ndarray:
    return np.asarray(a, dtype=np.complex128)


def tensorize(v, shape) -> np.ndarray:
    """Map a flat vector onto a tensor of the given shape, first index fastest.

    Parameters
    ----------
    v:
        Vector of length ``prod(shape)``.
    shape:
        Target mode sizes (N_1, ..., N_P), every entry >= 1.

    Returns
    -------
    ndarray of ``shape`` such that untensorize(tensorize(v, s)) == v.
    """
    v = _as_complex(v).reshape(-1)
    shape = tuple(int(n) for n in shape)
    if len(shape) < 1 or any(n < 1 for n in shape):
        raise ValueError(f"invalid tensor shape {shape}")
    if v.size != math.prod(shape):
        raise ValueError(
            f"vector of length {v.size} cannot be tensorized to shape {shape}"
        )
    return v.reshape(shape, order="F")


def untensorize(t) -> np.ndarray:
    """Flatten a tensor back to a vector, first index fastest."""
    return _as_complex(t).reshape(-1, order="F")


def unfold(t, mode: int) -> np.ndarray:
    """Mode-`mode` unfolding (1-based) of a tensor.

    Row index is n_mode; columns enumerate the remaining indices with the
    lowest mode fastest.  For a third-order tensor, mode 1 concatenates the
    frontal slices side by side and mode 3 stacks the vectorized slices as
    rows.
    """
    t = _as_complex(t)
    if not 1 <= mode <= t.ndim:
        raise ValueError(f"mode {mode} out of range for order-{t.ndim} tensor")
    return np.moveaxis(t, mode - 1, 0).reshape(t.shape[mode - 1], -1, order="F")


def fold(m, mode: int, shape) -> np.ndarray:
    """Inverse of :func:`unfold`: rebuild the tensor from its mode unfolding."""
    m = _as_complex(m)
    shape = tuple(int(n) for n in shape)
    if not 1 <= mode <= len(shape):
        raise ValueError(f"mode {mode} out of range for shape {shape}")
    rest = shape[: mode - 1] + shape[mode:]
    if m.shape != (shape[mode - 1], math.prod(rest)):
        raise ValueError(
            f"matrix {m.shape} inconsistent with shape {shape} and mode {mode}"
        )
    return np.moveaxis(m.reshape((shape[mode - 1],) + rest, order="F"), 0, mode - 1)


def kronecker(a, b) -> np.ndarray:
    """Kronecker product: block (i, j) is a[i, j] * b."""
    return np.kron(_as_complex(a), _as_complex(b))


def khatri_rao(a, b) -> np.ndarray:
    """Column-wise Kronecker product of two matrices with equal column counts."""
    a = np.atleast_2d(_as_complex(a))
    b = np.atleast_2d(_as_complex(b))
    if a.shape[1] != b.shape[1]:
        raise ValueError(
            f"column mismatch: {a.shape[1]} vs {b.shape[1]} columns"
        )
    return (a[:, None, :] * b[None, :, :]).reshape(a.shape[0] * b.shape[0], a.shape[1])


def khatri_rao_chain(mats) -> np.ndarray:
    """Left-to-right Khatri-Rao product of a sequence of matrices."""
    mats = list(mats)
    if not mats:
        raise ValueError("empty matrix list")
    out = np.atleast_2d(_as_complex(mats[0]))
    for m in mats[1:]:
        out = khatri_rao(out, m)
    return out


def kron_chain(mats) -> np.ndarray:
    """Left-to-right Kronecker product of a sequence of matrices."""
    mats = list(mats)
    if not mats:
        raise ValueError("empty matrix list")
    out = _as_complex(mats[0])
    for m in mats[1:]:
        out = np.kron(out, _as_complex(m))
    return out


def outer_product(vectors) -> np.ndarray:
    """Outer product tensor of a list of vectors.

    Element (n_1, ..., n_P) is the product of v^(p)[n_p] over p.  A single
    vector comes back unchanged (order-1 tensor).
    """
    vectors = [_as_complex(v).reshape(-1) for v in vectors]
    if not vectors:
        raise ValueError("outer_product needs at least one vector")
    out = vectors[0]
    for v in vectors[1:]:
        out = np.multiply.outer(out, v)
    return out
