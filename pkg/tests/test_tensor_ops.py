"""Tensor kernel tests against brute-force index-formula oracles."""

import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from irsfb.tensor_ops import (
    fold,
    khatri_rao,
    khatri_rao_chain,
    kron_chain,
    kronecker,
    outer_product,
    tensorize,
    unfold,
    untensorize,
)


def rand_cplx(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


def tensorize_oracle(v, shape):
    """Brute-force loop over the column-major index formula."""
    t = np.empty(shape, dtype=complex)
    for idx in itertools.product(*[range(n) for n in shape]):
        flat = 0
        stride = 1
        for axis, n in enumerate(idx):
            flat += n * stride
            stride *= shape[axis]
        t[idx] = v[flat]
    return t


class TestTensorize:
    def test_scalar_identity(self):
        t = tensorize([7 + 0j], (1,))
        assert t.shape == (1,)
        assert t[0] == 7

    def test_2x3_columns(self):
        t = tensorize(np.arange(1, 7), (2, 3))
        assert np.array_equal(t, np.array([[1, 3, 5], [2, 4, 6]]))

    def test_index_formula_oracle(self):
        rng = np.random.default_rng(7)
        v = rand_cplx(rng, 24)
        t = tensorize(v, (2, 3, 4))
        assert np.array_equal(t, tensorize_oracle(v, (2, 3, 4)))

    def test_shape_product_mismatch(self):
        with pytest.raises(ValueError):
            tensorize(np.arange(5), (2, 3))

    def test_bad_shape(self):
        with pytest.raises(ValueError):
            tensorize(np.arange(1), ())


class TestUntensorize:
    def test_round_trip(self):
        rng = np.random.default_rng(8)
        v = rand_cplx(rng, 12)
        assert np.array_equal(untensorize(tensorize(v, (3, 4))), v)

    def test_scalar(self):
        assert np.array_equal(untensorize(tensorize([3.0], (1,))), [3.0])

    def test_column_major_oracle(self):
        t = tensorize(np.arange(1, 9), (2, 2, 2))
        assert np.array_equal(untensorize(t), np.arange(1, 9))


@settings(max_examples=40, deadline=None)
@given(st.data())
def test_tensorize_round_trip_property(data):
    shape = data.draw(
        st.lists(st.integers(1, 8), min_size=1, max_size=4).filter(
            lambda s: math.prod(s) <= 4096
        )
    )
    seed = data.draw(st.integers(0, 2**31))
    rng = np.random.default_rng(seed)
    v = rand_cplx(rng, math.prod(shape))
    assert np.array_equal(untensorize(tensorize(v, shape)), v)


class TestUnfold:
    def test_mode1_frontal_slices(self):
        rng = np.random.default_rng(9)
        x1 = rand_cplx(rng, 3, 4)
        x2 = rand_cplx(rng, 3, 4)
        t = np.stack([x1, x2], axis=2)
        assert np.array_equal(unfold(t, 1), np.hstack([x1, x2]))

    def test_mode2_index_oracle(self):
        rng = np.random.default_rng(10)
        t = rand_cplx(rng, 2, 3, 4)
        m = unfold(t, 2)
        assert m.shape == (3, 8)
        # columns enumerate (n_1, n_3) with n_1 fastest
        for n2 in range(3):
            for n3 in range(4):
                for n1 in range(2):
                    assert m[n2, n1 + 2 * n3] == t[n1, n2, n3]

    def test_order1_unchanged(self):
        v = np.arange(5.0)
        m = unfold(tensorize(v, (5,)), 1)
        assert np.array_equal(m.reshape(-1), v)

    def test_mode3_vectorized_slices(self):
        rng = np.random.default_rng(11)
        t = rand_cplx(rng, 2, 3, 4)
        m = unfold(t, 3)
        rows = [t[:, :, k].reshape(-1, order="F") for k in range(4)]
        assert np.array_equal(m, np.vstack(rows))

    def test_mode_out_of_range(self):
        with pytest.raises(ValueError):
            unfold(np.zeros((2, 2)), 3)
        with pytest.raises(ValueError):
            unfold(np.zeros((2, 2)), 0)


class TestFold:
    @pytest.mark.parametrize("mode", [1, 2, 3])
    def test_round_trip(self, mode):
        rng = np.random.default_rng(12 + mode)
        t = rand_cplx(rng, 2, 3, 4)
        assert np.array_equal(fold(unfold(t, mode), mode, (2, 3, 4)), t)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            fold(np.zeros((3, 5)), 2, (2, 3, 4))


class TestKronecker:
    def test_unit_vector(self):
        a = np.array([[1.0], [0.0]])
        b = np.array([[2.0 + 1j], [3.0]])
        assert np.array_equal(kronecker(a, b), np.array([[2 + 1j], [3], [0], [0]]))

    def test_identity(self):
        assert np.array_equal(kronecker(np.eye(2), np.eye(3)), np.eye(6))

    def test_definition_oracle(self):
        rng = np.random.default_rng(13)
        a = rand_cplx(rng, 2, 2)
        b = rand_cplx(rng, 3, 2)
        k = kronecker(a, b)
        oracle = np.empty((6, 4), dtype=complex)
        for i in range(2):
            for j in range(2):
                for p in range(3):
                    for q in range(2):
                        oracle[i * 3 + p, j * 2 + q] = a[i, j] * b[p, q]
        np.testing.assert_allclose(k, oracle, rtol=1e-14, atol=1e-14)


class TestKhatriRao:
    def test_single_columns(self):
        rng = np.random.default_rng(14)
        a = rand_cplx(rng, 3, 1)
        b = rand_cplx(rng, 2, 1)
        assert np.allclose(khatri_rao(a, b), kronecker(a, b))

    def test_ones_row_selects_b(self):
        rng = np.random.default_rng(15)
        b = rand_cplx(rng, 4, 3)
        assert np.allclose(khatri_rao(np.ones((1, 3)), b), b)

    def test_per_column_oracle(self):
        rng = np.random.default_rng(16)
        a = rand_cplx(rng, 3, 2)
        b = rand_cplx(rng, 2, 2)
        k = khatri_rao(a, b)
        for r in range(2):
            assert np.array_equal(k[:, r], np.kron(a[:, r], b[:, r]))

    def test_column_mismatch(self):
        with pytest.raises(ValueError):
            khatri_rao(np.ones((2, 2)), np.ones((2, 3)))


class TestOuterProduct:
    def test_single_vector(self):
        v = np.array([1.0, 2.0, 3.0])
        assert np.array_equal(outer_product([v]), v)

    def test_vec_matches_kron(self):
        rng = np.random.default_rng(17)
        a = rand_cplx(rng, 3)
        b = rand_cplx(rng, 2)
        # vec(b outer a) equals a kron b in column-major order
        t = outer_product([b, a])
        assert np.allclose(untensorize(t), np.kron(a, b))

    def test_triple_loop_oracle(self):
        rng = np.random.default_rng(18)
        vs = [rand_cplx(rng, n) for n in (2, 3, 4)]
        t = outer_product(vs)
        oracle = np.empty((2, 3, 4), dtype=complex)
        for i in range(2):
            for j in range(3):
                for k in range(4):
                    oracle[i, j, k] = vs[0][i] * vs[1][j] * vs[2][k]
        np.testing.assert_allclose(t, oracle, rtol=1e-14, atol=1e-14)

    def test_empty_list(self):
        with pytest.raises(ValueError):
            outer_product([])


class TestAlgebraicProperties:
    def test_vec_of_triple_product(self):
        # vec(A B C) = (C^T kron A) vec(B)
        rng = np.random.default_rng(19)
        a = rand_cplx(rng, 3, 2)
        b = rand_cplx(rng, 2, 4)
        c = rand_cplx(rng, 4, 3)
        lhs = (a @ b @ c).reshape(-1, order="F")
        rhs = kronecker(c.T, a) @ b.reshape(-1, order="F")
        assert np.allclose(lhs, rhs)

    def test_vec_of_diag_product(self):
        # vec(A diag(b) C) = (C^T khatri_rao A) b
        rng = np.random.default_rng(20)
        a = rand_cplx(rng, 3, 4)
        b = rand_cplx(rng, 4)
        c = rand_cplx(rng, 4, 2)
        lhs = (a @ np.diag(b) @ c).reshape(-1, order="F")
        rhs = khatri_rao(c.T, a) @ b
        assert np.allclose(lhs, rhs)

    @pytest.mark.parametrize("mode", [1, 2, 3])
    def test_rank_one_unfolding_identity(self, mode):
        # mode-p unfolding of outer(v1..vP) is v_p (v_P kr ... kr v_1 skipping p)^T
        rng = np.random.default_rng(21 + mode)
        vs = [rand_cplx(rng, n) for n in (3, 4, 2)]
        t = outer_product(vs)
        rest = [vs[q].reshape(-1, 1) for q in reversed(range(3)) if q != mode - 1]
        expected = vs[mode - 1].reshape(-1, 1) @ khatri_rao_chain(rest).T
        assert np.allclose(unfold(t, mode), expected)

    def test_kron_chain_matches_pairwise(self):
        rng = np.random.default_rng(25)
        ms = [rand_cplx(rng, 2, 2) for _ in range(3)]
        assert np.allclose(
            kron_chain(ms), kronecker(kronecker(ms[0], ms[1]), ms[2])
        )
