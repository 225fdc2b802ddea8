"""Phase-vector reconstruction tests against direct summation oracles."""

import itertools

import numpy as np
import pytest

from irsfb.decomposition import parafac_als, tucker_hosvd
from irsfb.quantization import (
    AmplitudeCodebook,
    PhaseCodebook,
    dequantize_weights,
    quantize_parafac_weights,
    quantize_phases,
)
from irsfb.reconstruction import (
    PhaseShiftVector,
    reconstruct_from_parafac,
    reconstruct_from_tucker,
    reconstruct_model,
)
from irsfb.tensor_ops import kron_chain, tensorize


def unit_modulus(rng, n):
    return np.exp(1j * rng.uniform(-np.pi, np.pi, n))


def parafac_sum_oracle(factors, weights):
    """Direct evaluation: sum_r w_r (s_r^(P) kron ... kron s_r^(1))."""
    n = int(np.prod([f.shape[0] for f in factors]))
    acc = np.zeros(n, dtype=complex)
    for r in range(len(weights)):
        cols = [f[:, r : r + 1] for f in reversed(factors)]
        acc += weights[r] * kron_chain(cols).reshape(-1)
    return acc


def tucker_sum_oracle(factors, core, sigmas):
    """Brute-force nested sum over all core entries."""
    n = int(np.prod([f.shape[0] for f in factors]))
    acc = np.zeros(n, dtype=complex)
    ranks = core.shape
    for idx in itertools.product(*[range(r) for r in ranks]):
        cols = [
            sigmas[p][idx[p]] * factors[p][:, idx[p] : idx[p] + 1]
            for p in range(len(factors))
        ]
        acc += core[idx] * kron_chain(list(reversed(cols))).reshape(-1)
    return acc


class TestReconstructFromParafac:
    def test_exact_kron_structure_recovered(self):
        rng = np.random.default_rng(0)
        s1, s2 = unit_modulus(rng, 8), unit_modulus(rng, 4)
        s = np.kron(s2, s1)  # mode-1 index fastest
        out = reconstruct_from_parafac(
            [s1.reshape(-1, 1), s2.reshape(-1, 1)], np.array([1.0])
        )
        assert np.allclose(out.entries, s, atol=1e-12)
        assert out.zero_phase_entries == 0

    def test_all_ones(self):
        out = reconstruct_from_parafac(
            [np.ones((4, 1)), np.ones((3, 1))], np.array([1.0])
        )
        assert np.allclose(out.entries, np.ones(12))

    def test_end_to_end_matches_direct_oracle(self):
        rng = np.random.default_rng(1)
        s = unit_modulus(rng, 64)
        t = tensorize(s, (8, 4, 2))
        model, report = parafac_als(t, rank=2, rng=2)
        pcb, acb = PhaseCodebook(8), AmplitudeCodebook(8)
        q_factors = []
        for f in model.factors:
            cols = [quantize_phases(f[:, r], pcb)[1] for r in range(model.rank)]
            q_factors.append(np.stack(cols, axis=1))
        qw = quantize_parafac_weights(model.weights, acb)
        w = dequantize_weights(qw, acb)
        out = reconstruct_from_parafac(q_factors, w)
        oracle = parafac_sum_oracle(q_factors, w)
        nz = oracle != 0
        assert np.allclose(out.entries[nz], np.exp(1j * np.angle(oracle[nz])), atol=1e-12)

    def test_rank_one_quantized_error_bound(self):
        # for a Kronecker-structured vector the reconstructed phase is the sum
        # of the factor phases, so quantization errors add: <= P * pi/2^b
        rng = np.random.default_rng(11)
        shape = (8, 4, 2)
        parts = [unit_modulus(rng, n) for n in shape]
        s = kron_chain([p.reshape(-1, 1) for p in reversed(parts)]).reshape(-1)
        model, _ = parafac_als(tensorize(s, shape), rank=1, rng=12)
        pcb = PhaseCodebook(8)
        q_factors = [quantize_phases(f[:, 0], pcb)[1].reshape(-1, 1) for f in model.factors]
        out = reconstruct_from_parafac(q_factors, np.array([1.0]))
        err = np.abs(np.angle(out.entries * np.conj(s)))
        assert np.max(err) <= 3 * np.pi / 2**8 + 1e-9

    def test_unit_modulus_always(self):
        rng = np.random.default_rng(3)
        factors = [
            rng.standard_normal((6, 3)) + 1j * rng.standard_normal((6, 3)),
            rng.standard_normal((5, 3)) + 1j * rng.standard_normal((5, 3)),
        ]
        out = reconstruct_from_parafac(factors, np.array([1.0, 0.3, 0.2]))
        assert np.allclose(np.abs(out.entries), 1.0, atol=1e-12)

    def test_zero_superposition_counted(self):
        # two components cancel at half the entries
        f1 = np.array([[1.0, 1.0], [1.0, -1.0]])
        f2 = np.array([[1.0, 1.0], [1.0, -1.0]])
        out = reconstruct_from_parafac([f1, f2], np.array([1.0, 1.0]))
        assert out.zero_phase_entries == 2
        assert np.allclose(np.abs(out.entries), 1.0)

    def test_descending_order_convention(self):
        rng = np.random.default_rng(4)
        s1, s2 = unit_modulus(rng, 3), unit_modulus(rng, 5)
        asc = reconstruct_from_parafac(
            [s1.reshape(-1, 1), s2.reshape(-1, 1)], np.array([1.0])
        )
        desc = reconstruct_from_parafac(
            [s2.reshape(-1, 1), s1.reshape(-1, 1)],
            np.array([1.0]),
            factor_order="modes-descending",
        )
        assert np.allclose(asc.entries, desc.entries)

    @pytest.mark.parametrize("shape", [(4, 8), (4, 4, 2), (2, 2, 2, 4)])
    def test_kron_round_trip_all_orders(self, shape):
        rng = np.random.default_rng(sum(shape))
        parts = [unit_modulus(rng, n) for n in shape]
        s = kron_chain([p.reshape(-1, 1) for p in reversed(parts)]).reshape(-1)
        t = tensorize(s, shape)
        model, _ = parafac_als(t, rank=1, rng=5)
        out = reconstruct_model(model)
        assert np.max(np.abs(out.entries - s)) <= 1e-9


class TestReconstructFromTucker:
    def test_rank_one_collapse_matches_parafac(self):
        rng = np.random.default_rng(6)
        f1, f2 = unit_modulus(rng, 4).reshape(-1, 1), unit_modulus(rng, 3).reshape(-1, 1)
        core = np.ones((1, 1))
        sig = [np.array([1.0]), np.array([1.0])]
        t_out = reconstruct_from_tucker([f1, f2], core, sig)
        p_out = reconstruct_from_parafac([f1, f2], np.array([1.0]))
        assert np.allclose(t_out.entries, p_out.entries)

    def test_full_rank_lossless(self):
        rng = np.random.default_rng(7)
        s = unit_modulus(rng, 48)
        t = tensorize(s, (4, 4, 3))
        model, _ = tucker_hosvd(t, (4, 4, 3))
        out = reconstruct_model(model)
        assert np.max(np.abs(out.entries - s)) <= 1e-9

    def test_phase_only_core_decoder_approximates(self):
        # a decoder that received only core phases can reintroduce magnitudes
        # through the per-mode weights; on a near-separable vector that lands
        # close to the magnitude-carrying decode
        rng = np.random.default_rng(17)
        s1, s2 = unit_modulus(rng, 8), unit_modulus(rng, 4)
        s = np.kron(s2, s1) * np.exp(1j * 0.02 * rng.standard_normal(32))
        t = tensorize(s, (8, 4))
        model, _ = tucker_hosvd(t, (2, 2))
        full = reconstruct_model(model)
        phase_only_core = np.exp(1j * np.angle(model.core))
        sigmas = [sig / sig[0] for sig in model.sigmas]
        literal = reconstruct_from_tucker(model.factors, phase_only_core, sigmas)
        ang = np.abs(np.angle(literal.entries * np.conj(full.entries)))
        assert np.max(ang) <= 0.2

    def test_truncated_matches_nested_sum_oracle(self):
        rng = np.random.default_rng(8)
        s = unit_modulus(rng, 60)
        t = tensorize(s, (5, 4, 3))
        model, _ = tucker_hosvd(t, (2, 2, 2))
        sigmas = [sig / sig[0] for sig in model.sigmas]
        out = reconstruct_from_tucker(model.factors, model.core, sigmas)
        oracle = tucker_sum_oracle(model.factors, model.core, sigmas)
        assert np.allclose(out.entries, np.exp(1j * np.angle(oracle)), atol=1e-10)

    def test_rank_mismatch_rejected(self):
        with pytest.raises(ValueError):
            reconstruct_from_tucker(
                [np.ones((3, 2)), np.ones((2, 1))],
                np.ones((2, 2)),
                [np.ones(2), np.ones(2)],
            )


class TestPhaseShiftVector:
    def test_invariant_unit_modulus(self):
        v = PhaseShiftVector(entries=np.exp(1j * np.array([0.1, -2.0])))
        assert v.n == 2
        assert np.allclose(np.abs(v.entries), 1.0, atol=1e-12)
