import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.stats import poisson

from qmclab.fock import (
    FockVector, OperatorMatrix, TruncationError, coherent_state, edge_weight,
    lowering_shift, number_statistics, oscillator_operators, phase_distribution,
    phase_statistics, uncertainty_check,
)


def brute_phase_stats(c):
    # explicit phase-state projectors, no FFT
    D = len(c)
    n = np.arange(D)
    probs = []
    for j in range(D):
        ket = np.exp(1j * n * 2 * math.pi * j / D) / math.sqrt(D)
        probs.append(abs(np.vdot(ket, c)) ** 2)
    probs = np.array(probs)
    theta = 2 * math.pi * np.arange(D) / D
    z = np.sum(probs * np.exp(1j * theta))
    mean = math.atan2(z.imag, z.real) if abs(z) > 1e-12 else 0.0
    d = (theta - mean + math.pi) % (2 * math.pi) - math.pi
    d[d == -math.pi] = math.pi
    mu = probs @ d
    return probs, mean, math.sqrt(probs @ d ** 2 - mu ** 2)


class TestCoherent:
    def test_vacuum(self):
        c = coherent_state(0, 8).amplitudes
        np.testing.assert_array_equal(c, np.eye(8)[0])

    @pytest.mark.parametrize("alpha", [0.5, 1 + 1j, 3, -2.5j])
    def test_poisson_weights(self, alpha):
        psi = coherent_state(alpha, 64)
        np.testing.assert_allclose(psi.probabilities(), poisson.pmf(np.arange(64), abs(alpha) ** 2),
                                   atol=1e-12)

    def test_eigenstate_of_lowering(self):
        psi = coherent_state(2 - 1j, 64)
        a = oscillator_operators(64).a.entries
        lhs = a @ psi.amplitudes
        np.testing.assert_allclose(lhs[:-8], (2 - 1j) * psi.amplitudes[:-8], atol=1e-10)

    def test_truncation_error(self):
        with pytest.raises(TruncationError):
            coherent_state(4, 20)

    def test_number_statistics(self):
        mean, sd = number_statistics(coherent_state(4, 256))
        assert mean == pytest.approx(16, abs=1e-9)
        assert sd == pytest.approx(4, abs=1e-6)

    def test_unnormalized_rejected(self):
        with pytest.raises(ValueError):
            FockVector(np.array([1.0, 1.0]))


class TestOperators:
    @pytest.mark.parametrize("D", [2, 16, 128])
    def test_commutator_away_from_edge(self, D):
        ops = oscillator_operators(D)
        x, p = ops.x.entries, ops.p.entries
        comm = x @ p - p @ x
        inner = comm[:D - 1, :D - 1]
        np.testing.assert_allclose(inner, 1j * np.eye(D - 1), atol=1e-12)
        # the truncation shows up only in the last diagonal entry
        assert comm[D - 1, D - 1] == pytest.approx(-1j * (D - 1), abs=1e-9)

    def test_hamiltonian_spectrum(self):
        H = oscillator_operators(32).H.entries
        np.testing.assert_allclose(np.diag(H).real[:-1], np.arange(31) + 0.5, atol=1e-12)

    def test_hermiticity(self):
        ops = oscillator_operators(10)
        assert ops.x.is_hermitian() and ops.p.is_hermitian() and ops.N.is_hermitian()
        assert not ops.a.is_hermitian()

    def test_shift(self):
        E = lowering_shift(4)
        assert np.array_equal(E @ np.eye(4)[2], np.eye(4)[1])
        assert np.array_equal(E @ np.eye(4)[0], np.zeros(4))

    def test_dimension_floor(self):
        with pytest.raises(ValueError):
            oscillator_operators(1)


class TestUncertainty:
    def test_vacuum_saturates(self):
        ops = oscillator_operators(16)
        r = uncertainty_check(ops.x, ops.p, coherent_state(0, 16))
        assert r.product == pytest.approx(0.5, abs=1e-12)
        assert r.bound == pytest.approx(0.5, abs=1e-12)
        assert r.satisfied and not r.truncation_edge

    def test_coherent_saturates(self):
        ops = oscillator_operators(128)
        r = uncertainty_check(ops.x, ops.p, coherent_state(3 + 1j, 128))
        assert r.product == pytest.approx(0.5, abs=1e-9)

    def test_random_low_lying(self):
        rng = np.random.default_rng(8)
        ops = oscillator_operators(128)
        for _ in range(100):
            c = np.zeros(128, complex)
            c[:20] = rng.normal(size=20) + 1j * rng.normal(size=20)
            r = uncertainty_check(ops.x, ops.p, FockVector.from_amplitudes(c))
            assert r.satisfied and not r.truncation_edge
            assert r.bound == pytest.approx(0.5, abs=1e-12)

    def test_edge_flag(self):
        ops = oscillator_operators(8)
        r = uncertainty_check(ops.x, ops.p, FockVector(np.eye(8)[7].astype(complex)))
        assert r.truncation_edge
        assert edge_weight(FockVector(np.eye(8)[7].astype(complex))) == 1.0

    def test_dimension_mismatch(self):
        ops = oscillator_operators(8)
        with pytest.raises(ValueError, match="dimension"):
            uncertainty_check(ops.x, ops.p, coherent_state(0, 4))

    def test_non_hermitian_rejected(self):
        ops = oscillator_operators(8)
        with pytest.raises(ValueError):
            uncertainty_check(ops.a, ops.p, coherent_state(0, 8))

    @settings(max_examples=40, deadline=None)
    @given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                    min_size=2, max_size=12))
    def test_general_operators_obey_bound(self, entries):
        c = np.array(entries, complex)
        if np.linalg.norm(c) < 1e-3:
            return
        psi = FockVector.from_amplitudes(c)
        ops = oscillator_operators(len(c))
        for A, B in ((ops.x, ops.p), (ops.N, ops.x), (ops.H, ops.p)):
            assert uncertainty_check(A, B, psi).satisfied


class TestPhase:
    def test_distribution_matches_projectors(self):
        psi = coherent_state(1.5 + 0.5j, 48)
        _, prob = phase_distribution(psi)
        ref, _, _ = brute_phase_stats(psi.amplitudes)
        np.testing.assert_allclose(prob, ref, atol=1e-14)
        assert prob.sum() == pytest.approx(1, abs=1e-14)

    def test_frozen_alpha4(self):
        psi = coherent_state(4, 256)
        mean, dtheta = phase_statistics(psi)
        _, dn = number_statistics(psi)
        assert mean == pytest.approx(0, abs=1e-12)
        # brute-force projector oracle, frozen
        assert dn * dtheta == pytest.approx(0.508508755, abs=1e-8)

    def test_matches_brute_force(self):
        for alpha in (1, 2 * np.exp(0.7j), -3):
            psi = coherent_state(alpha, 96)
            _, m_ref, s_ref = brute_phase_stats(psi.amplitudes)
            mean, spread = phase_statistics(psi)
            assert math.remainder(mean - m_ref, 2 * math.pi) == pytest.approx(0, abs=1e-10)
            assert spread == pytest.approx(s_ref, abs=1e-10)

    def test_vacuum_uniform(self):
        mean, spread = phase_statistics(coherent_state(0, 64))
        assert mean == 0.0
        assert spread == pytest.approx(1.81358, abs=1e-5)
        assert spread == pytest.approx(math.pi / math.sqrt(3), abs=1e-3)

    def test_mean_tracks_argument(self):
        for arg in (0.3, 1.0, -2.0, 3.0):
            mean, _ = phase_statistics(coherent_state(3 * np.exp(1j * arg), 128))
            assert math.remainder(mean - arg, 2 * math.pi) == pytest.approx(0, abs=1e-9)

    def test_products_above_half(self):
        for alpha in range(1, 7):
            psi = coherent_state(alpha, 256)
            _, dn = number_statistics(psi)
            _, dt = phase_statistics(psi)
            assert dn * dt >= 0.5
