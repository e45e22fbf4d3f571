"""Worked input/output pairs for each public operation."""
import math

import numpy as np
import pytest

from qmclab.clone import bh_clone, clone_then_tomograph
from qmclab.cli import load_config, run_experiment
from qmclab.estimate import (
    HalfIntervalOracle, angle_from_bloch, bisection_search, mle_polarization, pauli_tomography,
    uncertainty_product,
)
from qmclab.fock import (
    coherent_state, number_statistics, oscillator_operators, phase_statistics, uncertainty_check,
)
from qmclab.measure import CopyBudget, born_probability, sample_pauli, sample_polarization
from qmclab.oracle import (
    QueryState, exact_oracle, probabilistic_oracle, query_oracle_apply, verify_claim,
    verify_claim_batch,
)
from qmclab.qstate import DensityMatrix, make_linear_polarization, wrapped_distance
from qmclab.wigner import (
    analytic_wigner_coherent, grid_axis, inverse_radon, sample_quadratures,
)

H = make_linear_polarization(0.0)


class TestFock:
    def test_alpha2_number(self):
        mean, dn = number_statistics(coherent_state(2, 64))
        assert mean == pytest.approx(4, abs=1e-8)
        assert dn == pytest.approx(2, abs=1e-6)

    def test_two_levels(self):
        np.testing.assert_array_equal(oscillator_operators(2).N.entries, np.diag([0, 1]))

    def test_ground_energy(self):
        H16 = oscillator_operators(16).H.entries
        assert H16[0, 0].real == pytest.approx(0.5, abs=1e-12)

    def test_commutator_expectation(self):
        ops = oscillator_operators(64)
        c = coherent_state(1, 64).amplitudes
        comm = ops.x.entries @ ops.p.entries - ops.p.entries @ ops.x.entries
        assert np.vdot(c, comm @ c) == pytest.approx(1j, abs=1e-6)

    def test_self_commuting(self):
        ops = oscillator_operators(32)
        r = uncertainty_check(ops.x, ops.x, coherent_state(1 + 2j, 32))
        assert r.bound == pytest.approx(0, abs=1e-12) and r.satisfied

    def test_number_position(self):
        ops = oscillator_operators(128)
        assert uncertainty_check(ops.N, ops.x, coherent_state(3, 128)).satisfied

    def test_alpha5_phase(self):
        psi = coherent_state(5, 256)
        mean, dtheta = phase_statistics(psi)
        _, dn = number_statistics(psi)
        assert mean == pytest.approx(0, abs=1e-3)
        assert 0.50 <= dn * dtheta <= 0.60


class TestMeasure:
    @pytest.mark.parametrize("k, b, p", [(0, 0, 1), (math.pi / 2, 0, 0), (math.pi / 4, 0, 0.5)])
    def test_born(self, k, b, p):
        assert born_probability(make_linear_polarization(k), b) == pytest.approx(p, abs=1e-15)

    def test_aligned(self):
        assert sample_polarization(H, 0, 1000, 0, CopyBudget()).n_pass == 1000

    def test_diagonal_frequency(self):
        c = sample_polarization(make_linear_polarization(math.pi / 4), 0, 10_000, 1, CopyBudget())
        assert abs(c.pass_fraction - 0.5) <= 0.02

    def test_empty_draw(self):
        b = CopyBudget()
        c = sample_polarization(H, 0, 0, 2, b)
        assert (c.n_pass, c.n_fail) == (0, 0) and b.consumed == 0

    def test_pauli_eigenstate(self):
        assert sample_pauli(H.density(), "Z", 100, 3, CopyBudget()).n_pass == 100

    def test_pauli_mixed(self):
        for i, axis in enumerate("XYZ"):
            c = sample_pauli(DensityMatrix.maximally_mixed(), axis, 10_000, i, CopyBudget())
            assert abs(c.pass_fraction - 0.5) <= 0.02

    def test_pauli_unbiased_axis(self):
        c = sample_pauli(H.density(), "X", 10_000, 4, CopyBudget())
        assert abs(c.mean_sign) <= 0.03


class TestOracle:
    @pytest.mark.parametrize("k", [math.pi / 3, 0.0])
    def test_exact(self, k):
        ans = exact_oracle(make_linear_polarization(k), CopyBudget())
        assert wrapped_distance(ans.estimate, k) < 1e-12 and ans.copies_charged == 1

    def test_two_calls(self):
        b = CopyBudget()
        exact_oracle(H, b)
        exact_oracle(H, b)
        assert b.consumed == 2

    def test_zero_sigma(self):
        ans = probabilistic_oracle(make_linear_polarization(math.pi / 5), 0.0, 0, CopyBudget())
        assert wrapped_distance(ans.estimate, math.pi / 5) < 1e-12

    def test_sigma_spread(self):
        k = math.pi / 2
        state = make_linear_polarization(k)
        rng = np.random.default_rng(10)
        b = CopyBudget()
        est = [probabilistic_oracle(state, 0.1, rng, b) for _ in range(10_000)]
        errs = [(float(a.estimate) - k + math.pi / 2) % math.pi - math.pi / 2 for a in est]
        assert abs(np.std(errs) - 0.1) <= 0.005
        assert all(a.copies_charged == 1 for a in est) and b.consumed == 10_000

    def test_m10_false_accept(self):
        n, p = 10 ** 6, 2.0 ** -10
        acc = verify_claim_batch(H, math.pi / 4, 10, n, 11, CopyBudget())
        assert abs(acc - n * p) <= 3 * math.sqrt(n * p * (1 - p))

    def test_orthogonal_claim(self):
        for seed in range(20):
            assert not verify_claim(H, math.pi / 2, 1, seed, CopyBudget()).accepted

    def test_non_member(self):
        out = query_oracle_apply({"101"}, QueryState("011", 0, 0))
        assert (out.x, out.y, out.phase) == ("011", 0, 0.0)


class TestEstimate:
    def test_pole_high_m(self):
        r = pauli_tomography(H.density(), 10 ** 6, 5, CopyBudget())
        assert abs(r.expectation_estimates[2] - 1) <= 0.004

    def test_mixed_m1e4(self):
        est = np.array([pauli_tomography(DensityMatrix.maximally_mixed(), 10 ** 4, s,
                                         CopyBudget()).expectation_estimates
                        for s in range(200)])
        assert np.all(np.abs(est) <= 0.04)
        assert np.all(np.abs(est.std(axis=0, ddof=1) - 0.01) <= 0.001)

    def test_single_shot(self):
        r = pauli_tomography(DensityMatrix.maximally_mixed(), 1, 6, CopyBudget())
        assert set(r.expectation_estimates) <= {-1.0, 1.0} and r.predicted_std == 1

    def test_bisection_examples(self):
        g = bisection_search(HalfIntervalOracle(math.pi / 3), 1)
        assert g.bin_index == 0 and g.hi == math.pi / 2
        g = bisection_search(HalfIntervalOracle(math.pi / 3), 3)
        assert g.bin_index == 2
        assert (g.lo, g.hi) == pytest.approx((math.pi / 4, 3 * math.pi / 8))

    def test_bisection_sweep(self):
        rng = np.random.default_rng(1)
        for k in rng.uniform(0, math.pi, 10_000):
            oracle = HalfIntervalOracle(k)
            g = bisection_search(oracle, 20)
            assert g.contains(oracle.true_k) and g.bin_width == math.pi / 2 ** 20

    @pytest.mark.parametrize("k", [0.0, math.pi / 4])
    def test_mle(self, k):
        k_hat, _ = mle_polarization(make_linear_polarization(k), 10 ** 4, 7, CopyBudget())
        assert wrapped_distance(k_hat, k) <= 0.05

    def test_products(self):
        assert uncertainty_product(2).product == math.pi / 2
        assert uncertainty_product(10).product == pytest.approx(0.030680, abs=1e-6)
        assert uncertainty_product(60).product < 1e-15


class TestClone:
    def test_horizontal(self):
        out = bh_clone(H.density())
        np.testing.assert_allclose(out.clone_a.entries, np.diag([5 / 6, 1 / 6]), atol=1e-15)
        assert out.input_overlap_fidelity == pytest.approx(5 / 6, abs=1e-15)

    def test_pole_recovered(self):
        r = clone_then_tomograph(H, 3 * 10 ** 5, 10 ** 5, 8, CopyBudget())
        assert abs(r.expectation_estimates[2] - 1) <= 0.02

    def test_diagonal_recovered(self):
        b = CopyBudget()
        r = clone_then_tomograph(make_linear_polarization(math.pi / 4), 3 * 10 ** 5, 10 ** 5, 9, b)
        assert wrapped_distance(angle_from_bloch(r.expectation_estimates), math.pi / 4) <= 0.02
        assert b.consumed == 1


class TestWigner:
    def test_vacuum_rows(self):
        n = 2000
        s = sample_quadratures(0, n, 30, 1)
        assert np.all(np.abs(s.sample_means) <= 4 / math.sqrt(2 * n))

    @pytest.mark.parametrize("alpha, mean", [(2, 2 * math.sqrt(2)), (2j, 0.0)])
    def test_theta_zero_mean(self, alpha, mean):
        n = 10_000
        s = sample_quadratures(alpha, n, 4, 2)
        assert abs(s.sample_means[0] - mean) <= 4 * math.sqrt(0.5 / n)

    def test_analytic(self):
        w = analytic_wigner_coherent(0, grid_axis(6, 0.05), grid_axis(6, 0.05))
        assert w.values.max() == pytest.approx(1 / math.pi)
        assert w.integral() == pytest.approx(1, abs=1e-3)
        for alpha in (1, 0.5 - 1j, 2j):
            q0, p0 = math.sqrt(2) * complex(alpha).real, math.sqrt(2) * complex(alpha).imag
            w = analytic_wigner_coherent(alpha, grid_axis(6, 0.05, q0), grid_axis(6, 0.05, p0))
            assert w.integral() == pytest.approx(1, abs=1e-3)
        w = analytic_wigner_coherent(1)
        q, p = w.peak()
        assert abs(q - math.sqrt(2)) <= 0.05 and abs(p) <= 0.05

    def test_displaced_sampled_peak(self):
        step = 0.1
        s = sample_quadratures(2, 10_000, 60, 3)
        q0 = 2 * math.sqrt(2)
        rec = inverse_radon(s, 5.0, grid_axis(1, step, q0), grid_axis(1, step))
        q, p = rec.peak()
        assert abs(q - q0) <= step and abs(p) <= step


class TestHarness:
    def test_uncertainty_curve(self, tmp_path):
        s = run_experiment(load_config("uncertainty-curve"), tmp_path)
        assert s["records"] == 20 and s["m1_product"] == math.pi / 2
        rows = (tmp_path / "uncertainty-curve.csv").read_text().splitlines()[2:]
        assert len(rows) == 20

    def test_verifier_rates(self, tmp_path):
        s = run_experiment(load_config("verifier"), tmp_path)
        for m, rate in s["rates"].items():
            p = 2.0 ** -m
            assert abs(rate - p) <= 4 * math.sqrt(p * (1 - p) / 10 ** 5)
