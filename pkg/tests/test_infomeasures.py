"""Tests for the entropy and mutual-information estimators."""

import numpy as np
import pytest

import projmi as pm
from projmi import oracles
from projmi.constants import EULER_GAMMA, LOG2_E
from projmi.errors import BadParameter, DimensionMismatch, MarginalZeroAnomaly
from projmi.infomeasures import check_marginal_support

from helpers import agree_within, random_point, random_product_state

DIMS33 = pm.BipartiteDims(3, 3)

# Zero tests on product states: the integrand cancels to rounding noise,
# so allow an absolute double-precision floor on top of the 4-SE band.
ZERO_FLOOR = 1e-12


class TestJointDensity:
    def test_maxent_at_basis_pair(self):
        joint = pm.joint_density_eval(pm.maximally_entangled(3), DIMS33)
        e0 = pm.project([1, 0, 0])
        assert joint(e0, e0) == pytest.approx(1 / 3, abs=1e-12)

    def test_product_state_factorizes(self):
        rng = np.random.default_rng(1)
        sigma, sigma_a, sigma_b = random_product_state(3, 3, rng)
        joint = pm.joint_density_eval(sigma, DIMS33)
        rho_a = pm.liouville_density(sigma_a)
        rho_b = pm.liouville_density(sigma_b)
        for _ in range(20):
            p, q = random_point(3, rng), random_point(3, rng)
            assert joint(p, q) == pytest.approx(rho_a(p) * rho_b(q), abs=1e-12)

    def test_maxent_schmidt_overlap_formula(self):
        rng = np.random.default_rng(2)
        joint = pm.joint_density_eval(pm.maximally_entangled(3), DIMS33)
        for _ in range(20):
            p, q = random_point(3, rng), random_point(3, rng)
            expected = np.abs(np.sum(p.vector * q.vector)) ** 2 / 3
            assert joint(p, q) == pytest.approx(expected, abs=1e-12)
        # a point orthogonal to the conjugate of p gives zero joint density
        p = random_point(3, rng)
        target = p.vector.conj()
        basis = np.linalg.qr(
            np.column_stack([target, rng.standard_normal((3, 2)) + 1j * rng.standard_normal((3, 2))])
        )[0]
        q_perp = pm.project(basis[:, 1])
        assert joint(p, q_perp) == pytest.approx(0.0, abs=1e-12)

    def test_values_in_unit_interval(self):
        rng = np.random.default_rng(3)
        joint = pm.joint_density_eval(pm.mixed_random(9, 9, rng), DIMS33)
        for _ in range(50):
            v = joint(random_point(3, rng), random_point(3, rng))
            assert -1e-12 <= v <= 1.0 + 1e-12

    def test_dimension_checks(self):
        with pytest.raises(DimensionMismatch):
            pm.joint_density_eval(pm.mixed_random(8, 8, 0), DIMS33)
        joint = pm.joint_density_eval(pm.maximally_entangled(3), DIMS33)
        with pytest.raises(DimensionMismatch):
            joint(pm.project([1, 0]), pm.project([1, 0, 0]))


class TestMarginalDensity:
    def test_maxent_marginal_constant(self):
        rng = np.random.default_rng(4)
        for d in (3, 4):
            marg = pm.marginal_density(
                pm.maximally_entangled(d), pm.BipartiteDims(d, d), integrate_out="A"
            )
            for _ in range(20):
                assert marg(random_point(d, rng)) == pytest.approx(1 / d, abs=1e-12)

    def test_product_marginal_is_factor_density(self):
        rng = np.random.default_rng(5)
        sigma, sigma_a, _ = random_product_state(3, 3, rng)
        marg = pm.marginal_density(sigma, DIMS33, integrate_out="B")
        rho_a = pm.liouville_density(sigma_a)
        for _ in range(20):
            p = random_point(3, rng)
            assert marg(p) == pytest.approx(rho_a(p), abs=1e-12)

    def test_mc_mode_matches_analytic(self):
        rng = np.random.default_rng(6)
        sigma = pm.mixed_random(9, 9, rng)
        analytic = pm.marginal_density(sigma, DIMS33, integrate_out="B")
        mc = pm.marginal_density(
            sigma, DIMS33, integrate_out="B", mode="mc", cfg=pm.SamplerConfig(1, 20_000)
        )
        for _ in range(20):
            p = random_point(3, rng)
            est = mc(p)
            assert abs(est.mean - analytic(p)) <= 4 * est.std_error

    def test_mode_validation(self):
        sigma = pm.maximally_entangled(3)
        with pytest.raises(BadParameter):
            pm.marginal_density(sigma, DIMS33, integrate_out="C")
        with pytest.raises(BadParameter):
            pm.marginal_density(sigma, DIMS33, integrate_out="A", mode="exactly")
        with pytest.raises(BadParameter):
            pm.marginal_density(sigma, DIMS33, integrate_out="A", mode="mc")


class TestDifferentialEntropyMu:
    def test_maximally_mixed_is_log_dim(self):
        for d in (3, 4):
            sigma = pm.validate_density(np.eye(d) / d)
            est = pm.differential_entropy_mu(sigma, pm.SamplerConfig(0, 5000))
            assert est.mean == pytest.approx(np.log2(d), abs=1e-9)

    def test_pure_state_matches_beta_oracle(self):
        est = pm.differential_entropy_mu(pm.pure_random(3, 7), pm.SamplerConfig(1, 100_000))
        assert abs(est.mean - oracles.beta_pure_entropy(3)) <= 4 * est.std_error

    def test_unitary_invariance(self):
        rng = np.random.default_rng(8)
        sigma = pm.mixed_random(3, 2, rng)
        u = pm.haar_unitary(3, rng)
        rotated = pm.validate_density(u @ sigma.matrix @ u.conj().T)
        e1 = pm.differential_entropy_mu(sigma, pm.SamplerConfig(1, 100_000))
        e2 = pm.differential_entropy_mu(rotated, pm.SamplerConfig(2, 100_000))
        assert agree_within(e1, e2)


class TestGaussianOverlapEntropy:
    def test_constant_value(self):
        c = pm.pure_state_entropy_gaussian_constant()
        assert c == pytest.approx(-3.2199, abs=1e-4)
        assert c == pytest.approx((2 * EULER_GAMMA - 2) * LOG2_E - 2, abs=0)
        assert -c == pytest.approx(oracles.radial_log_moment_closed_form(), abs=1e-12)

    def test_printed_shift_constant(self):
        # the closed-form shift over log2(d) is 3.22 to two decimals
        for d in (3, 4, 5):
            shift = pm.maxent_mi_closed_form(d) - np.log2(d)
            assert round(shift, 2) == 3.22

    def test_mc_matches_constant(self):
        psi = np.zeros(3, dtype=complex)
        psi[0] = 1.0
        est = pm.pure_state_entropy_gaussian(psi, pm.SamplerConfig(3, 100_000))
        assert abs(est.mean - pm.pure_state_entropy_gaussian_constant()) <= 4 * est.std_error

    def test_dimension_independent(self):
        rng = np.random.default_rng(9)
        estimates = []
        for n, seed in ((3, 1), (5, 2)):
            x = rng.standard_normal(n) + 1j * rng.standard_normal(n)
            psi = x / np.linalg.norm(x)
            estimates.append(
                pm.pure_state_entropy_gaussian(psi, pm.SamplerConfig(seed, 100_000))
            )
        assert agree_within(estimates[0], estimates[1])

    def test_requires_unit_vector(self):
        with pytest.raises(BadParameter):
            pm.pure_state_entropy_gaussian(np.array([2.0, 0.0]), pm.SamplerConfig(0, 100))


class TestClassicalLikeMiProjective:
    def test_product_state_zero(self):
        rng = np.random.default_rng(10)
        sigma, _, _ = random_product_state(3, 3, rng)
        est = pm.classical_like_mi_projective(sigma, DIMS33, pm.SamplerConfig(1, 50_000))
        assert abs(est.mean) <= 4 * est.std_error + ZERO_FLOOR

    def test_maxent_matches_entropy_decomposition_oracle(self):
        # log2(3) - (H_3 - 1) log2(e), confirmed by brute-force 2D MC
        target = np.log2(3) - (oracles.beta_pure_entropy_closed_form(3))
        est = pm.classical_like_mi_projective(
            pm.maximally_entangled(3), DIMS33, pm.SamplerConfig(2, 200_000)
        )
        assert abs(est.mean - target) <= 4 * est.std_error

    def test_kl_nonnegative(self):
        for seed in (1, 2, 3):
            sigma = pm.mixed_random(9, 4, seed)
            est = pm.classical_like_mi_projective(sigma, DIMS33, pm.SamplerConfig(seed, 50_000))
            assert est.mean >= -4 * est.std_error

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(16)
        sigma = pm.mixed_random(9, 3, rng)
        u = pm.tensor(pm.haar_unitary(3, rng), pm.haar_unitary(3, rng))
        rotated = pm.validate_density(u @ sigma.matrix @ u.conj().T)
        a = pm.classical_like_mi_projective(sigma, DIMS33, pm.SamplerConfig(1, 100_000))
        b = pm.classical_like_mi_projective(rotated, DIMS33, pm.SamplerConfig(2, 100_000))
        assert agree_within(a, b)


class TestClassicalLikeMiGaussian:
    def test_product_state_zero(self):
        rng = np.random.default_rng(11)
        sigma, _, _ = random_product_state(3, 3, rng)
        est = pm.classical_like_mi_gaussian(sigma, DIMS33, pm.SamplerConfig(1, 50_000))
        assert abs(est.mean) <= 4 * est.std_error + ZERO_FLOOR

    def test_maxent_stable_across_seeds(self):
        sigma = pm.maximally_entangled(3)
        a = pm.classical_like_mi_gaussian(sigma, DIMS33, pm.SamplerConfig(1, 100_000))
        b = pm.classical_like_mi_gaussian(sigma, DIMS33, pm.SamplerConfig(2, 100_000))
        assert a.mean > 0 and b.mean > 0
        assert agree_within(a, b)

    def test_log_ratio_scale_invariant(self):
        rng = np.random.default_rng(12)
        sigma = pm.mixed_random(9, 9, rng)
        joint = pm.joint_density_eval(sigma, DIMS33)
        sig_a = pm.partial_trace(sigma, DIMS33, "A").matrix
        sig_b = pm.partial_trace(sigma, DIMS33, "B").matrix
        x = (rng.standard_normal(3) + 1j * rng.standard_normal(3))[None, :]
        y = (rng.standard_normal(3) + 1j * rng.standard_normal(3))[None, :]

        def log_ratio(xs, ys):
            w = joint.eval_batch(xs, ys)[0]
            wa = np.einsum("bi,ij,bj->b", xs.conj(), sig_a, xs).real[0]
            wb = np.einsum("bi,ij,bj->b", ys.conj(), sig_b, ys).real[0]
            return np.log2(w / (wa * wb))

        assert log_ratio(2.0 * x, y) == pytest.approx(log_ratio(x, y), abs=1e-10)

    def test_local_unitary_invariance(self):
        rng = np.random.default_rng(13)
        sigma = pm.mixed_random(9, 3, rng)
        u = pm.tensor(pm.haar_unitary(3, rng), pm.haar_unitary(3, rng))
        rotated = pm.validate_density(u @ sigma.matrix @ u.conj().T)
        a = pm.classical_like_mi_gaussian(sigma, DIMS33, pm.SamplerConfig(1, 100_000))
        b = pm.classical_like_mi_gaussian(rotated, DIMS33, pm.SamplerConfig(2, 100_000))
        assert agree_within(a, b)


class TestEntropyDecomposition:
    def test_product_state_zero(self):
        rng = np.random.default_rng(14)
        sigma, _, _ = random_product_state(3, 3, rng)
        est = pm.entropy_decomposition_mi(sigma, DIMS33, pm.SamplerConfig(1, 50_000))
        assert abs(est.mean) <= 4 * est.std_error

    def test_maxent_marginal_entropy_is_log_d(self):
        red = pm.partial_trace(pm.maximally_entangled(3), DIMS33, "A")
        est = pm.differential_entropy_mu(red, pm.SamplerConfig(0, 5000))
        assert est.mean == pytest.approx(np.log2(3), abs=1e-9)

    def test_agrees_with_projective_estimator(self):
        for seed in (1, 2):
            sigma = pm.mixed_random(9, 9, seed)
            a = pm.entropy_decomposition_mi(sigma, DIMS33, pm.SamplerConfig(seed, 50_000))
            b = pm.classical_like_mi_projective(sigma, DIMS33, pm.SamplerConfig(seed + 50, 50_000))
            assert agree_within(a, b)


class TestMaxentClosedForm:
    def test_values(self):
        assert pm.maxent_mi_closed_form(3) == pytest.approx(
            np.log2(3) + 2 + (2 - 2 * EULER_GAMMA) * LOG2_E, abs=0
        )
        assert pm.maxent_mi_closed_form(3) == pytest.approx(4.8049, abs=1e-4)
        assert pm.maxent_mi_closed_form(4) == pytest.approx(5.2199, abs=1e-4)

    def test_shift_is_dimension_independent(self):
        shifts = {round(pm.maxent_mi_closed_form(d) - np.log2(d), 10) for d in (3, 4, 5, 8)}
        assert len(shifts) == 1

    def test_small_dimension_rejected(self):
        with pytest.raises(BadParameter):
            pm.maxent_mi_closed_form(2)


class TestMiReport:
    def test_ratio_defined_for_maxent(self):
        report = pm.mi_report(pm.maximally_entangled(3), DIMS33, pm.SamplerConfig(1, 50_000))
        assert report.ratio_gaussian_over_projective is not None
        assert np.isfinite(report.ratio_gaussian_over_projective)
        assert report.von_neumann == pytest.approx(2 * np.log2(3), abs=1e-9)

    def test_ratio_undefined_for_product_state(self):
        rng = np.random.default_rng(15)
        sigma, _, _ = random_product_state(3, 3, rng)
        report = pm.mi_report(sigma, DIMS33, pm.SamplerConfig(1, 20_000))
        assert report.ratio_gaussian_over_projective is None

    def test_reproducible(self):
        sigma = pm.maximally_entangled(3)
        a = pm.mi_report(sigma, DIMS33, pm.SamplerConfig(7, 20_000))
        b = pm.mi_report(sigma, DIMS33, pm.SamplerConfig(7, 20_000))
        assert a.projective == b.projective
        assert a.gaussian == b.gaussian


class TestMarginalSupportGuard:
    def test_positive_joint_with_vanishing_marginal_raises(self):
        with pytest.raises(MarginalZeroAnomaly, match="sample 4096"):
            check_marginal_support(
                np.array([1e-3]), np.array([0.0]), np.array([0.5]), offset=4096
            )

    def test_zero_joint_passes(self):
        mask = check_marginal_support(
            np.array([0.0, 1e-3]), np.array([0.0, 0.2]), np.array([0.1, 0.4])
        )
        assert mask.tolist() == [False, True]
