import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.special import gammaln

from subweibull import (
    DegenerateSampleError,
    DomainError,
    MomentProfile,
    RngStream,
    SampleSet,
    TailParams,
    analytic_abs_moment,
    empirical_moment_norm,
    fit_theta_from_moments,
    moment_growth_profile,
    sample_weibull,
)
from subweibull.moments import DEFAULT_ORDERS, analytic_profile, moment_condition_holds, moment_constant


class TestEmpiricalNorm:
    def test_constant_sample(self):
        for k in (0.5, 1, 3, 17.25):
            assert empirical_moment_norm(SampleSet([-2.5] * 7), k) == pytest.approx(2.5, rel=1e-15)

    def test_two_point(self):
        assert empirical_moment_norm(SampleSet([0.0, 2.0]), 2) == pytest.approx(math.sqrt(2), rel=1e-15)

    def test_gaussian_fourth(self, gauss_sample):
        # Var(X^4) = 105 - 9; delta method for the 1/4 power
        se = 0.25 * 3 ** -0.75 * math.sqrt(96 / gauss_sample.n)
        assert abs(empirical_moment_norm(gauss_sample, 4) - 3 ** 0.25) < 3 * se

    @pytest.mark.parametrize("k", [0, -1, math.nan])
    def test_bad_order(self, k):
        with pytest.raises(DomainError):
            empirical_moment_norm(SampleSet([1.0]), k)

    @given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50), st.floats(0.1, 60))
    def test_bounded_by_max(self, xs, k):
        a = np.abs(np.array(xs))
        assert empirical_moment_norm(SampleSet(xs), k) <= a.max() * (1 + 1e-12)

    def test_scale_equivariance_power_of_two(self, exp_sample):
        for k in (1, 2.5, 10):
            base = empirical_moment_norm(exp_sample, k)
            assert empirical_moment_norm(exp_sample.scaled(-4.0), k) == 4.0 * base

    def test_scale_equivariance_general(self, exp_sample):
        base = empirical_moment_norm(exp_sample, 3)
        assert empirical_moment_norm(exp_sample.scaled(3.7), 3) == pytest.approx(3.7 * base, rel=1e-13)


class TestProfile:
    def test_constant_profile(self):
        p = moment_growth_profile(SampleSet([3.0] * 200))
        np.testing.assert_allclose(p.norms, 3.0, rtol=1e-14)

    @settings(max_examples=50)
    @given(st.lists(st.floats(-1e3, 1e3), min_size=1, max_size=100))
    def test_nondecreasing(self, xs):
        p = moment_growth_profile(SampleSet(xs))
        assert np.all(np.diff(p.norms) >= 0)

    def test_exponential_matches_factorial_oracle(self, exp_sample):
        n = exp_sample.n
        k = np.arange(1, 21, dtype=float)
        p = moment_growth_profile(exp_sample, k)
        assert p.reliable[0]
        for kk, norm, ok in zip(k, p.norms, p.reliable):
            if not ok:
                break
            mu = math.exp(gammaln(kk + 1))
            sd = math.sqrt(math.exp(gammaln(2 * kk + 1)) - mu * mu)
            se = norm / kk * sd / (mu * math.sqrt(n))
            assert abs(norm - mu ** (1 / kk)) < 4 * se, kk

    def test_reliability_is_a_prefix(self, exp_sample):
        r = moment_growth_profile(exp_sample).reliable
        assert r[0] and not r[-1]
        first_bad = int(np.argmin(r))
        assert not np.any(r[first_bad:])

    def test_bad_orders(self):
        with pytest.raises(DomainError):
            moment_growth_profile(SampleSet([1.0]), [2.0, 1.0])
        with pytest.raises(DomainError):
            moment_growth_profile(SampleSet([1.0]), [])

    def test_json_fields(self):
        p = MomentProfile([1.0, 2.0], [1.0, 1.5], 10)
        d = json.loads(json.dumps(p.to_dict()))
        assert set(d) == {"orders", "norms", "n"}
        assert MomentProfile.from_dict(d).norms.tolist() == [1.0, 1.5]

    def test_profile_rejects_mismatch(self):
        with pytest.raises(DomainError):
            MomentProfile([1.0, 2.0], [1.0], 3)


class TestFit:
    def test_exact_power_law(self):
        k = np.arange(1, 21, dtype=float)
        fit = fit_theta_from_moments(MomentProfile(k, 2 * k**0.5, 0))
        assert fit.theta_hat == pytest.approx(0.5, abs=1e-10)
        assert fit.log_K2_hat == pytest.approx(math.log(2), abs=1e-10)
        assert fit.ratio_min == pytest.approx(2.0) and fit.ratio_max == pytest.approx(2.0)
        assert fit.r_squared == pytest.approx(1.0)

    @given(st.floats(0.01, 10), st.floats(0.01, 100))
    def test_power_law_recovered(self, theta, c):
        k = np.arange(1, 31, dtype=float)
        fit = fit_theta_from_moments(MomentProfile(k, c * k**theta, 0))
        assert fit.theta_hat == pytest.approx(theta, abs=1e-10)

    def test_power_law_uncorrected(self):
        k = np.arange(1, 6, dtype=float)
        fit = fit_theta_from_moments(MomentProfile(k, 3 * k**1.5, 0), corrected=False)
        assert fit.theta_hat == pytest.approx(1.5, abs=1e-12)
        assert not fit.corrected

    def test_constant_variable(self):
        fit = fit_theta_from_moments(moment_growth_profile(SampleSet([1.5] * 150)))
        assert fit.theta_hat == pytest.approx(0.0, abs=1e-10)

    def test_analytic_gaussian(self):
        fit = fit_theta_from_moments(analytic_profile("gaussian", np.arange(1, 51), sigma=1.0))
        assert 0.45 <= fit.theta_hat <= 0.55

    def test_analytic_exponential(self):
        fit = fit_theta_from_moments(analytic_profile("exponential", np.arange(1, 51), lam=1.0))
        assert 0.95 <= fit.theta_hat <= 1.05

    def test_all_zero_sample(self):
        with pytest.raises(DegenerateSampleError):
            fit_theta_from_moments(moment_growth_profile(SampleSet([0.0] * 10)))

    def test_zeros_are_legal(self):
        vals = np.where(np.arange(2000) % 2 == 0, 0.0, np.arange(2000) / 2000)
        fit = fit_theta_from_moments(moment_growth_profile(SampleSet(vals)))
        assert math.isfinite(fit.theta_hat)

    def test_too_few_orders(self):
        with pytest.raises(DomainError):
            fit_theta_from_moments(MomentProfile([1.0, 2.0], [1.0, 2.0], 0))

    def test_scale_invariance(self, exp_sample):
        base = fit_theta_from_moments(moment_growth_profile(exp_sample))
        for c in (0.25, 8.0, -2.0):
            f = fit_theta_from_moments(moment_growth_profile(exp_sample.scaled(c)))
            assert f.theta_hat == base.theta_hat
            assert f.log_K2_hat == pytest.approx(base.log_K2_hat + math.log(abs(c)), abs=1e-12)

    def test_fit_invariants_and_json(self, gauss_sample):
        fit = fit_theta_from_moments(moment_growth_profile(gauss_sample))
        assert fit.ratio_min <= fit.ratio_max
        assert 0 <= fit.r_squared <= 1
        assert set(fit.to_dict()) == {"theta_hat", "log_K2_hat", "ratio_min", "ratio_max", "r_squared"}

    def test_sum_of_ten_not_heavier_than_summands(self):
        # a sum of iid sub-Weibull(1) terms is sub-Weibull with parameter at most 1
        parts = [sample_weibull(100_000, TailParams.from_scale(1.0), RngStream(0, 10 + j)).values for j in range(10)]
        fit = fit_theta_from_moments(moment_growth_profile(sum(parts)))
        assert fit.theta_hat <= 1.0 + 0.2


class TestInclusion:
    @settings(max_examples=50)
    @given(
        st.lists(st.floats(0.01, 100), min_size=1, max_size=30),
        st.floats(0, 3),
        st.floats(0, 3),
    )
    def test_moment_condition_transfers(self, increments, t1, dt):
        norms = np.cumsum(increments)
        k = np.arange(1, norms.size + 1, dtype=float)
        p = MomentProfile(k, norms, 0)
        K = moment_constant(p, t1)
        assert moment_condition_holds(p, t1, K)
        assert moment_condition_holds(p, t1 + dt, K)
        assert moment_constant(p, t1 + dt) <= K


class TestAnalytic:
    def test_examples(self):
        assert analytic_abs_moment("gaussian", 2, sigma=1.0) == pytest.approx(1.0, rel=1e-14)
        assert analytic_abs_moment("exponential", 3, lam=1.0) == pytest.approx(6.0, rel=1e-14)
        assert analytic_abs_moment("weibull", 1, theta=2.0, lam=1.0) == pytest.approx(2.0, rel=1e-14)

    def test_gaussian_sigma_scaling(self):
        assert analytic_abs_moment("gaussian", 4, sigma=2.0) == pytest.approx(3 * 16, rel=1e-13)

    def test_unknown(self):
        with pytest.raises(DomainError):
            analytic_abs_moment("cauchy", 1)
        with pytest.raises(DomainError):
            analytic_abs_moment("gaussian", 0)

    def test_default_grid(self):
        assert DEFAULT_ORDERS[0] == 1 and DEFAULT_ORDERS[-1] == 30
