import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from subweibull import (
    DomainError,
    TailParams,
    log_quantile,
    symmetric_subweibull_isf,
    symmetric_subweibull_survival,
    weibull_cdf,
    weibull_quantile,
    weibull_survival,
)

thetas = st.floats(0.1, 10.0)
scales = st.floats(0.01, 100.0)


def test_params_conventions_agree():
    p = TailParams.from_scale(2.0, 9.0)
    assert p.rate_b == pytest.approx(9.0 ** -0.5)
    q = TailParams.from_rate(2.0, p.rate_b)
    assert q.scale_lambda == pytest.approx(9.0, rel=1e-12)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.inf, math.nan])
def test_params_reject_nonpositive(bad):
    with pytest.raises(DomainError):
        TailParams.from_scale(bad, 1.0)
    with pytest.raises(DomainError):
        TailParams.from_rate(1.0, bad)


def test_params_reject_inconsistent_fields():
    with pytest.raises(DomainError):
        TailParams(theta=1.0, scale_lambda=2.0, rate_b=2.0)


@pytest.mark.parametrize(
    "x, theta, b, expected",
    [(0.0, 1.0, 1.0, 1.0), (1.0, 1.0, 1.0, math.exp(-1)), (4.0, 2.0, 1.0, math.exp(-2))],
)
def test_survival_examples(x, theta, b, expected):
    assert weibull_survival(x, TailParams.from_rate(theta, b)) == pytest.approx(expected, rel=1e-15)


def test_survival_at_infinity_is_zero():
    assert weibull_survival(math.inf, TailParams.from_rate(1.0, 1.0)) == 0.0


@pytest.mark.parametrize("x", [-1e-12, -3.0, math.nan, -math.inf])
def test_survival_rejects_negative(x):
    with pytest.raises(DomainError):
        weibull_survival(x, TailParams.from_rate(1.0, 1.0))


def test_quantile_examples():
    assert weibull_quantile(0.0, TailParams.from_scale(3.0, 5.0)) == 0.0
    for theta in (0.3, 1.0, 4.0):
        assert weibull_quantile(1 - math.exp(-1), TailParams.from_scale(theta, 1.0)) == pytest.approx(1.0, rel=1e-14)
    assert weibull_quantile(0.5, TailParams.from_scale(1.0, 2.0)) == pytest.approx(2 * math.log(2), rel=1e-15)


@pytest.mark.parametrize("t", [1.0, 1.5, -0.1, math.nan])
def test_quantile_domain(t):
    with pytest.raises(DomainError):
        weibull_quantile(t, TailParams.from_scale(1.0))


def test_log_quantile_examples():
    p = TailParams.from_scale(2.0, 1.0)
    assert log_quantile(1 - math.exp(-1), p) == pytest.approx(0.0, abs=1e-15)
    assert log_quantile(1 - math.exp(-math.e), p) == pytest.approx(2.0, rel=1e-14)
    assert log_quantile(0.5, TailParams.from_scale(1.0, 2.0)) == pytest.approx(math.log(2 * math.log(2)), rel=1e-14)
    assert log_quantile(0.5, TailParams.from_scale(1.0, 2.0)) == pytest.approx(0.326634, abs=1e-6)


@pytest.mark.parametrize("t", [0.0, 1.0, -0.5, 2.0])
def test_log_quantile_domain(t):
    with pytest.raises(DomainError):
        log_quantile(t, TailParams.from_scale(1.0))


def test_log_quantile_defined_where_quantile_underflows():
    p = TailParams.from_scale(50.0, 1.0)
    assert weibull_quantile(1e-12, p) == 0.0
    assert log_quantile(1e-12, p) == pytest.approx(50 * math.log(1e-12), rel=1e-6)


@given(st.floats(1e-6, 1 - 1e-6), thetas, scales)
def test_log_quantile_matches_log_of_quantile(t, theta, lam):
    p = TailParams.from_scale(theta, lam)
    q = weibull_quantile(t, p)
    if q > 1e-300:
        assert log_quantile(t, p) == pytest.approx(math.log(q), rel=1e-9, abs=1e-9)


@pytest.mark.parametrize("theta", [0.5, 1.0, 2.0, 5.0])
def test_round_trip_on_log_grid(theta):
    p = TailParams.from_scale(theta, 1.7)
    # grid stops where the survival reaches 1e-4 so the cdf keeps full precision
    xmax = p.scale_lambda * math.log(1e4) ** theta
    x = np.geomspace(1e-6, xmax, 400)
    back = weibull_quantile(weibull_cdf(x, p), p)
    assert np.all(np.abs(back - x) <= 1e-10 * (1 + x))


def test_cdf_is_complement_of_survival():
    p = TailParams.from_scale(1.5, 2.0)
    x = np.linspace(0, 20, 101)
    np.testing.assert_allclose(weibull_cdf(x, p), 1 - weibull_survival(x, p), atol=1e-15)


@given(thetas, scales)
def test_survival_monotone_and_bounded(theta, lam):
    p = TailParams.from_scale(theta, lam)
    s = weibull_survival(np.linspace(0, 50 * lam, 500), p)
    assert np.all((0 <= s) & (s <= 1))
    assert np.all(np.diff(s) <= 0)


@given(thetas, scales, st.floats(0, 1e3))
def test_rate_and_scale_give_same_survival(theta, lam, x):
    via_scale = weibull_survival(x, TailParams.from_scale(theta, lam))
    via_rate = weibull_survival(x, TailParams.from_rate(theta, lam ** (-1 / theta)))
    assert via_rate == pytest.approx(via_scale, rel=1e-12, abs=1e-300)


class TestSymmetric:
    @pytest.mark.parametrize("theta", [0.25, 0.5, 1.0, 2.0, 7.0])
    def test_half_at_zero(self, theta):
        assert symmetric_subweibull_survival(0.0, theta) == pytest.approx(0.5, abs=1e-15)

    def test_explicit_values(self):
        assert symmetric_subweibull_survival(math.log(10), 1.0) == pytest.approx(0.05, rel=1e-13)
        assert symmetric_subweibull_survival(-math.log(10), 1.0) == pytest.approx(0.95, rel=1e-13)

    def test_matches_formula_with_default_cut(self):
        theta, x = 2.0, 1.3
        expected = 10 * math.exp(-((x + math.log(20) ** theta) ** (1 / theta)))
        assert symmetric_subweibull_survival(x, theta) == pytest.approx(expected, rel=1e-14)

    @given(st.floats(-1e3, 1e3), thetas)
    def test_symmetry(self, x, theta):
        s = symmetric_subweibull_survival(x, theta) + symmetric_subweibull_survival(-x, theta)
        assert abs(s - 1) <= 1e-12

    @given(thetas)
    def test_monotone_in_unit_interval(self, theta):
        s = symmetric_subweibull_survival(np.linspace(-30, 30, 2001), theta)
        assert np.all((0 <= s) & (s <= 1))
        assert np.all(np.diff(s) <= 0)

    @given(st.floats(1e-9, 1 - 1e-9), st.floats(0.2, 5.0))
    def test_isf_inverts(self, u, theta):
        x = symmetric_subweibull_isf(u, theta)
        assert symmetric_subweibull_survival(x, theta) == pytest.approx(u, rel=1e-7, abs=1e-12)

    def test_other_cut_levels(self):
        assert symmetric_subweibull_survival(0.0, 1.3, cut=0.8) == pytest.approx(0.5)
        with pytest.raises(DomainError):
            symmetric_subweibull_survival(0.0, 1.0, cut=1.0)
