"""Tests for the Gumbel and GEV building blocks."""
import math

import numpy as np
import pytest
from scipy.integrate import quad

from bgev.distributions import (
    GevParams,
    GumbelParams,
    gev_cdf,
    gev_logpdf,
    gev_quantile,
    gev_support,
    gumbel_cdf,
    gumbel_logpdf,
    gumbel_quantile,
)

# Bisection oracle values (200 halvings of a bracketing interval on the
# closed-form CDF written out inline, independent of the library):
GEV_Q_09_XI0 = 2.2503673273124445
GEV_Q_099_XIM02 = 3.0074642634018947
GUMBEL_Q_05 = 0.3665129205816643
GUMBEL_Q_09 = 2.2503673273124445
# log of the central finite difference of the xi=-0.2 CDF at x=1, h=1e-6:
GEV_LOGPDF_1_XIM02 = -1.220254205657753


def _bisect_cdf(cdf, target, lo, hi, iters=200):
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if cdf(mid) < target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_params_validation():
    with pytest.raises(ValueError):
        GevParams(0.0, 0.0, 0.1)
    with pytest.raises(ValueError):
        GevParams(0.0, -1.0, 0.1)
    with pytest.raises(ValueError):
        GevParams(math.nan, 1.0, 0.1)
    with pytest.raises(ValueError):
        GumbelParams(0.0, 0.0)


@pytest.mark.parametrize("xi", [-0.4, -0.2, 0.0, 0.2, 0.5])
def test_cdf_at_location_is_exp_minus_one(xi):
    p = GevParams(3.0, 2.0, xi)
    assert gev_cdf(3.0, p) == pytest.approx(math.exp(-1.0), abs=1e-15)


def test_cdf_bounded_branches_exact():
    # xi < 0: CDF is exactly 1 at and beyond the upper bound
    p = GevParams(0.0, 1.0, -0.2)
    assert gev_cdf(5.0, p) == 1.0
    assert gev_cdf(7.3, p) == 1.0
    # xi > 0: CDF is exactly 0 at and below the lower bound
    p = GevParams(0.0, 1.0, 0.5)
    assert gev_cdf(-2.0, p) == 0.0
    assert gev_cdf(-10.0, p) == 0.0


def test_cdf_rejects_non_finite():
    p = GevParams(0.0, 1.0, 0.1)
    with pytest.raises(ValueError):
        gev_cdf(math.nan, p)
    with pytest.raises(ValueError):
        gev_cdf(math.inf, p)


def test_logpdf_gumbel_branch_value():
    assert gev_logpdf(0.0, GevParams(0.0, 1.0, 0.0)) == pytest.approx(-1.0, abs=1e-15)


def test_logpdf_outside_support():
    p = GevParams(0.0, 1.0, -0.2)
    assert gev_logpdf(6.0, p) == -math.inf
    assert gev_logpdf(5.0, p) == -math.inf  # density defined as 0 at the bound
    p = GevParams(0.0, 1.0, 0.5)
    assert gev_logpdf(-3.0, p) == -math.inf


def test_logpdf_matches_cdf_derivative_oracle():
    p = GevParams(0.0, 1.0, -0.2)
    assert gev_logpdf(1.0, p) == pytest.approx(GEV_LOGPDF_1_XIM02, abs=1e-8)
    # fresh finite differences at several points and shapes
    for xi in (-0.3, -0.1, 0.15, 0.4):
        params = GevParams(0.5, 1.5, xi)
        for x in (-0.5, 0.5, 2.0, 4.0):
            h = 1e-6
            fd = (gev_cdf(x + h, params) - gev_cdf(x - h, params)) / (2 * h)
            assert gev_logpdf(x, params) == pytest.approx(math.log(fd), abs=1e-7)


def test_quantile_trivial_and_oracle_values():
    p = GevParams(2.0, 3.0, -0.2)
    assert gev_quantile(math.exp(-1.0), p) == pytest.approx(2.0, abs=1e-12)
    assert gev_quantile(0.9, GevParams(0.0, 1.0, 0.0)) == pytest.approx(GEV_Q_09_XI0, abs=1e-10)
    assert gev_quantile(0.99, GevParams(0.0, 1.0, -0.2)) == pytest.approx(
        GEV_Q_099_XIM02, abs=1e-10
    )


def test_quantile_fresh_bisection_oracle():
    p = GevParams(1.0, 2.0, 0.3)
    for q in (0.05, 0.3, 0.8, 0.99):
        expected = _bisect_cdf(lambda x: gev_cdf(x, p), q, -5.0, 60.0)
        assert gev_quantile(q, p) == pytest.approx(expected, abs=1e-9)


def test_quantile_domain_errors():
    p = GevParams(0.0, 1.0, 0.1)
    for q in (0.0, 1.0, -0.2, 1.3):
        with pytest.raises(ValueError):
            gev_quantile(q, p)


@pytest.mark.parametrize("xi", [-0.4, -0.2, 0.0, 0.2, 0.5])
def test_quantile_cdf_round_trip(xi):
    p = GevParams(0.0, 1.0, xi)
    for q in np.arange(0.001, 1.0, 0.037):
        assert abs(gev_cdf(gev_quantile(q, p), p) - q) < 1e-10


@pytest.mark.parametrize("xi", [-0.4, -0.2, 0.0, 0.2, 0.5])
def test_cdf_nondecreasing_on_support_grid(xi):
    p = GevParams(0.0, 1.0, xi)
    lo, hi = gev_support(p)
    grid = np.linspace(max(lo, -20.0) + 1e-9, min(hi, 20.0) - 1e-9, 1000)
    values = gev_cdf(grid, p)
    assert np.all(np.diff(values) >= 0.0)


@pytest.mark.parametrize("xi", [-0.3, -0.1, 0.0, 0.2])
def test_density_integrates_to_one(xi):
    p = GevParams(0.0, 1.0, xi)
    lo, hi = gev_support(p)
    lo = max(lo, gev_quantile(1e-13, p)) if lo == -math.inf else lo
    hi = min(hi, gev_quantile(1.0 - 1e-14, p)) if hi == math.inf else hi
    total, _ = quad(lambda x: math.exp(gev_logpdf(x, p)), lo, hi, limit=200)
    assert total == pytest.approx(1.0, abs=1e-6)


def test_continuity_in_xi_near_zero():
    base = GevParams(0.0, 1.0, 0.0)
    grid = np.linspace(-5.0, 8.0, 400)
    for xi in (1e-7, -1e-7):
        p = GevParams(0.0, 1.0, xi)
        assert np.max(np.abs(gev_cdf(grid, p) - gev_cdf(grid, base))) < 1e-5


def test_support_endpoints():
    assert gev_support(GevParams(0.0, 1.0, 0.0)) == (-math.inf, math.inf)
    lo, hi = gev_support(GevParams(300.0, 2.0, -0.2))
    assert lo == -math.inf and hi == pytest.approx(310.0, abs=1e-12)
    lo, hi = gev_support(GevParams(0.0, 1.0, 0.1))
    assert lo == pytest.approx(-10.0, abs=1e-12) and hi == math.inf


def test_gumbel_matches_gev_at_zero_shape():
    g = GumbelParams(0.0, 2.0)
    p = GevParams(0.0, 2.0, 0.0)
    assert gumbel_cdf(0.0, g) == pytest.approx(math.exp(-1.0), abs=1e-15)
    assert gumbel_cdf(1.0, g) == pytest.approx(math.exp(-math.exp(-0.5)), abs=1e-15)
    assert gumbel_cdf(1e8, g) == pytest.approx(1.0, abs=1e-15)
    for x in (-3.0, 0.0, 1.7, 9.0):
        assert gumbel_cdf(x, g) == pytest.approx(gev_cdf(x, p), abs=1e-15)
        assert gumbel_logpdf(x, g) == pytest.approx(gev_logpdf(x, p), abs=1e-13)


def test_gumbel_quantile_values_and_round_trip():
    g = GumbelParams(0.0, 1.0)
    assert gumbel_quantile(math.exp(-1.0), g) == pytest.approx(0.0, abs=1e-14)
    assert gumbel_quantile(0.5, g) == pytest.approx(GUMBEL_Q_05, abs=1e-10)
    assert gumbel_quantile(0.9, g) == pytest.approx(GUMBEL_Q_09, abs=1e-10)
    g2 = GumbelParams(5.0, 0.7)
    for q in (0.01, 0.4, 0.97):
        assert abs(gumbel_cdf(gumbel_quantile(q, g2), g2) - q) < 1e-12


def test_vectorized_evaluation_matches_scalar():
    p = GevParams(1.0, 2.0, -0.15)
    xs = np.array([-1.0, 0.5, 3.0, 9.0])
    vec = gev_cdf(xs, p)
    for x, v in zip(xs, vec):
        assert v == gev_cdf(float(x), p)
