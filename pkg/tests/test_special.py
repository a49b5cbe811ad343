"""Tests for the beta special functions."""
import math

import pytest
from scipy.integrate import quad

from bgev.special import BetaShape, beta_cdf, beta_pdf, log_gamma

# ln Gamma(10.5) by product recurrence down to Gamma(0.5) = sqrt(pi):
# ln Gamma(10.5) = sum_{k=1..10} ln(10.5 - k) + 0.5 ln(pi) = 13.940625219403762
LGAMMA_10_5 = 13.940625219403762

# Quadrature of the beta density (inline, independent of beta_pdf) on [0, u]:
#   quad(u^(a-1)(1-u)^(b-1)/B(a,b), 0, 0.25)
BETA_CDF_025_5_5 = 0.048927307128906215
BETA_CDF_025_2_7 = 0.6329193115234362


def test_log_gamma_trivial_values():
    assert log_gamma(1.0) == 0.0
    assert log_gamma(2.0) == 0.0


def test_log_gamma_against_recurrence_oracle():
    acc = 0.5 * math.log(math.pi)
    v = 10.5
    while v > 1.0:
        v -= 1.0
        acc += math.log(v)
    assert acc == pytest.approx(LGAMMA_10_5, abs=1e-13)
    assert log_gamma(10.5) == pytest.approx(LGAMMA_10_5, abs=1e-12)


@pytest.mark.parametrize("x", [1e-3, 0.5, 1.0, 7.25, 100.0, 1e6])
def test_log_gamma_recurrence_identity(x):
    # ln Gamma(x+1) = ln Gamma(x) + ln x
    assert log_gamma(x + 1.0) == pytest.approx(log_gamma(x) + math.log(x), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("x", [0.0, -1.0, math.inf, math.nan])
def test_log_gamma_domain_errors(x):
    with pytest.raises(ValueError):
        log_gamma(x)


def test_beta_shape_validation():
    BetaShape(5.0, 5.0)
    with pytest.raises(ValueError):
        BetaShape(0.0, 5.0)
    with pytest.raises(ValueError):
        BetaShape(5.0, -1.0)
    with pytest.raises(ValueError):
        BetaShape(math.nan, 5.0)


def test_beta_cdf_boundaries_and_symmetry_point():
    shape = BetaShape(5.0, 5.0)
    assert beta_cdf(0.0, shape) == 0.0
    assert beta_cdf(1.0, shape) == 1.0
    assert beta_cdf(0.5, shape) == pytest.approx(0.5, abs=1e-14)


def test_beta_cdf_against_quadrature_oracle():
    assert beta_cdf(0.25, BetaShape(5.0, 5.0)) == pytest.approx(BETA_CDF_025_5_5, abs=1e-13)
    assert beta_cdf(0.25, BetaShape(2.0, 7.0)) == pytest.approx(BETA_CDF_025_2_7, abs=1e-13)


@pytest.mark.parametrize("alpha,beta", [(5.0, 5.0), (1.0, 1.0), (2.0, 7.0), (0.5, 0.5)])
def test_beta_cdf_fresh_quadrature(alpha, beta):
    # Re-derive the CDF by integrating the density written out inline.
    shape = BetaShape(alpha, beta)
    lbeta = math.lgamma(alpha) + math.lgamma(beta) - math.lgamma(alpha + beta)

    def dens(u):
        return math.exp((alpha - 1) * math.log(u) + (beta - 1) * math.log1p(-u) - lbeta)

    for u in (0.1, 0.3, 0.6, 0.9):
        expected, _ = quad(dens, 0.0, u, epsabs=1e-13, epsrel=1e-13)
        assert beta_cdf(u, shape) == pytest.approx(expected, abs=1e-11)


def test_beta_cdf_monotone():
    shape = BetaShape(2.0, 7.0)
    grid = [i / 200 for i in range(201)]
    values = [beta_cdf(u, shape) for u in grid]
    assert all(v2 >= v1 for v1, v2 in zip(values, values[1:]))


def test_beta_cdf_reflection_identity():
    # I_u(a, b) + I_{1-u}(b, a) = 1
    for alpha, beta in [(5.0, 5.0), (2.0, 7.0), (1.0, 1.0), (0.7, 3.2)]:
        for u in (0.01, 0.2, 0.5, 0.77, 0.99):
            total = beta_cdf(u, BetaShape(alpha, beta)) + beta_cdf(1.0 - u, BetaShape(beta, alpha))
            assert total == pytest.approx(1.0, abs=1e-12)


def test_beta_cdf_domain_errors():
    shape = BetaShape(5.0, 5.0)
    with pytest.raises(ValueError):
        beta_cdf(-0.1, shape)
    with pytest.raises(ValueError):
        beta_cdf(1.1, shape)
    with pytest.raises(ValueError):
        beta_cdf(math.nan, shape)


def test_beta_pdf_trivial_values():
    assert beta_pdf(0.0, BetaShape(5.0, 5.0)) == 0.0
    assert beta_pdf(0.5, BetaShape(1.0, 1.0)) == 1.0
    # 0.5^8 / B(5,5) with B(5,5) = 576/362880
    assert beta_pdf(0.5, BetaShape(5.0, 5.0)) == pytest.approx(2.4609375, abs=1e-13)


def test_beta_pdf_integrates_to_one():
    for alpha, beta in [(5.0, 5.0), (2.0, 7.0), (1.0, 1.0)]:
        shape = BetaShape(alpha, beta)
        total, _ = quad(lambda u: beta_pdf(u, shape), 0.0, 1.0, epsabs=1e-12, epsrel=1e-12)
        assert total == pytest.approx(1.0, abs=1e-9)


@pytest.mark.parametrize("alpha,beta", [(5.0, 5.0), (1.0, 1.0), (2.0, 7.0)])
def test_beta_pdf_is_derivative_of_cdf(alpha, beta):
    shape = BetaShape(alpha, beta)
    h = 1e-6
    for i in range(1, 101):
        u = i / 101
        fd = (beta_cdf(min(u + h, 1.0), shape) - beta_cdf(max(u - h, 0.0), shape)) / (2 * h)
        assert abs(fd - beta_pdf(u, shape)) < 1e-6


def test_beta_pdf_domain_errors():
    with pytest.raises(ValueError):
        beta_pdf(-0.5, BetaShape(2.0, 2.0))
    with pytest.raises(ValueError):
        beta_pdf(1.5, BetaShape(2.0, 2.0))
