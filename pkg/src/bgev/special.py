"""Beta-family special functions backing the blend weight.

The weight that interpolates between the extreme-value and Gumbel
components is a rescaled beta CDF, and its derivative (the beta density)
enters the blended log-density. Only what that machinery needs lives
here: log-gamma, the beta density, and the regularized incomplete beta
function evaluated by a continued fraction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

__all__ = ["BetaShape", "ConvergenceError", "log_gamma", "log_beta", "beta_pdf", "beta_cdf"]

# Continued-fraction stopping rule: relative change per step below this.
_CF_TOL = 1e-14
_CF_MAX_ITER = 300


class ConvergenceError(ArithmeticError):
    """An iterative numerical routine failed to reach its tolerance."""


@dataclass(frozen=True)
class BetaShape:
    """Shape parameters of a beta distribution; both must be positive."""

    alpha: float
    beta: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.alpha) and self.alpha > 0.0):
            raise ValueError(f"alpha must be finite and positive, got {self.alpha}")
        if not (math.isfinite(self.beta) and self.beta > 0.0):
            raise ValueError(f"beta must be finite and positive, got {self.beta}")


def log_gamma(x: float) -> float:
    """Natural log of the gamma function, for finite x > 0."""
    if not (math.isfinite(x) and x > 0.0):
        raise ValueError(f"log_gamma requires finite x > 0, got {x}")
    return math.lgamma(x)


def log_beta(alpha: float, beta: float) -> float:
    """ln B(alpha, beta) = ln Gamma(alpha) + ln Gamma(beta) - ln Gamma(alpha+beta)."""
    return log_gamma(alpha) + log_gamma(beta) - log_gamma(alpha + beta)


def _check_unit_interval(u: float) -> None:
    if not (0.0 <= u <= 1.0):
        raise ValueError(f"argument must lie in [0, 1], got {u}")


def beta_pdf(u: float, shape: BetaShape) -> float:
    """Beta density u^(alpha-1) (1-u)^(beta-1) / B(alpha, beta) on [0, 1].

    Endpoint values follow the pointwise limits: 0 when the relevant
    exponent is positive, the finite constant when it is zero, +inf when
    it is negative.
    """
    _check_unit_interval(u)
    a, b = shape.alpha, shape.beta
    if u == 0.0:
        if a > 1.0:
            return 0.0
        if a == 1.0:
            return math.exp(-log_beta(a, b))
        return math.inf
    if u == 1.0:
        if b > 1.0:
            return 0.0
        if b == 1.0:
            return math.exp(-log_beta(a, b))
        return math.inf
    logpdf = (a - 1.0) * math.log(u) + (b - 1.0) * math.log1p(-u) - log_beta(a, b)
    return math.exp(logpdf)


def beta_cdf(u: float, shape: BetaShape) -> float:
    """Regularized incomplete beta function I_u(alpha, beta).

    Evaluated by the continued-fraction expansion, switching to the
    symmetric form 1 - I_{1-u}(beta, alpha) at u = (alpha+1)/(alpha+beta+2)
    so the fraction always runs in its fast-converging regime.
    """
    _check_unit_interval(u)
    a, b = shape.alpha, shape.beta
    if u == 0.0:
        return 0.0
    if u == 1.0:
        return 1.0
    front = math.exp(a * math.log(u) + b * math.log1p(-u) - log_beta(a, b))
    if u < (a + 1.0) / (a + b + 2.0):
        return front * _beta_continued_fraction(a, b, u) / a
    return 1.0 - front * _beta_continued_fraction(b, a, 1.0 - u) / b


def _beta_continued_fraction(a: float, b: float, x: float) -> float:
    """Continued fraction for I_x(a, b), by the modified Lentz method."""
    tiny = 1e-300  # floor keeps the recurrence away from division by zero
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        # Even step.
        coef = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + coef * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + coef / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        # Odd step.
        coef = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + coef * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + coef / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        step = d * c
        h *= step
        if abs(step - 1.0) < _CF_TOL:
            return h
    raise ConvergenceError(
        "incomplete beta continued fraction did not converge in "
        f"{_CF_MAX_ITER} iterations (alpha={a}, beta={b}, x={x})"
    )
