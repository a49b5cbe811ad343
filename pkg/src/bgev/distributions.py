"""Gumbel and generalized extreme value distributions.

Scalar parameters, vectorized evaluation: every function accepts a float
or an array of evaluation points and returns the matching shape. The
shape parameter follows the convention where xi < 0 gives the
short-tailed (bounded above) case and xi > 0 the heavy-tailed case.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "XI_EPS",
    "GevParams",
    "GumbelParams",
    "gev_cdf",
    "gev_logpdf",
    "gev_quantile",
    "gev_support",
    "gumbel_cdf",
    "gumbel_logpdf",
    "gumbel_quantile",
]

# |xi| below this evaluates on the Gumbel closed forms; avoids the
# catastrophic cancellation in (1 + xi*s)^(-1/xi) as xi -> 0.
XI_EPS = 1e-8


@dataclass(frozen=True)
class GevParams:
    """Location, scale, and shape of a GEV distribution (Gumbel when xi ~ 0)."""

    mu: float
    sigma: float
    xi: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma) and self.sigma > 0.0):
            raise ValueError(f"sigma must be finite and positive, got {self.sigma}")
        if not math.isfinite(self.mu):
            raise ValueError(f"mu must be finite, got {self.mu}")
        if not math.isfinite(self.xi):
            raise ValueError(f"xi must be finite, got {self.xi}")

    @property
    def is_gumbel(self) -> bool:
        return abs(self.xi) < XI_EPS


@dataclass(frozen=True)
class GumbelParams:
    """Location and scale of a Gumbel (max) distribution."""

    mu_tilde: float
    sigma_tilde: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.sigma_tilde) and self.sigma_tilde > 0.0):
            raise ValueError(f"sigma_tilde must be finite and positive, got {self.sigma_tilde}")
        if not math.isfinite(self.mu_tilde):
            raise ValueError(f"mu_tilde must be finite, got {self.mu_tilde}")


def _as_points(x, name: str = "x") -> tuple[np.ndarray, bool]:
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} must be finite")
    return np.atleast_1d(arr), arr.ndim == 0


def _ret(values: np.ndarray, scalar: bool):
    return float(values[0]) if scalar else values


def gev_cdf(x, p: GevParams):
    """GEV cumulative distribution function.

    On the standardized value s = (x - mu)/sigma this is exp(-e^-s) when
    xi ~ 0 and exp(-(1 + xi*s)^(-1/xi)) where 1 + xi*s > 0; outside that
    region the CDF is the constant 0 (xi > 0) or 1 (xi < 0).
    """
    arr, scalar = _as_points(x)
    s = (arr - p.mu) / p.sigma
    if p.is_gumbel:
        with np.errstate(over="ignore"):
            out = np.exp(-np.exp(-s))
        return _ret(out, scalar)
    t = 1.0 + p.xi * s
    out = np.full(np.shape(s), 0.0 if p.xi > 0 else 1.0)
    inside = t > 0.0
    if np.any(inside):
        # exp(-log1p(xi*s)/xi) keeps precision near the support boundary.
        with np.errstate(over="ignore"):
            core = np.exp(-np.log1p(p.xi * s[inside]) / p.xi)
            out[inside] = np.exp(-core)
    return _ret(out, scalar)


def gev_logpdf(x, p: GevParams):
    """Log-density of the GEV; -inf outside the support."""
    arr, scalar = _as_points(x)
    s = (arr - p.mu) / p.sigma
    log_sigma = math.log(p.sigma)
    if p.is_gumbel:
        with np.errstate(over="ignore"):
            out = -log_sigma - s - np.exp(-s)
        return _ret(out, scalar)
    t = 1.0 + p.xi * s
    out = np.full(np.shape(s), -np.inf)
    inside = t > 0.0
    if np.any(inside):
        lt = np.log1p(p.xi * s[inside])
        with np.errstate(over="ignore"):
            out[inside] = -log_sigma - (1.0 + 1.0 / p.xi) * lt - np.exp(-lt / p.xi)
    return _ret(out, scalar)


def gev_quantile(q, p: GevParams):
    """Inverse of gev_cdf for probabilities in (0, 1)."""
    arr = np.asarray(q, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise ValueError("quantile levels must lie strictly inside (0, 1)")
    lnln = np.log(-np.log(arr))
    if p.is_gumbel:
        out = p.mu - p.sigma * lnln
    else:
        # ((-ln q)^-xi - 1)/xi via expm1 for accuracy at small xi.
        out = p.mu + p.sigma * np.expm1(-p.xi * lnln) / p.xi
    return _ret(out, scalar)


def gev_support(p: GevParams) -> tuple[float, float]:
    """(lower, upper) support endpoints; infinite where the tail is unbounded."""
    if p.is_gumbel:
        return (-math.inf, math.inf)
    bound = p.mu - p.sigma / p.xi
    if p.xi > 0:
        return (bound, math.inf)
    return (-math.inf, bound)


def gumbel_cdf(x, g: GumbelParams):
    """Gumbel CDF exp(-e^-(x - mu)/sigma)."""
    arr, scalar = _as_points(x)
    s = (arr - g.mu_tilde) / g.sigma_tilde
    with np.errstate(over="ignore"):
        out = np.exp(-np.exp(-s))
    return _ret(out, scalar)


def gumbel_logpdf(x, g: GumbelParams):
    """Gumbel log-density -ln(sigma) - s - e^-s."""
    arr, scalar = _as_points(x)
    s = (arr - g.mu_tilde) / g.sigma_tilde
    with np.errstate(over="ignore"):
        out = -math.log(g.sigma_tilde) - s - np.exp(-s)
    return _ret(out, scalar)


def gumbel_quantile(q, g: GumbelParams):
    """Inverse of gumbel_cdf: mu - sigma * ln(-ln q)."""
    arr = np.asarray(q, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise ValueError("quantile levels must lie strictly inside (0, 1)")
    out = g.mu_tilde - g.sigma_tilde * np.log(-np.log(arr))
    return _ret(out, scalar)
