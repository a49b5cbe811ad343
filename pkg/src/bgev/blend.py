"""Blended GEV distribution with unbounded support for either tail sign.

A GEV with nonzero shape has a hard bound: below the location for
positive shape, above it for negative shape. The blended distribution
geometrically mixes the GEV CDF with a quantile-matched Gumbel CDF,

    F(x) = F_gev(x)^p(x) * F_gumbel(x)^(1 - p(x)),

where the weight p follows a rescaled beta CDF between two quantile
levels a and b of the GEV. For positive shape the blend sits in the
lower tail (levels a < b near 0); for negative shape it sits in the
upper tail (levels a > b near 1), which removes the hard upper bound
while leaving the distribution equal to the GEV over the rest of its
mass. The matched Gumbel agrees with the GEV CDF exactly at both
levels, so the blended CDF is continuous and equals the pure components
outside the blend band.
"""
from __future__ import annotations

import enum
import math
import warnings
from dataclasses import dataclass

import numpy as np

from .distributions import (
    XI_EPS,
    GevParams,
    GumbelParams,
    gev_cdf,
    gev_logpdf,
    gev_quantile,
    gumbel_cdf,
    gumbel_logpdf,
    gumbel_quantile,
)
from .special import BetaShape, ConvergenceError, beta_cdf, beta_pdf

__all__ = [
    "Tail",
    "BlendSpec",
    "BgevDistribution",
    "DEFAULT_POS_SPEC",
    "DEFAULT_NEG_SPEC",
    "build_bgev",
    "blend_weight",
    "bgev_cdf",
    "bgev_logpdf",
    "bgev_quantile",
    "bgev_sample",
]

# Probability tolerance for the numeric quantile inversion on the blend band.
_INVERT_TOL = 1e-12
_INVERT_MAX_BISECT = 200
_INVERT_NEWTON_STEPS = 5


class Tail(enum.Enum):
    """Which tail carries the Gumbel blend."""

    LOWER_BLEND = "lower"  # positive shape: Gumbel left tail, GEV body and right tail
    UPPER_BLEND = "upper"  # negative shape: GEV body and left tail, Gumbel right tail
    PURE_GUMBEL = "gumbel"  # |shape| below XI_EPS: no blend at all


@dataclass(frozen=True)
class BlendSpec:
    """Blending quantile levels and the beta shape of the transition weight.

    Positive-shape usage expects 0 < a < b < 1 (defaults 0.05, 0.2);
    negative-shape usage expects 1 > a > b > 0 (levels near 1). The
    ordering is checked against the sign of the shape at construction
    time in :func:`build_bgev`.
    """

    a: float
    b: float
    shape: BetaShape = BetaShape(5.0, 5.0)

    def __post_init__(self) -> None:
        for name, value in (("a", self.a), ("b", self.b)):
            if not (math.isfinite(value) and 0.0 < value < 1.0):
                raise ValueError(f"blend level {name} must lie in (0, 1), got {value}")
        if self.a == self.b:
            raise ValueError("blend levels a and b must differ")


DEFAULT_POS_SPEC = BlendSpec(a=0.05, b=0.2)
DEFAULT_NEG_SPEC = BlendSpec(a=0.85, b=0.84)


@dataclass(frozen=True)
class BgevDistribution:
    """A fully resolved blend: GEV, matched Gumbel, and the band endpoints.

    ``q_a`` and ``q_b`` are the GEV quantiles at the blend levels, in
    data units. For ``PURE_GUMBEL`` the blend fields are degenerate
    (spec is None, endpoints NaN) and the distribution is exactly
    Gumbel(mu, sigma).
    """

    gev: GevParams
    gumbel: GumbelParams
    spec: BlendSpec | None
    q_a: float
    q_b: float
    tail: Tail


def build_bgev(
    gev: GevParams,
    spec_pos: BlendSpec = DEFAULT_POS_SPEC,
    spec_neg: BlendSpec = DEFAULT_NEG_SPEC,
) -> BgevDistribution:
    """Resolve the blend for ``gev``, selecting the spec by sign of the shape.

    The matched Gumbel parameters solve F_gumbel(q_a) = a and
    F_gumbel(q_b) = b, which in closed form gives

        sigma_tilde = (q_a - q_b) / (ln(-ln b) - ln(-ln a))
        mu_tilde    = q_a + sigma_tilde * ln(-ln a).

    Raises ValueError when the selected spec's level ordering does not
    match the sign of the shape.
    """
    if abs(gev.xi) < XI_EPS:
        return BgevDistribution(
            gev=gev,
            gumbel=GumbelParams(gev.mu, gev.sigma),
            spec=None,
            q_a=math.nan,
            q_b=math.nan,
            tail=Tail.PURE_GUMBEL,
        )
    if gev.xi > 0:
        spec, tail = spec_pos, Tail.LOWER_BLEND
        if not spec.a < spec.b:
            raise ValueError(
                f"positive shape requires blend levels a < b, got a={spec.a}, b={spec.b}"
            )
    else:
        spec, tail = spec_neg, Tail.UPPER_BLEND
        if not spec.a > spec.b:
            raise ValueError(
                f"negative shape requires blend levels a > b, got a={spec.a}, b={spec.b}"
            )
    q_a = gev_quantile(spec.a, gev)
    q_b = gev_quantile(spec.b, gev)
    lnln_a = math.log(-math.log(spec.a))
    lnln_b = math.log(-math.log(spec.b))
    sigma_tilde = (q_a - q_b) / (lnln_b - lnln_a)
    mu_tilde = q_a + sigma_tilde * lnln_a
    if not (math.isfinite(sigma_tilde) and sigma_tilde > 0.0):
        raise ValueError(
            f"quantile matching produced a nonpositive Gumbel scale ({sigma_tilde})"
        )
    return BgevDistribution(
        gev=gev,
        gumbel=GumbelParams(mu_tilde, sigma_tilde),
        spec=spec,
        q_a=q_a,
        q_b=q_b,
        tail=tail,
    )


def _require_blend(d: BgevDistribution) -> None:
    if d.tail is Tail.PURE_GUMBEL:
        raise ValueError("operation requires a blended distribution, not the pure-Gumbel limit")


def blend_weight(x, d: BgevDistribution):
    """Exponent p(x) on the GEV factor: 1 on the GEV side, 0 on the Gumbel side.

    Between the band endpoints it is the beta CDF of the normalized
    coordinate (x - q_a) / (q_b - q_a), which runs 0 -> 1 from the
    Gumbel end to the GEV end for both tail orientations.
    """
    _require_blend(d)
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    u = (np.atleast_1d(arr) - d.q_a) / (d.q_b - d.q_a)
    out = np.empty_like(u)
    out[u <= 0.0] = 0.0
    out[u >= 1.0] = 1.0
    mid = (u > 0.0) & (u < 1.0)
    if np.any(mid):
        shape = d.spec.shape
        out[mid] = [beta_cdf(ui, shape) for ui in u[mid]]
    return float(out[0]) if scalar else out


def _region_masks(arr: np.ndarray, d: BgevDistribution) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Split points into pure-GEV, pure-Gumbel, and blend-band masks."""
    if d.tail is Tail.UPPER_BLEND:
        gev_mask = arr <= d.q_b
        gum_mask = arr >= d.q_a
    else:
        gev_mask = arr >= d.q_b
        gum_mask = arr <= d.q_a
    return gev_mask, gum_mask, ~(gev_mask | gum_mask)


def bgev_cdf(x, d: BgevDistribution):
    """Blended CDF F_gev(x)^p * F_gumbel(x)^(1-p).

    Equals the GEV CDF exactly where p = 1 and the matched Gumbel CDF
    exactly where p = 0; on the band the factors are combined in log
    space. A zero-weight factor is skipped outright, never raised to
    the power 0.
    """
    if d.tail is Tail.PURE_GUMBEL:
        return gumbel_cdf(x, d.gumbel)
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("x must be finite")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    gev_mask, gum_mask, band = _region_masks(arr, d)
    out = np.empty_like(arr)
    if np.any(gev_mask):
        out[gev_mask] = gev_cdf(arr[gev_mask], d.gev)
    if np.any(gum_mask):
        out[gum_mask] = gumbel_cdf(arr[gum_mask], d.gumbel)
    if np.any(band):
        xb = arr[band]
        p = blend_weight(xb, d)
        log_g = np.log(gev_cdf(xb, d.gev))
        log_h = np.log(gumbel_cdf(xb, d.gumbel))
        out[band] = np.exp(p * log_g + (1.0 - p) * log_h)
    return float(out[0]) if scalar else out


def bgev_logpdf(x, d: BgevDistribution):
    """Log-density of the blend; the analytic derivative of :func:`bgev_cdf`.

    On the band, with p' the derivative of the blend weight,

        f = F * [p'(x) (ln F_gev - ln F_gumbel) + p f_gev/F_gev
                 + (1-p) f_gumbel/F_gumbel],

    and outside it the pure component log-densities apply. If the
    bracketed term is nonpositive (no nonnegativity theorem exists for
    every level/shape combination) the point gets probability zero and
    a RuntimeWarning is emitted.
    """
    if d.tail is Tail.PURE_GUMBEL:
        return gumbel_logpdf(x, d.gumbel)
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)):
        raise ValueError("x must be finite")
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    gev_mask, gum_mask, band = _region_masks(arr, d)
    out = np.empty_like(arr)
    if np.any(gev_mask):
        out[gev_mask] = gev_logpdf(arr[gev_mask], d.gev)
    if np.any(gum_mask):
        out[gum_mask] = gumbel_logpdf(arr[gum_mask], d.gumbel)
    if np.any(band):
        shape = d.spec.shape
        du_dx = 1.0 / (d.q_b - d.q_a)
        for idx in np.flatnonzero(band):
            pt = arr[idx]
            u = (pt - d.q_a) / (d.q_b - d.q_a)
            p = beta_cdf(u, shape)
            dp = beta_pdf(u, shape) * du_dx
            log_g = math.log(gev_cdf(pt, d.gev))
            log_h = math.log(gumbel_cdf(pt, d.gumbel))
            dens_g = math.exp(gev_logpdf(pt, d.gev) - log_g)
            dens_h = math.exp(gumbel_logpdf(pt, d.gumbel) - log_h)
            bracket = dp * (log_g - log_h) + p * dens_g + (1.0 - p) * dens_h
            if bracket <= 0.0:
                warnings.warn(
                    "blended density nonpositive inside the blend band; "
                    "point treated as zero probability",
                    RuntimeWarning,
                    stacklevel=2,
                )
                out[idx] = -np.inf
            else:
                out[idx] = p * log_g + (1.0 - p) * log_h + math.log(bracket)
    return float(out[0]) if scalar else out


def bgev_quantile(q, d: BgevDistribution):
    """Inverse of :func:`bgev_cdf`.

    Outside the blend band the pure-component closed forms apply; on the
    band the CDF is inverted by bracketed bisection refined with a few
    Newton steps, to within 1e-10 in probability.
    """
    if d.tail is Tail.PURE_GUMBEL:
        return gumbel_quantile(q, d.gumbel)
    arr = np.asarray(q, dtype=float)
    scalar = arr.ndim == 0
    arr = np.atleast_1d(arr)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise ValueError("quantile levels must lie strictly inside (0, 1)")
    lo_level = min(d.spec.a, d.spec.b)
    hi_level = max(d.spec.a, d.spec.b)
    out = np.empty_like(arr)
    if d.tail is Tail.UPPER_BLEND:
        gev_side = arr <= lo_level  # below the band: GEV closed form
        gum_side = arr >= hi_level
    else:
        gum_side = arr <= lo_level  # below the band: Gumbel closed form
        gev_side = arr >= hi_level
    if np.any(gev_side):
        out[gev_side] = gev_quantile(arr[gev_side], d.gev)
    if np.any(gum_side):
        out[gum_side] = gumbel_quantile(arr[gum_side], d.gumbel)
    band = ~(gev_side | gum_side)
    if np.any(band):
        x_lo = min(d.q_a, d.q_b)
        x_hi = max(d.q_a, d.q_b)
        for idx in np.flatnonzero(band):
            out[idx] = _invert_on_band(arr[idx], d, x_lo, x_hi)
    return float(out[0]) if scalar else out


def _invert_on_band(q: float, d: BgevDistribution, lo: float, hi: float) -> float:
    """Solve bgev_cdf(x) = q for x in [lo, hi] (band endpoints bracket q)."""
    x = 0.5 * (lo + hi)
    for _ in range(_INVERT_MAX_BISECT):
        x = 0.5 * (lo + hi)
        f = bgev_cdf(x, d)
        if abs(f - q) < _INVERT_TOL:
            break
        if f < q:
            lo = x
        else:
            hi = x
        if hi - lo <= abs(x) * 1e-16:
            break
    for _ in range(_INVERT_NEWTON_STEPS):
        f = bgev_cdf(x, d)
        if abs(f - q) < _INVERT_TOL:
            break
        dens = math.exp(bgev_logpdf(x, d))
        if dens <= 0.0:
            break
        step = (f - q) / dens
        candidate = x - step
        if not (lo <= candidate <= hi):
            break
        x = candidate
    if abs(bgev_cdf(x, d) - q) > 1e-10:
        raise ConvergenceError(f"quantile inversion stalled at level {q}")
    return x


def bgev_sample(n: int, d: BgevDistribution, seed: int) -> np.ndarray:
    """Draw ``n`` values by inversion sampling; deterministic per seed."""
    if n < 0:
        raise ValueError(f"sample size must be nonnegative, got {n}")
    rng = np.random.default_rng(seed)
    u = rng.random(n)
    # rng.random() can return exactly 0.0, which the quantile rejects.
    u[u == 0.0] = np.nextafter(0.0, 1.0)
    if n == 0:
        return np.empty(0)
    return np.asarray(bgev_quantile(u, d))
