"""Maximum-likelihood fitting with a covariate-driven location parameter.

The location of each observation's distribution is a linear function of
a covariate (for annual temperature maxima: mean global temperature),

    location(t) = mu0 + mu_t * (T(t) - T_bar),

with T_bar the covariate mean over the training window so that mu0
stays interpretable. Scale and shape are constant within a fit. The
negative log likelihood is minimized by Nelder-Mead over
(mu0, mu_t, log sigma, xi); optimizing log sigma enforces positivity
without constraints, and xi is unconstrained because the likelihood is
continuous across zero (both one-sided blends limit to Gumbel).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize

from .blend import DEFAULT_NEG_SPEC, DEFAULT_POS_SPEC, BlendSpec, build_bgev, bgev_logpdf
from .distributions import GevParams, gev_logpdf

__all__ = [
    "ModelKind",
    "CovariateLocationModel",
    "TrainingSet",
    "FitResult",
    "initialize_theta",
    "train_nll",
    "fit_mle",
]

# Nelder-Mead stopping rule: simplex function-value spread and vertex
# spread must both fall below these within the evaluation budget.
DEFAULT_FATOL = 1e-8
DEFAULT_XATOL = 1e-6
DEFAULT_MAXFEV = 5000

Theta = tuple[float, float, float, float]  # (mu0, mu_t, log_sigma, xi)


class ModelKind(enum.Enum):
    GEV = "gev"
    BGEV = "bgev"


@dataclass(frozen=True)
class CovariateLocationModel:
    """Linear map from a covariate value to the location parameter."""

    mu0: float
    mu_t: float
    T_bar: float

    def location(self, covariate):
        return self.mu0 + self.mu_t * (np.asarray(covariate, dtype=float) - self.T_bar)


@dataclass(frozen=True)
class TrainingSet:
    """Aligned block maxima, their years, and the covariate series.

    At least four observations (one per free parameter) with strictly
    increasing years and finite values.
    """

    years: np.ndarray
    maxima: np.ndarray
    covariate: np.ndarray
    location_id: str = ""

    def __post_init__(self) -> None:
        years = np.asarray(self.years, dtype=int)
        maxima = np.asarray(self.maxima, dtype=float)
        covariate = np.asarray(self.covariate, dtype=float)
        object.__setattr__(self, "years", years)
        object.__setattr__(self, "maxima", maxima)
        object.__setattr__(self, "covariate", covariate)
        n = len(years)
        if not (len(maxima) == n and len(covariate) == n):
            raise ValueError("years, maxima, and covariate must have equal length")
        if n < 4:
            raise ValueError(f"need at least 4 observations, got {n}")
        if not np.all(np.diff(years) > 0):
            raise ValueError(f"years must be strictly increasing (location {self.location_id!r})")
        if not np.all(np.isfinite(maxima)):
            raise ValueError(f"maxima must be finite (location {self.location_id!r})")
        if not np.all(np.isfinite(covariate)):
            raise ValueError(f"covariate must be finite (location {self.location_id!r})")

    def __len__(self) -> int:
        return len(self.years)

    def head(self, n: int) -> "TrainingSet":
        """The first ``n`` observations as a new training set."""
        return TrainingSet(self.years[:n], self.maxima[:n], self.covariate[:n], self.location_id)


@dataclass(frozen=True)
class FitResult:
    """Outcome of one maximum-likelihood fit."""

    params: tuple[float, float, float, float]  # (mu0, mu_t, sigma, xi)
    nll: float
    converged: bool
    n_evals: int
    model: ModelKind

    @property
    def mu0(self) -> float:
        return self.params[0]

    @property
    def mu_t(self) -> float:
        return self.params[1]

    @property
    def sigma(self) -> float:
        return self.params[2]

    @property
    def xi(self) -> float:
        return self.params[3]


def initialize_theta(data: TrainingSet) -> Theta:
    """Gumbel method-of-moments start with an OLS slope for the trend.

    sigma0 = sd * sqrt(6)/pi, mu0 = mean - gamma * sigma0 (gamma the
    Euler-Mascheroni constant), mu_t the least-squares slope of the
    maxima against the centered covariate, xi0 = 0.
    """
    y = data.maxima
    sd = float(np.std(y, ddof=1))
    if not sd > 0.0:
        raise ValueError("maxima have zero variance; cannot initialize a fit")
    sigma0 = sd * math.sqrt(6.0) / math.pi
    mu0 = float(np.mean(y)) - np.euler_gamma * sigma0
    tc = data.covariate - np.mean(data.covariate)
    denom = float(np.dot(tc, tc))
    mu_t = float(np.dot(tc, y) / denom) if denom > 0.0 else 0.0
    return (mu0, mu_t, math.log(sigma0), 0.0)


def train_nll(
    theta,
    data: TrainingSet,
    model: ModelKind,
    spec_pos: BlendSpec,
    spec_neg: BlendSpec,
) -> float:
    """Negative log likelihood of the training set at ``theta``.

    theta is (mu0, mu_t, log_sigma, xi). Returns +inf when any
    observation has zero density (support violation) or the parameters
    are not evaluable; never raises for that, so the optimizer can walk
    through bad regions.
    """
    mu0, mu_t, log_sigma, xi = (float(v) for v in theta)
    if not all(map(math.isfinite, (mu0, mu_t, log_sigma, xi))):
        return math.inf
    sigma = math.exp(log_sigma)
    if not (math.isfinite(sigma) and sigma > 0.0):
        return math.inf
    loc = CovariateLocationModel(mu0, mu_t, float(np.mean(data.covariate)))
    z = data.maxima - loc.location(data.covariate)
    if not np.all(np.isfinite(z)):
        return math.inf
    # Only the location varies per observation, so evaluate the
    # residuals against the zero-location member of the family.
    base = GevParams(0.0, sigma, xi)
    if model is ModelKind.GEV:
        logpdf = gev_logpdf(z, base)
    else:
        dist = build_bgev(base, spec_pos, spec_neg)
        logpdf = bgev_logpdf(z, dist)
    if np.any(np.isneginf(logpdf)):
        return math.inf
    return float(-np.sum(logpdf))


def _initial_simplex(theta0, data: TrainingSet, scale: float = 1.0) -> np.ndarray:
    """Simplex steps scaled to rough parameter-uncertainty magnitudes."""
    sigma0 = math.exp(theta0[2])
    rn = math.sqrt(len(data))
    cov_sd = float(np.std(data.covariate))
    mu_t_step = 2.0 * sigma0 / (cov_sd * rn) if cov_sd > 0.0 else 0.1
    steps = scale * np.array([2.2 * sigma0 / rn, mu_t_step, 1.6 / rn, 1.4 / rn])
    simplex = np.tile(np.asarray(theta0, dtype=float), (5, 1))
    simplex[1:] += np.diag(steps)
    return simplex


def fit_mle(
    data: TrainingSet,
    model: ModelKind = ModelKind.BGEV,
    spec_pos: BlendSpec | None = None,
    spec_neg: BlendSpec | None = None,
    *,
    fatol: float = DEFAULT_FATOL,
    xatol: float = DEFAULT_XATOL,
    maxfev: int = DEFAULT_MAXFEV,
) -> FitResult:
    """Fit (mu0, mu_t, sigma, xi) by Nelder-Mead maximum likelihood.

    Non-convergence within the evaluation budget is reported through
    ``converged=False`` after one restart from the best vertex, not
    raised. Degenerate data (zero-variance maxima) raises ValueError.
    """
    spec_pos = DEFAULT_POS_SPEC if spec_pos is None else spec_pos
    spec_neg = DEFAULT_NEG_SPEC if spec_neg is None else spec_neg
    if spec_pos.a >= spec_pos.b:
        raise ValueError("spec_pos must have a < b")
    if spec_neg.a <= spec_neg.b:
        raise ValueError("spec_neg must have a > b")
    if len(data) < 4:
        raise ValueError(f"need at least 4 observations to fit 4 parameters, got {len(data)}")
    theta0 = initialize_theta(data)

    def objective(theta):
        return train_nll(theta, data, model, spec_pos, spec_neg)

    options = {"fatol": fatol, "xatol": xatol, "maxfev": maxfev, "maxiter": maxfev}
    res = minimize(
        objective,
        theta0,
        method="Nelder-Mead",
        options={**options, "initial_simplex": _initial_simplex(theta0, data)},
    )
    n_evals = res.nfev
    if not res.success:
        # One restart from the best vertex with a fresh, tighter simplex.
        res = minimize(
            objective,
            res.x,
            method="Nelder-Mead",
            options={**options, "initial_simplex": _initial_simplex(res.x, data, scale=0.5)},
        )
        n_evals += res.nfev
    mu0, mu_t, log_sigma, xi = res.x
    return FitResult(
        params=(float(mu0), float(mu_t), float(math.exp(log_sigma)), float(xi)),
        nll=float(res.fun),
        converged=bool(res.success),
        n_evals=int(n_evals),
        model=model,
    )
