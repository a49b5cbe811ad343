"""Blended generalized extreme value (bGEV) distribution toolkit.

Builds the geometric blend of a GEV with a quantile-matched Gumbel for
either sign of the shape parameter, fits it by maximum likelihood with
a covariate-driven location trend, and evaluates rolling-origin
probabilistic forecasts.
"""

from .blend import (
    DEFAULT_NEG_SPEC,
    DEFAULT_POS_SPEC,
    BgevDistribution,
    BlendSpec,
    Tail,
    bgev_cdf,
    bgev_logpdf,
    bgev_quantile,
    bgev_sample,
    blend_weight,
    build_bgev,
)
from .distributions import (
    XI_EPS,
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
from .fitting import (
    CovariateLocationModel,
    FitResult,
    ModelKind,
    TrainingSet,
    fit_mle,
    initialize_theta,
    train_nll,
)
from .forecast import (
    ForecastRecord,
    ModelComparison,
    ModelSummary,
    SweepResult,
    aggregate_records,
    compare_models,
    forecast_distribution,
    rolling_forecast,
    sweep_blend_quantiles,
)
from .dataio import (
    SeriesFormatError,
    emit_forecast_plot_data,
    generate_synthetic,
    read_plot_data,
    read_series,
    write_records,
    write_series,
    write_sweep_results,
)
from .special import BetaShape, ConvergenceError, beta_cdf, beta_pdf, log_gamma

__version__ = "0.1.0"

__all__ = [
    "XI_EPS",
    "BetaShape",
    "BgevDistribution",
    "BlendSpec",
    "ConvergenceError",
    "CovariateLocationModel",
    "DEFAULT_NEG_SPEC",
    "DEFAULT_POS_SPEC",
    "FitResult",
    "ForecastRecord",
    "GevParams",
    "GumbelParams",
    "ModelComparison",
    "ModelKind",
    "ModelSummary",
    "SeriesFormatError",
    "SweepResult",
    "Tail",
    "TrainingSet",
    "aggregate_records",
    "beta_cdf",
    "beta_pdf",
    "bgev_cdf",
    "bgev_logpdf",
    "bgev_quantile",
    "bgev_sample",
    "blend_weight",
    "build_bgev",
    "compare_models",
    "emit_forecast_plot_data",
    "fit_mle",
    "forecast_distribution",
    "generate_synthetic",
    "gev_cdf",
    "gev_logpdf",
    "gev_quantile",
    "gev_support",
    "gumbel_cdf",
    "gumbel_logpdf",
    "gumbel_quantile",
    "initialize_theta",
    "log_gamma",
    "read_plot_data",
    "read_series",
    "rolling_forecast",
    "sweep_blend_quantiles",
    "train_nll",
    "write_records",
    "write_series",
    "write_sweep_results",
]
