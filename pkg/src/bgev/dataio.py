"""CSV ingestion, synthetic data generation, and plot-data emission.

The series file format is plain UTF-8 CSV with the header
``location_id,year,annual_max,covariate`` and one row per (location,
year). Machine-facing numeric output is written with 17 significant
digits so values round-trip exactly.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .blend import BgevDistribution, bgev_logpdf
from .distributions import GevParams, gev_logpdf, gev_quantile
from .fitting import ModelKind, TrainingSet
from .forecast import ForecastRecord, SweepResult

__all__ = [
    "SeriesFormatError",
    "SERIES_HEADER",
    "read_series",
    "write_series",
    "generate_synthetic",
    "emit_forecast_plot_data",
    "read_plot_data",
    "write_records",
    "write_sweep_results",
]

SERIES_HEADER = ["location_id", "year", "annual_max", "covariate"]
RECORDS_HEADER = [
    "location_id",
    "train_len",
    "target_year",
    "observed",
    "model",
    "a",
    "b",
    "nll",
    "fitted_xi",
]
SWEEP_HEADER = ["a", "b", "total_nll", "n_forecasts", "n_infinite"]


class SeriesFormatError(ValueError):
    """A series file failed validation; the message names the offending line."""


def _fmt(x: float) -> str:
    """Full round-trip precision for machine-facing tables."""
    return format(float(x), ".17g")


def read_series(path) -> list[TrainingSet]:
    """Parse and validate a series CSV into one TrainingSet per location.

    Locations keep their order of first appearance; within a location
    the years must be strictly increasing and every field present and
    finite. Errors name the 1-based line number.
    """
    path = Path(path)
    groups: dict[str, dict[str, list]] = {}
    with path.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = next(reader)
        except StopIteration:
            raise SeriesFormatError(f"{path}: file is empty") from None
        if [h.strip() for h in header] != SERIES_HEADER:
            raise SeriesFormatError(
                f"{path}: line 1: expected header {','.join(SERIES_HEADER)!r}, "
                f"got {','.join(header)!r}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row or (len(row) == 1 and not row[0].strip()):
                continue
            if len(row) != 4:
                raise SeriesFormatError(f"{path}: line {lineno}: expected 4 fields, got {len(row)}")
            loc = row[0].strip()
            if not loc:
                raise SeriesFormatError(f"{path}: line {lineno}: empty location_id")
            try:
                year = int(row[1])
                annual_max = float(row[2])
                covariate = float(row[3])
            except ValueError:
                raise SeriesFormatError(f"{path}: line {lineno}: malformed numeric field") from None
            if not (math.isfinite(annual_max) and math.isfinite(covariate)):
                raise SeriesFormatError(f"{path}: line {lineno}: non-finite value")
            group = groups.setdefault(loc, {"years": [], "maxima": [], "covariate": []})
            if group["years"]:
                if year == group["years"][-1]:
                    raise SeriesFormatError(
                        f"{path}: line {lineno}: duplicate year {year} for location {loc!r}"
                    )
                if year < group["years"][-1]:
                    raise SeriesFormatError(
                        f"{path}: line {lineno}: years not increasing for location {loc!r}"
                    )
            group["years"].append(year)
            group["maxima"].append(annual_max)
            group["covariate"].append(covariate)
    if not groups:
        raise SeriesFormatError(f"{path}: no data rows")
    out = []
    for loc, group in groups.items():
        try:
            out.append(
                TrainingSet(group["years"], group["maxima"], group["covariate"], location_id=loc)
            )
        except ValueError as exc:
            raise SeriesFormatError(f"{path}: location {loc!r}: {exc}") from None
    return out


def write_series(path, dataset: list[TrainingSet]) -> None:
    """Inverse of read_series; values written at round-trip precision."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SERIES_HEADER)
        for series in dataset:
            for year, mx, cov in zip(series.years, series.maxima, series.covariate):
                writer.writerow([series.location_id, int(year), _fmt(mx), _fmt(cov)])


def generate_synthetic(
    n_locations: int,
    n_years: int,
    trend: float,
    xi: float,
    seed: int,
    *,
    start_year: int = 1940,
    mu0: float = 300.0,
    sigma: float = 1.0,
    record_jump: float = 0.0,
) -> list[TrainingSet]:
    """Synthetic block-maxima dataset with a shared warming covariate.

    The covariate is a smooth accelerating ramp plus noise, shared by
    all locations; each location gets its own baseline around ``mu0``
    and draws its maxima from the GEV with location
    mu0_loc + trend * (T - mean T). ``record_jump`` is added to the
    final year's maximum of every location, for building series whose
    last observation breaks the historical record. Deterministic per
    seed.
    """
    if n_years < 31:
        raise ValueError(f"n_years must be at least 31, got {n_years}")
    if n_locations < 1:
        raise ValueError(f"n_locations must be positive, got {n_locations}")
    rng = np.random.default_rng(seed)
    years = np.arange(start_year, start_year + n_years)
    frac = np.linspace(0.0, 1.0, n_years)
    covariate = 1.3 * frac**2 + 0.15 * frac + rng.normal(0.0, 0.06, n_years)
    centered = covariate - covariate.mean()
    base = GevParams(0.0, sigma, xi)
    dataset = []
    for i in range(n_locations):
        mu0_loc = mu0 + rng.normal(0.0, 4.0)
        u = rng.random(n_years)
        u[u == 0.0] = np.nextafter(0.0, 1.0)
        maxima = mu0_loc + trend * centered + gev_quantile(u, base)
        maxima[-1] += record_jump
        dataset.append(
            TrainingSet(years, maxima, covariate, location_id=f"loc{i:03d}")
        )
    return dataset


@dataclass(frozen=True)
class PlotData:
    """Parsed contents of an emitted forecast-plot file."""

    observed: float | None
    bin_edges: np.ndarray
    counts: np.ndarray
    grid: np.ndarray
    gev_density: np.ndarray
    bgev_density: np.ndarray


def emit_forecast_plot_data(
    path,
    history,
    gev_forecast: GevParams,
    bgev_forecast: BgevDistribution,
    observed: float | None = None,
    *,
    svg_path=None,
) -> None:
    """Write histogram counts and forecast density curves as columnar text.

    The density grid has 500 points covering
    [min(history) - 2 sigma, max(history) + 4 sigma] (extended to the
    observed value if it falls beyond), wide enough that the blended
    tail past a bounded GEV's endpoint is visible. An SVG rendering is
    written too when ``svg_path`` is given; the text columns are the
    contract, the figure a convenience.
    """
    history = np.asarray(history, dtype=float)
    if history.size == 0:
        raise ValueError("history must not be empty")
    if not np.all(np.isfinite(history)):
        raise ValueError("history must be finite")
    sigma = gev_forecast.sigma
    lo = float(history.min()) - 2.0 * sigma
    hi = float(history.max()) + 4.0 * sigma
    if observed is not None:
        hi = max(hi, float(observed) + 0.5 * sigma)
    grid = np.linspace(lo, hi, 500)
    gev_density = np.exp(gev_logpdf(grid, gev_forecast))
    bgev_density = np.exp(bgev_logpdf(grid, bgev_forecast))
    counts, edges = np.histogram(history, bins="auto")

    path = Path(path)
    with path.open("w", encoding="utf-8") as fh:
        fh.write("# forecast plot data\n")
        fh.write(f"# observed = {_fmt(observed) if observed is not None else 'none'}\n")
        fh.write("# section: histogram\n")
        fh.write("bin_left,bin_right,count\n")
        for i, c in enumerate(counts):
            fh.write(f"{_fmt(edges[i])},{_fmt(edges[i + 1])},{int(c)}\n")
        fh.write("# section: density\n")
        fh.write("x,gev_density,bgev_density\n")
        for x, g, b in zip(grid, gev_density, bgev_density):
            fh.write(f"{_fmt(x)},{_fmt(g)},{_fmt(b)}\n")
    if svg_path is not None:
        _render_forecast_svg(svg_path, history, grid, gev_density, bgev_density, observed)


def read_plot_data(path) -> PlotData:
    """Parse a file written by :func:`emit_forecast_plot_data`."""
    observed: float | None = None
    section = None
    hist_rows: list[tuple[float, float, int]] = []
    dens_rows: list[tuple[float, float, float]] = []
    with Path(path).open(encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line.lstrip("#").strip()
                if body.startswith("observed ="):
                    value = body.split("=", 1)[1].strip()
                    observed = None if value == "none" else float(value)
                elif body.startswith("section:"):
                    section = body.split(":", 1)[1].strip()
                continue
            if line[0].isalpha():  # column header
                continue
            parts = line.split(",")
            if section == "histogram":
                hist_rows.append((float(parts[0]), float(parts[1]), int(parts[2])))
            elif section == "density":
                dens_rows.append((float(parts[0]), float(parts[1]), float(parts[2])))
    edges = np.array([r[0] for r in hist_rows] + [hist_rows[-1][1]]) if hist_rows else np.empty(0)
    return PlotData(
        observed=observed,
        bin_edges=edges,
        counts=np.array([r[2] for r in hist_rows], dtype=int),
        grid=np.array([r[0] for r in dens_rows]),
        gev_density=np.array([r[1] for r in dens_rows]),
        bgev_density=np.array([r[2] for r in dens_rows]),
    )


def _render_forecast_svg(svg_path, history, grid, gev_density, bgev_density, observed) -> None:
    import matplotlib

    matplotlib.use("Agg", force=False)
    import matplotlib.pyplot as plt

    fig, ax = plt.subplots(figsize=(8, 5))
    ax.hist(history, bins="auto", density=True, color="0.8", label="history")
    ax.plot(grid, gev_density, label="GEV forecast")
    ax.plot(grid, bgev_density, label="bGEV forecast", linestyle="--")
    if observed is not None:
        ax.axvline(observed, color="k", linewidth=1, label="observed")
    ax.set_xlabel("annual maximum")
    ax.set_ylabel("density")
    ax.legend()
    fig.savefig(svg_path, format="svg")
    plt.close(fig)


def write_records(path, records: list[ForecastRecord], a: float, b: float) -> None:
    """Records table CSV; a and b are the run's upper-tail blend levels."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(RECORDS_HEADER)
        for r in records:
            writer.writerow(
                [
                    r.location_id,
                    r.train_len,
                    r.target_year,
                    _fmt(r.observed),
                    r.model.value,
                    _fmt(a),
                    _fmt(b),
                    _fmt(r.nll),
                    _fmt(r.fitted_xi),
                ]
            )


def write_sweep_results(path, results: list[SweepResult]) -> None:
    """Sweep table CSV, one row per blending level."""
    path = Path(path)
    with path.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(SWEEP_HEADER)
        for r in results:
            writer.writerow(
                [_fmt(r.a), _fmt(r.b), _fmt(r.total_nll), r.n_forecasts, r.n_infinite]
            )
