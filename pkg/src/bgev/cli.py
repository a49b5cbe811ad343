"""Command-line interface: thin shells over the library operations.

Every subcommand parses flags (optionally seeded from a ``key=value``
config file; explicit flags win), calls the corresponding library
function, and prints or writes results. Exit codes: 0 success, 2 usage
error, 3 data validation error, 4 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import math
import sys
from pathlib import Path

import numpy as np

from . import dataio
from .blend import BlendSpec, build_bgev, bgev_cdf, bgev_logpdf, bgev_quantile, bgev_sample
from .distributions import GevParams, gev_cdf, gev_logpdf, gev_quantile
from .fitting import ModelKind, fit_mle
from .forecast import compare_models, rolling_forecast, aggregate_records, sweep_blend_quantiles
from .special import BetaShape, ConvergenceError

__all__ = ["cli_main", "main"]


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _human(x: float) -> str:
    return format(float(x), ".6g")


def _parse_grid(text: str) -> list[float]:
    """Either a comma list '0.8,0.85' or an inclusive range '0.75:0.975:0.025'."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid range must be start:stop:step, got {text!r}")
        start, stop, step = (float(p) for p in parts)
        if step <= 0:
            raise ValueError("grid step must be positive")
        n = int(round((stop - start) / step))
        values = [start + i * step for i in range(n + 1)]
        return [v for v in values if v <= stop + 1e-12]
    return [float(p) for p in text.split(",") if p.strip()]


def _parse_points(text: str) -> list[float]:
    return [float(p) for p in text.split(",") if p.strip()]


def _add_blend_options(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--a-pos", type=float, default=0.05, help="lower-tail blend level a (xi > 0)")
    sp.add_argument("--b-pos", type=float, default=0.2, help="lower-tail blend level b (xi > 0)")
    sp.add_argument("--a-neg", type=float, default=0.85, help="upper-tail blend level a (xi < 0)")
    sp.add_argument("--b-neg", type=float, default=0.84, help="upper-tail blend level b (xi < 0)")
    sp.add_argument("--alpha", type=float, default=5.0, help="beta weight shape alpha")
    sp.add_argument("--beta", type=float, default=5.0, help="beta weight shape beta")


def _add_fit_options(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--maxfev", type=int, default=5000, help="optimizer evaluation budget")
    sp.add_argument("--fatol", type=float, default=1e-8, help="simplex value-spread tolerance")
    sp.add_argument("--xatol", type=float, default=1e-6, help="simplex vertex-spread tolerance")


def _add_config_option(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--config", default=None, help="key=value file of option defaults; flags win")


def _specs(args) -> tuple[BlendSpec, BlendSpec]:
    shape = BetaShape(args.alpha, args.beta)
    return (
        BlendSpec(args.a_pos, args.b_pos, shape),
        BlendSpec(args.a_neg, args.b_neg, shape),
    )


def _fit_options(args) -> dict:
    return {"maxfev": args.maxfev, "fatol": args.fatol, "xatol": args.xatol}


def _pick_series(dataset, location):
    if location is None:
        return dataset[0]
    for series in dataset:
        if series.location_id == location:
            return series
    raise dataio.SeriesFormatError(
        f"location {location!r} not found; available: {', '.join(s.location_id for s in dataset)}"
    )


def _point_dist(args):
    """Distribution selected by the eval/sample flags.

    --a/--b override the blend levels on the side matching the sign of
    xi; the other side keeps its defaults.
    """
    params = GevParams(args.mu, args.sigma, args.xi)
    shape = BetaShape(args.alpha, args.beta)
    spec_pos = BlendSpec(0.05, 0.2, shape)
    spec_neg = BlendSpec(0.85, 0.84, shape)
    if args.a is not None or args.b is not None:
        if args.a is None or args.b is None:
            raise ValueError("--a and --b must be given together")
        if args.xi > 0:
            spec_pos = BlendSpec(args.a, args.b, shape)
        else:
            spec_neg = BlendSpec(args.a, args.b, shape)
    return params, build_bgev(params, spec_pos, spec_neg)


def _cmd_fit(args) -> int:
    dataset = dataio.read_series(args.input)
    series = _pick_series(dataset, args.location)
    spec_pos, spec_neg = _specs(args)
    fit = fit_mle(series, ModelKind(args.model), spec_pos, spec_neg, **_fit_options(args))
    print(f"location_id = {series.location_id}")
    print(f"model = {fit.model.value}")
    print(f"n = {len(series)}")
    print(f"mu0 = {_fmt(fit.mu0)}")
    print(f"mu_t = {_fmt(fit.mu_t)}")
    print(f"sigma = {_fmt(fit.sigma)}")
    print(f"xi = {_fmt(fit.xi)}")
    print(f"nll = {_fmt(fit.nll)}")
    print(f"converged = {str(fit.converged).lower()}")
    print(f"n_evals = {fit.n_evals}")
    return 0


def _cmd_forecast(args) -> int:
    dataset = dataio.read_series(args.input)
    spec_pos, spec_neg = _specs(args)
    fit_options = _fit_options(args)
    if args.model == "both":
        comparison = compare_models(
            dataset,
            spec_pos,
            spec_neg,
            min_window=args.min_window,
            fit_options=fit_options,
            n_jobs=args.n_jobs,
        )
        records = comparison.gev_records + comparison.bgev_records
        for summary in (comparison.gev, comparison.bgev):
            print(
                f"model={summary.model.value} total_nll={_human(summary.total_nll)} "
                f"n_forecasts={summary.n_forecasts} n_infinite={summary.n_infinite} "
                f"n_excluded={summary.n_excluded} "
                f"xi_negative_share={_human(summary.xi_negative_share)} "
                f"xi_median={_human(summary.xi_median)}"
            )
    else:
        model = ModelKind(args.model)
        records = []
        for series in dataset:
            records.extend(
                rolling_forecast(
                    series,
                    model,
                    spec_pos,
                    spec_neg,
                    args.min_window,
                    fit_options=fit_options,
                )
            )
        total, n_forecasts, n_infinite, n_excluded = aggregate_records(records)
        print(
            f"model={args.model} total_nll={_human(total)} n_forecasts={n_forecasts} "
            f"n_infinite={n_infinite} n_excluded={n_excluded}"
        )
    if args.out:
        dataio.write_records(args.out, records, a=args.a_neg, b=args.b_neg)
        print(f"wrote {len(records)} records to {args.out}")
    return 0


def _cmd_sweep(args) -> int:
    dataset = dataio.read_series(args.input)
    shape = BetaShape(args.alpha, args.beta)
    spec_pos = BlendSpec(args.a_pos, args.b_pos, shape)
    results = sweep_blend_quantiles(
        dataset,
        _parse_grid(args.a_grid),
        args.delta,
        spec_pos,
        weight_shape=shape,
        min_window=args.min_window,
        fit_options=_fit_options(args),
        n_jobs=args.n_jobs,
    )
    if args.out:
        dataio.write_sweep_results(args.out, results)
        for r in results:
            print(
                f"a={_human(r.a)} b={_human(r.b)} total_nll={_human(r.total_nll)} "
                f"n_forecasts={r.n_forecasts} n_infinite={r.n_infinite}"
            )
        print(f"wrote {len(results)} rows to {args.out}")
    else:
        writer = csv.writer(sys.stdout)
        writer.writerow(dataio.SWEEP_HEADER)
        for r in results:
            writer.writerow(
                [_fmt(r.a), _fmt(r.b), _fmt(r.total_nll), r.n_forecasts, r.n_infinite]
            )
    return 0


def _cmd_eval(args) -> int:
    params, dist = _point_dist(args)
    use_gev = args.dist == "gev"
    requested = [
        (args.cdf, "cdf"),
        (args.pdf, "pdf"),
        (args.logpdf, "logpdf"),
        (args.quantile, "quantile"),
    ]
    chosen = [(text, kind) for text, kind in requested if text is not None]
    if not chosen:
        raise ValueError("one of --cdf, --pdf, --logpdf, --quantile is required")
    for text, kind in chosen:
        for value in _parse_points(text):
            if kind == "cdf":
                out = gev_cdf(value, params) if use_gev else bgev_cdf(value, dist)
            elif kind == "pdf":
                lp = gev_logpdf(value, params) if use_gev else bgev_logpdf(value, dist)
                out = math.exp(lp)
            elif kind == "logpdf":
                out = gev_logpdf(value, params) if use_gev else bgev_logpdf(value, dist)
            else:
                out = gev_quantile(value, params) if use_gev else bgev_quantile(value, dist)
            print(_fmt(out))
    return 0


def _cmd_sample(args) -> int:
    _, dist = _point_dist(args)
    for value in bgev_sample(args.n, dist, args.seed):
        print(_fmt(value))
    return 0


def _cmd_synth(args) -> int:
    dataset = dataio.generate_synthetic(
        args.locations,
        args.years,
        args.trend,
        args.xi,
        args.seed,
        start_year=args.start_year,
        mu0=args.mu0,
        sigma=args.sigma,
        record_jump=args.record_jump,
    )
    dataio.write_series(args.out, dataset)
    n_rows = sum(len(s) for s in dataset)
    print(f"wrote {len(dataset)} locations ({n_rows} rows) to {args.out}")
    return 0


def _cmd_plot(args) -> int:
    dataset = dataio.read_series(args.input)
    series = _pick_series(dataset, args.location)
    n = len(series)
    train_len = args.train_len if args.train_len is not None else n - 1
    if not 4 <= train_len < n:
        raise ValueError(f"train length must lie in [4, {n - 1}], got {train_len}")
    train = series.head(train_len)
    spec_pos, spec_neg = _specs(args)
    fit_options = _fit_options(args)
    target_cov = float(series.covariate[train_len])
    observed = float(series.maxima[train_len])
    gev_fit = fit_mle(train, ModelKind.GEV, spec_pos, spec_neg, **fit_options)
    bgev_fit = fit_mle(train, ModelKind.BGEV, spec_pos, spec_neg, **fit_options)
    t_bar = float(np.mean(train.covariate))
    gev_params = GevParams(
        gev_fit.mu0 + gev_fit.mu_t * (target_cov - t_bar), gev_fit.sigma, gev_fit.xi
    )
    bgev_params = GevParams(
        bgev_fit.mu0 + bgev_fit.mu_t * (target_cov - t_bar), bgev_fit.sigma, bgev_fit.xi
    )
    bgev_dist = build_bgev(bgev_params, spec_pos, spec_neg)
    dataio.emit_forecast_plot_data(
        args.out,
        train.maxima,
        gev_params,
        bgev_dist,
        observed=observed,
        svg_path=args.svg,
    )
    print(
        f"wrote plot data for {series.location_id} "
        f"(train {train_len}, target year {int(series.years[train_len])}) to {args.out}"
    )
    return 0


def build_parser() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="bgev",
        description=(
            "Blended generalized extreme value distribution: fitting, "
            "forecast evaluation, and blend-level sweeps."
        ),
    )
    subs = parser.add_subparsers(dest="command", required=True)
    registry: dict[str, argparse.ArgumentParser] = {}

    sp = subs.add_parser("fit", help="fit one series by maximum likelihood")
    sp.add_argument("--input", required=True, help="series CSV")
    sp.add_argument("--location", default=None, help="location_id (default: first)")
    sp.add_argument("--model", choices=["gev", "bgev"], default="bgev")
    _add_blend_options(sp)
    _add_fit_options(sp)
    _add_config_option(sp)
    sp.set_defaults(func=_cmd_fit)
    registry["fit"] = sp

    sp = subs.add_parser("forecast", help="rolling-origin forecast scores")
    sp.add_argument("--input", required=True, help="series CSV")
    sp.add_argument("--model", choices=["gev", "bgev", "both"], default="both")
    sp.add_argument("--min-window", type=int, default=30)
    sp.add_argument("--out", default=None, help="records CSV output path")
    sp.add_argument("--n-jobs", type=int, default=1)
    _add_blend_options(sp)
    _add_fit_options(sp)
    _add_config_option(sp)
    sp.set_defaults(func=_cmd_forecast)
    registry["forecast"] = sp

    sp = subs.add_parser("sweep", help="blend-level sweep over an a grid")
    sp.add_argument("--input", required=True, help="series CSV")
    sp.add_argument(
        "--a-grid",
        default="0.75:0.975:0.025",
        help="comma list or start:stop:step range of a values",
    )
    sp.add_argument("--delta", type=float, default=0.01, help="b = a - delta")
    sp.add_argument("--min-window", type=int, default=30)
    sp.add_argument("--out", default=None, help="sweep CSV output path (default: stdout)")
    sp.add_argument("--n-jobs", type=int, default=1)
    sp.add_argument("--a-pos", type=float, default=0.05)
    sp.add_argument("--b-pos", type=float, default=0.2)
    sp.add_argument("--alpha", type=float, default=5.0)
    sp.add_argument("--beta", type=float, default=5.0)
    _add_fit_options(sp)
    _add_config_option(sp)
    sp.set_defaults(func=_cmd_sweep)
    registry["sweep"] = sp

    sp = subs.add_parser("eval", help="evaluate cdf/pdf/quantile at given points")
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--xi", type=float, required=True)
    sp.add_argument("--a", type=float, default=None, help="blend level a for the sign of xi")
    sp.add_argument("--b", type=float, default=None, help="blend level b for the sign of xi")
    sp.add_argument("--alpha", type=float, default=5.0)
    sp.add_argument("--beta", type=float, default=5.0)
    sp.add_argument("--dist", choices=["bgev", "gev"], default="bgev")
    sp.add_argument("--cdf", default=None, help="comma-separated evaluation points")
    sp.add_argument("--pdf", default=None, help="comma-separated evaluation points")
    sp.add_argument("--logpdf", default=None, help="comma-separated evaluation points")
    sp.add_argument("--quantile", default=None, help="comma-separated levels in (0,1)")
    _add_config_option(sp)
    sp.set_defaults(func=_cmd_eval)
    registry["eval"] = sp

    sp = subs.add_parser("sample", help="inversion sampling from the blended distribution")
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--sigma", type=float, required=True)
    sp.add_argument("--xi", type=float, required=True)
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--b", type=float, default=None)
    sp.add_argument("--alpha", type=float, default=5.0)
    sp.add_argument("--beta", type=float, default=5.0)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--seed", type=int, default=0)
    _add_config_option(sp)
    sp.set_defaults(func=_cmd_sample)
    registry["sample"] = sp

    sp = subs.add_parser("synth", help="generate a synthetic block-maxima dataset")
    sp.add_argument("--locations", type=int, default=10)
    sp.add_argument("--years", type=int, default=84)
    sp.add_argument("--trend", type=float, default=1.4)
    sp.add_argument("--xi", type=float, default=-0.22)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--start-year", type=int, default=1940)
    sp.add_argument("--mu0", type=float, default=300.0)
    sp.add_argument("--sigma", type=float, default=1.0)
    sp.add_argument("--record-jump", type=float, default=0.0)
    sp.add_argument("--out", required=True, help="series CSV output path")
    _add_config_option(sp)
    sp.set_defaults(func=_cmd_synth)
    registry["synth"] = sp

    sp = subs.add_parser("plot", help="emit histogram plus forecast-density plot data")
    sp.add_argument("--input", required=True, help="series CSV")
    sp.add_argument("--location", default=None, help="location_id (default: first)")
    sp.add_argument("--train-len", type=int, default=None, help="default: all but last year")
    sp.add_argument("--out", required=True, help="plot data output path")
    sp.add_argument("--svg", default=None, help="optional SVG rendering path")
    _add_blend_options(sp)
    _add_fit_options(sp)
    _add_config_option(sp)
    sp.set_defaults(func=_cmd_plot)
    registry["plot"] = sp

    return parser, registry


def _load_config_tokens(path: str, command: str) -> list[str]:
    """Turn a key=value config file into argv tokens for ``command``."""
    tokens: list[str] = []
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}: line {lineno}: expected key=value, got {raw!r}")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key or key == "config":
            raise ValueError(f"{path}: line {lineno}: invalid key {key!r}")
        flag = "--" + key.replace("_", "-")
        if value.lower() in {"true", "false"}:
            if value.lower() == "true":
                tokens.append(flag)
        else:
            tokens.extend([flag, value])
    return tokens


def _inject_config(argv: list[str], commands: set[str]) -> list[str]:
    """Insert config-file tokens right after the subcommand so flags win."""
    if not argv or argv[0] not in commands:
        return argv
    config_path = None
    for i, token in enumerate(argv):
        if token == "--config" and i + 1 < len(argv):
            config_path = argv[i + 1]
        elif token.startswith("--config="):
            config_path = token.split("=", 1)[1]
    if config_path is None:
        return argv
    tokens = _load_config_tokens(config_path, argv[0])
    return [argv[0], *tokens, *argv[1:]]


def cli_main(argv=None) -> int:
    """Run one CLI invocation; returns the process exit code."""
    argv = list(sys.argv[1:]) if argv is None else list(argv)
    parser, registry = build_parser()
    try:
        argv = _inject_config(argv, set(registry))
    except FileNotFoundError as exc:
        print(f"error: cannot read config file: {exc}", file=sys.stderr)
        return 2
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        return int(code) if code else 0
    try:
        return args.func(args)
    except dataio.SeriesFormatError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except FileNotFoundError as exc:
        print(f"error: cannot open file: {exc}", file=sys.stderr)
        return 2
    except ConvergenceError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4
    except (FloatingPointError, ZeroDivisionError, OverflowError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return 4
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_main())


if __name__ == "__main__":
    main()
