"""Command-line interface.

Subcommands: fit, tune-alpha, simulate, curves, diagnose. CSV in
(time,value header), CSV/JSON out. Exit codes: 0 ok, 1 usage, 2 data
error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import asdict
from typing import List, Optional, Tuple

import numpy as np

from .asymptotics import (NumericalError, are, influence_function,
                          sandwich_sigma)
from .diagnostics import (acf_pacf, fit_by_method,
                          flag_outliers_adjusted_boxplot, ks_bootstrap_test,
                          ks_statistic, trend_pvalue)
from .estimators import FitError
from .gedist import GEParams, ge_moments, ge_pdf
from .mdpde import DEFAULT_ALPHA_GRID, fit_mdpde, select_alpha_cvm
from .optimize import BracketingError
from .sample import Sample
from .simharness import (ContaminationSpec, MethodSpec, parse_method,
                         run_contamination_study)

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_NUMERICAL = 0, 1, 2, 3


class DataError(RuntimeError):
    pass


def load_dataset(path: str) -> Tuple[np.ndarray, np.ndarray, int]:
    """Read a time,value CSV with header; empty/'NA' values are dropped.

    Returns (times, values, dropped_count).
    """
    if not os.path.exists(path):
        raise DataError(f"no such file: {path}")
    times: List[float] = []
    values: List[float] = []
    dropped = 0
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline()
        if "value" not in header.lower():
            raise DataError(f"{path}:1: expected a header containing 'value'")
        for lineno, line in enumerate(fh, start=2):
            line = line.strip()
            if not line:
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise DataError(f"{path}:{lineno}: expected 2 columns, got {len(parts)}")
            t_raw, v_raw = parts[0].strip(), parts[1].strip()
            if v_raw == "" or v_raw.upper() == "NA":
                dropped += 1
                continue
            try:
                t, v = float(t_raw), float(v_raw)
            except ValueError:
                raise DataError(f"{path}:{lineno}: could not parse {line!r}")
            times.append(t)
            values.append(v)
    if len(values) < 3:
        raise DataError(f"{path}: fewer than 3 usable rows after dropping missing")
    return np.array(times), np.array(values), dropped


def _emit(obj, out: Optional[str]) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True)
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _emit_csv(header: str, rows: List[str], out: Optional[str]) -> None:
    text = header + "\n" + "\n".join(rows) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_fit(args) -> int:
    _, values, dropped = load_dataset(args.dataset)
    sample = Sample(values)
    method = args.method.upper()
    alpha = args.alpha
    if method == "MDPDE" and alpha is None:
        curve = select_alpha_cvm(sample, DEFAULT_ALPHA_GRID, n_jobs=args.threads)
        alpha = curve.optimal_alpha
    if args.drop_outliers:
        report = flag_outliers_adjusted_boxplot(sample)
        keep = np.setdiff1d(np.arange(len(sample)), report.flagged_indices)
        sample = Sample(sample.values[keep])
    fit = fit_by_method(sample, method, alpha=alpha)
    d_ks = ks_statistic(sample.values, fit.params)
    result = {
        "method": fit.method,
        "lambda": fit.params.lam,
        "nu": fit.params.nu,
        "ks_distance": d_ks,
        "objective_value": fit.objective_value,
        "converged": fit.optim.converged,
        "n": len(sample),
        "dropped_missing": dropped,
    }
    if fit.alpha is not None:
        result["alpha"] = fit.alpha
    try:
        sigma = sandwich_sigma(fit.params, fit.alpha or 0.0).Sigma
        se = np.sqrt(np.diag(sigma) / len(sample))
        result["stderr_lambda"], result["stderr_nu"] = float(se[0]), float(se[1])
    except NumericalError:
        result["stderr_lambda"] = result["stderr_nu"] = None
    _emit(result, args.output)
    return EXIT_OK if fit.optim.converged else EXIT_NUMERICAL


def cmd_tune_alpha(args) -> int:
    _, values, _ = load_dataset(args.dataset)
    sample = Sample(values)
    if args.grid:
        grid = [float(a) for a in args.grid.split(",")]
    else:
        grid = DEFAULT_ALPHA_GRID.tolist()
    curve = select_alpha_cvm(sample, grid, n_jobs=args.threads)
    rows = [f"{a!r},{d!r}" for a, d in zip(curve.alphas, curve.distances)]
    _emit_csv("alpha,cvm_distance", rows, args.output)
    print(f"optimal_alpha,{curve.optimal_alpha!r}", file=sys.stderr)
    return EXIT_OK


def _read_config(path: str) -> dict:
    if not os.path.exists(path):
        raise DataError(f"no such file: {path}")
    cfg = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DataError(f"{path}:{lineno}: expected key = value")
            k, v = (t.strip() for t in line.split("=", 1))
            cfg[k] = v
    return cfg


def cmd_simulate(args) -> int:
    cfg = _read_config(args.config)
    try:
        truth = GEParams(float(cfg.get("truth.lambda", 1.0)),
                         float(cfg.get("truth.nu", 1.5)))
        n = int(cfg.get("n", 100))
        reps = int(cfg.get("reps", 1000))
        seed = int(cfg.get("seed", args.seed))
        proportions = [float(p) for p in cfg.get("contamination.proportions",
                                                 "0,0.01,0.05,0.1").split(",")]
        outlier_prob = cfg.get("contamination.quantile")
        if outlier_prob is not None:
            from .simharness import make_outlier_value
            outlier_value = make_outlier_value(truth, float(outlier_prob))
        else:
            outlier_value = float(cfg.get("contamination.value", 7.31))
        label = cfg.get("contamination.label", "")
        methods = [parse_method(m) for m in
                   cfg.get("methods", "ml,mm,pt,ls,wls,lm,mdpde@0.5").split(",")]
    except (KeyError, ValueError) as e:
        raise DataError(f"bad config: {e}") from e

    header = "method,alpha,parameter,outlier_pct,bias,mse,failures"
    rows: List[str] = []
    for prop in proportions:
        spec = ContaminationSpec(proportion=prop, outlier_value=outlier_value,
                                 scenario_label=label)
        table = run_contamination_study(truth, n, reps, spec, methods, seed,
                                        n_jobs=args.threads)
        rows.extend(table.to_csv().splitlines()[1:])
    _emit_csv(header, rows, args.output)
    return EXIT_OK


def cmd_curves(args) -> int:
    lam, nu = args.rate, args.shape
    params = GEParams(lam, nu)
    if args.kind == "are":
        alphas = np.round(np.arange(0.0, 1.0 + 1e-9, args.step), 10)
        rows = []
        for a in alphas:
            r = are(params, a)
            rows.append(f"{float(a)!r},{float(r[0])!r},{float(r[1])!r}")
        _emit_csv("alpha,are_rate,are_shape", rows, args.output)
    elif args.kind == "influence":
        xs = np.linspace(args.xmin, args.xmax, args.points)
        vals = influence_function(xs, params, args.alpha)
        rows = [f"{float(x)!r},{float(a)!r},{float(b)!r}"
                for x, a, b in zip(xs, vals[0], vals[1])]
        _emit_csv("x,if_rate,if_shape", rows, args.output)
    elif args.kind == "sigma":
        alphas = np.round(np.arange(0.0, 1.0 + 1e-9, args.step), 10)
        rows = []
        for a in alphas:
            s = sandwich_sigma(params, a).Sigma
            rows.append(f"{float(a)!r},{float(s[0, 0])!r},"
                        f"{float(s[0, 1])!r},{float(s[1, 1])!r}")
        _emit_csv("alpha,sigma11,sigma12,sigma22", rows, args.output)
    elif args.kind == "density":
        xs = np.linspace(args.xmin, args.xmax, args.points)
        ys = ge_pdf(xs, params)
        rows = [f"{float(x)!r},{float(y)!r}"
                for x, y in zip(xs, np.atleast_1d(ys))]
        _emit_csv("x,pdf", rows, args.output)
    elif args.kind == "moments":
        nus = np.round(np.arange(0.1, 10.0 + 1e-9, args.step), 10)
        rows = []
        for v in nus:
            m = ge_moments(GEParams(lam, v))
            rows.append(f"{float(v)!r},{float(m.mean)!r},"
                        f"{float(m.variance)!r},{float(m.skewness)!r}")
        _emit_csv("nu,mean,variance,skewness", rows, args.output)
    else:  # pragma: no cover - argparse restricts choices
        raise DataError(f"unknown curve kind {args.kind}")
    return EXIT_OK


def cmd_diagnose(args) -> int:
    times, values, dropped = load_dataset(args.dataset)
    sample = Sample(values)
    max_lag = min(15, (len(sample) - 1) // 2)
    acf, pacf = acf_pacf(sample, max_lag)
    outliers = flag_outliers_adjusted_boxplot(sample)
    # outliers are removed for goodness of fit, never for estimation
    keep = np.setdiff1d(np.arange(len(sample)), outliers.flagged_indices)
    clean = Sample(sample.values[keep])
    gof = ks_bootstrap_test(clean, args.method, B=args.bootstrap, seed=args.seed,
                            alpha=args.alpha, n_jobs=args.threads)
    bundle = {
        "n": len(sample),
        "dropped_missing": dropped,
        "trend_pvalue": trend_pvalue(sample, times),
        "acf": acf,
        "pacf": pacf,
        "lag1_acf": acf[0],
        "outliers": outliers.to_dict(),
        "goodness_of_fit": gof.to_dict(),
    }
    _emit(bundle, args.output)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gefit",
        description="Robust generalized exponential distribution fitting")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--threads", type=int,
                        default=int(os.environ.get("GEFIT_THREADS", "1")))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit the distribution to a dataset")
    p.add_argument("dataset")
    p.add_argument("--method", default="mdpde",
                   choices=["ml", "mm", "pt", "ls", "wls", "lm", "mdpde"])
    p.add_argument("--alpha", type=float, default=None,
                   help="tuning parameter; omit to tune automatically (mdpde)")
    p.add_argument("--drop-outliers", action="store_true",
                   help="remove adjusted-boxplot outliers before fitting")
    p.add_argument("--output")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("tune-alpha", help="leave-one-out CVM tuning curve")
    p.add_argument("dataset")
    p.add_argument("--grid", help="comma-separated alpha values")
    p.add_argument("--output")
    p.set_defaults(func=cmd_tune_alpha)

    p = sub.add_parser("simulate", help="contamination bias/MSE study")
    p.add_argument("config")
    p.add_argument("--output")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("curves", help="emit plot-ready series as CSV")
    p.add_argument("kind", choices=["are", "influence", "sigma", "density",
                                    "moments"])
    p.add_argument("--rate", type=float, default=1.0)
    p.add_argument("--shape", type=float, default=1.5)
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--xmin", type=float, default=0.01)
    p.add_argument("--xmax", type=float, default=10.0)
    p.add_argument("--points", type=int, default=200)
    p.add_argument("--output")
    p.set_defaults(func=cmd_curves)

    p = sub.add_parser("diagnose", help="trend, ACF/PACF, outliers, gof")
    p.add_argument("dataset")
    p.add_argument("--method", default="ml",
                   choices=["ml", "mm", "pt", "ls", "wls", "lm", "mdpde"])
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--bootstrap", type=int, default=1000)
    p.add_argument("--output")
    p.set_defaults(func=cmd_diagnose)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except DataError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_DATA
    except (FitError, BracketingError, NumericalError, ValueError) as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
