"""Command line interface.

Subcommands: fit, compare, sample, slopes, eval. Exit codes: 0 success,
1 input error, 2 numerical failure.
"""
from __future__ import annotations

import argparse
import os
import sys
import tempfile

import numpy as np

from . import _kernels as K
from .baselines import fit_fw, fw_cdf, fw_ccdf
from .corrstruct import build_natural, precision_summary
from .dist import lsn_ccdf, lsn_cdf, lsn_logcdf, lsn_pdf
from .errors import InputError, LsnError, NonPositiveDefinite
from .fit import fit_lsn
from .mc import compare, quantile, sample_sum
from .probscale import empirical_probit_slope, lsn_tail_slopes, scln_tail_slopes
from .scenario import load_scenario

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NUMERICAL = 2


def _add_common(p, mc_opts=True):
    p.add_argument("scenario", help="scenario YAML file")
    p.add_argument("--literal-eq29", action="store_true",
                   help="use the uncorrected location formula (drops the "
                        "factor-2 mean correction term); for side-by-side "
                        "study only")
    if mc_opts:
        p.add_argument("--samples", type=int, default=None,
                       help="override the scenario's MC sample count")
        p.add_argument("--seed", type=int, default=None,
                       help="override the scenario's MC seed")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads for the numba backend (results "
                            "are identical for any thread count)")


def _parse_grid(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise InputError("--grid expects MIN_DB:MAX_DB:STEP_DB")
    from .scenario import Grid
    return Grid(min_db=float(parts[0]), max_db=float(parts[1]),
                step_db=float(parts[2]))


def _parse_levels(text):
    levels = tuple(float(v) for v in text.split(",") if v.strip())
    if not levels or any(not (0.0 < v < 1.0) for v in levels):
        raise InputError("--levels expects comma-separated values in (0, 1)")
    return levels


def _apply_overrides(sc, args):
    samples = getattr(args, "samples", None)
    seed = getattr(args, "seed", None)
    grid = getattr(args, "grid", None)
    levels = getattr(args, "levels", None)
    kw = {}
    if samples is not None:
        if samples < 1:
            raise InputError(f"--samples must be >= 1, got {samples}")
        kw["samples"] = samples
    if seed is not None:
        kw["seed"] = seed
    if grid is not None:
        kw["grid"] = _parse_grid(grid)
    if levels is not None:
        kw["levels"] = _parse_levels(levels)
    if kw:
        from dataclasses import replace
        sc = replace(sc, **kw)
    return sc


def _setup_threads(args):
    n = getattr(args, "threads", None)
    if n is None:
        return
    if n < 1:
        raise InputError(f"--threads must be >= 1, got {n}")
    if K.BACKEND == "numba":
        import numba
        numba.set_num_threads(n)
    else:
        print("note: --threads has no effect on the numpy backend",
              file=sys.stderr)


def _fmt(x):
    return format(float(x), ".17g")


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path)) or "."
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".lsnfit-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def _print_fit(report):
    p = report.params
    print(f"lambda_opt   {_fmt(p.lam)}")
    print(f"eps          {_fmt(p.eps)}  (dB: {_fmt(p.eps_db)})")
    print(f"omega        {_fmt(p.omega)}  (dB: {_fmt(p.omega_db)})")
    print(f"lambda0      {_fmt(report.lambda0)}")
    print(f"iterations   {report.iterations}")
    print(f"residual     {_fmt(report.residual)}")
    print(f"mean_rel     {_fmt(report.moment_residuals[0])}")
    print(f"var_rel      {_fmt(report.moment_residuals[1])}")
    print(f"slope_match  {_fmt(report.slope_match)}")
    print(f"assumption_ok {report.assumption_ok}")
    for w in report.warnings:
        print(f"warning: {w}")


def cmd_fit(args):
    sc = _apply_overrides(load_scenario(args.scenario), args)
    report = fit_lsn(sc.spec, mean_correction=not args.literal_eq29)
    _print_fit(report)
    return EXIT_OK


def cmd_slopes(args):
    sc = load_scenario(args.scenario)
    report = fit_lsn(sc.spec, mean_correction=not args.literal_eq29)
    ps = precision_summary(build_natural(sc.spec))
    th = scln_tail_slopes(ps)
    fi = lsn_tail_slopes(report.params)
    p = report.params
    emp = {}
    for name, x0 in (("lower", -30.0), ("upper", 30.0)):
        try:
            emp[name] = empirical_probit_slope(
                lambda l: lsn_cdf(l, p), p.eps + x0 * p.omega,
                ccdf_evaluator=lambda l: lsn_ccdf(l, p),
                logcdf_evaluator=lambda l: lsn_logcdf(l, p))
        except LsnError:
            emp[name] = float("nan")
    print(f"{'':12s} {'sum (theory)':>14s} {'fit (theory)':>14s} {'fit (probe)':>14s}")
    print(f"{'lower':12s} {th.lower:14.8f} {fi.lower:14.8f} {emp['lower']:14.8f}")
    print(f"{'upper':12s} {th.upper:14.8f} {fi.upper:14.8f} {emp['upper']:14.8f}")
    if not report.assumption_ok:
        print("warning: tail regularity check failed; theory slopes may not apply")
    return EXIT_OK


def cmd_sample(args):
    sc = _apply_overrides(load_scenario(args.scenario), args)
    _setup_threads(args)
    nat = build_natural(sc.spec, allow_semidefinite=True)
    e = sample_sum(nat, sc.samples, sc.seed, sc.chunk_size)
    if args.out:
        # raw dump: little-endian float64, ascending, no header
        e.sorted_samples.astype("<f8").tofile(args.out)
        print(f"wrote {e.n} samples to {args.out}")
    s = e.sorted_samples
    print(f"n        {e.n}")
    print(f"seed     {sc.seed}")
    print(f"mean     {_fmt(s.mean())}")
    print(f"variance {_fmt(s.var())}")
    for p in (0.01, 0.5, 0.99):
        print(f"q{p:<7g} {_fmt(quantile(e, p))}")
    return EXIT_OK


def _probit_clipped(cdf_vals, n):
    lo = 1.0 / n
    clipped = np.clip(cdf_vals, lo, 1.0 - lo)
    return K.norm_ppf(np.asarray(clipped, dtype=np.float64))


def _probit_fit(cdf_vals, ccdf_vals):
    # stable probit of a fitted cdf: use whichever side is small, so the
    # straight asymptotes stay exact far beyond the MC floor
    c = np.asarray(np.clip(cdf_vals, 1e-300, 1.0), dtype=np.float64)
    cc = np.asarray(np.clip(ccdf_vals, 1e-300, 1.0), dtype=np.float64)
    lower = K.norm_ppf(np.where(c < 1.0, c, 0.5))
    upper = -K.norm_ppf(np.where(cc < 1.0, cc, 0.5))
    return np.where(c <= 0.5, lower, upper)


def cmd_compare(args):
    sc = _apply_overrides(load_scenario(args.scenario), args)
    _setup_threads(args)
    report = fit_lsn(sc.spec, mean_correction=not args.literal_eq29)
    fw = fit_fw(sc.spec)
    nat = build_natural(sc.spec, allow_semidefinite=True)
    e = sample_sum(nat, sc.samples, sc.seed, sc.chunk_size)
    p = report.params

    levels = [lv for lv in sc.levels if 1.0 / e.n < lv < 1.0 - 1.0 / e.n]
    skipped = [lv for lv in sc.levels if lv not in levels]
    for lv in skipped:
        print(f"warning: level {lv:g} outside empirical support, marked absent",
              file=sys.stderr)
    m_lsn = compare(lambda l: lsn_cdf(l, p), e, levels)
    m_fw = compare(lambda l: fw_cdf(l, fw), e, levels)

    print(f"ks_distance lsn {_fmt(m_lsn.ks_distance)}")
    print(f"ks_distance fw  {_fmt(m_fw.ks_distance)}")
    print(f"{'level':>10s} {'db_dev_lsn':>14s} {'db_dev_fw':>14s}")
    for lv in sc.levels:
        if lv in levels:
            i = levels.index(lv)
            print(f"{lv:10g} {m_lsn.db_deviation[i]:14.6f} {m_fw.db_deviation[i]:14.6f}")
        else:
            print(f"{lv:10g} {'absent':>14s} {'absent':>14s}")

    if args.out:
        grid_db = sc.grid.values_db()
        x = np.power(10.0, grid_db / 10.0)
        cdf_mc = np.searchsorted(e.sorted_samples, x, side="right") / e.n
        cdf_l = lsn_cdf(x, p)
        cdf_f = fw_cdf(x, fw)
        ccdf_l = lsn_ccdf(x, p)
        ccdf_f = fw_ccdf(x, fw)
        pr_mc = _probit_clipped(cdf_mc, e.n)
        pr_l = _probit_fit(cdf_l, ccdf_l)
        pr_f = _probit_fit(cdf_f, ccdf_f)
        rows = ["x_db,cdf_mc,cdf_lsn,cdf_fw,ccdf_mc,ccdf_lsn,ccdf_fw,"
                "probit_mc,probit_lsn,probit_fw"]
        for i in range(grid_db.size):
            rows.append(",".join(_fmt(v) for v in (
                grid_db[i], cdf_mc[i], cdf_l[i], cdf_f[i],
                1.0 - cdf_mc[i], ccdf_l[i], ccdf_f[i],
                pr_mc[i], pr_l[i], pr_f[i])))
        _atomic_write(args.out, "\n".join(rows) + "\n")
        print(f"wrote {grid_db.size} grid rows to {args.out}")
    return EXIT_OK


def cmd_eval(args):
    sc = load_scenario(args.scenario)
    report = fit_lsn(sc.spec, mean_correction=not args.literal_eq29)
    p = report.params
    try:
        at_db = [float(v) for v in args.at.split(",") if v.strip()]
    except ValueError:
        raise InputError("--at expects comma-separated dB values") from None
    if not at_db:
        raise InputError("--at expects at least one dB value")
    print(f"{'x_db':>12s} {'pdf':>24s} {'cdf':>24s} {'ccdf':>24s}")
    for v in at_db:
        l = 10.0 ** (v / 10.0)
        print(f"{v:12g} {_fmt(lsn_pdf(l, p)):>24s} {_fmt(lsn_cdf(l, p)):>24s} "
              f"{_fmt(lsn_ccdf(l, p)):>24s}")
    return EXIT_OK


def build_parser():
    ap = argparse.ArgumentParser(
        prog="lsnfit",
        description="Fit a log skew normal to a sum of correlated lognormal "
                    "components and validate it against Monte Carlo sampling "
                    "and a moment-matched lognormal baseline.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fit", help="fit and print parameters/diagnostics")
    _add_common(p, mc_opts=False)
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("compare",
                       help="run MC, fit both models, print metrics, write CSV")
    _add_common(p)
    p.add_argument("--out", help="CSV output path (written atomically)")
    p.add_argument("--grid", help="override grid as MIN_DB:MAX_DB:STEP_DB")
    p.add_argument("--levels", help="override levels as comma-separated list")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("sample", help="run the MC sampler, print summary")
    _add_common(p)
    p.add_argument("--out", help="raw sample dump: little-endian float64, "
                                 "ascending order, no header")
    p.set_defaults(func=cmd_sample)

    p = sub.add_parser("slopes", help="theoretical and probed tail slopes")
    _add_common(p, mc_opts=False)
    p.set_defaults(func=cmd_slopes)

    p = sub.add_parser("eval", help="pointwise pdf/cdf/ccdf of the fitted model")
    _add_common(p, mc_opts=False)
    p.add_argument("--at", required=True,
                   help="comma-separated dB values; use --at=-3,0,9 for "
                        "values starting with a minus sign")
    p.set_defaults(func=cmd_eval)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (InputError, NonPositiveDefinite) as exc:
        # a non-PD correlation matrix is bad input, not a solver failure
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except LsnError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
