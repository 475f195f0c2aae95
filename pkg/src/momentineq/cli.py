"""Command-line interface: ``momentineq {test,simulate,reproduce,density}``.

Statistical decisions are reported, never encoded in the exit status: 0 means
the command ran, 2 means invalid input or configuration.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import os
import sys
from dataclasses import asdict, dataclass, field
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .bootstrap import BootstrapConfig, eb_test, eb_test_selected
from .moments import check_data, sample_moments
from .paper_values import paper_value
from .randomization import (
    EBCutoff,
    ObservedSet,
    randomization_test,
    randomization_test_selected,
    sample_reflections,
)
from .simulation import (
    SELECTION_MODES,
    DesignConfig,
    SkewNormal,
    StudentT4Scaled,
    density_curve,
    derive_seed,
    parse_dist,
    parse_test,
    run_cell,
)
from .statistics import (
    FiniteSet,
    NonNegativeOrthant,
    check_copositivity_sufficient,
    make_spec,
)

log = logging.getLogger("momentineq")

SEED_ENV = "MOMENTINEQ_SEED"

ALL_TESTS = (
    "eb-tmax", "sr-tmax", "eb-tmax-sel", "sr-tmax-sel",
    "eb-tmax-iota", "sr-tmax-iota", "eb-tmax-iota-sel", "sr-tmax-iota-sel",
    "sr-tplus", "sr-tplus-sel",
)
SMALL_N_TESTS = ("eb-tmax", "sr-tmax", "eb-tmax-iota", "sr-tmax-iota", "sr-tplus")

# one schema for every CSV of simulation results
ROW_FIELDS = (
    "table", "n", "p", "rho", "design", "dist", "test", "sel", "rejection_rate",
    "paper_value", "n_errors", "n_infinite", "reps", "inf_reflection_frac",
)


class CLIError(Exception):
    """Bad user input; reported on stderr with a nonzero exit."""


# -- shared output plumbing --------------------------------------------------------

def write_csv(path, rows, fields=ROW_FIELDS):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=list(fields), restval="", extrasaction="raise")
        w.writeheader()
        for r in rows:
            w.writerow({k: ("" if v is None else v) for k, v in r.items()})
    return path


def _now():
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


@dataclass
class RunManifest:
    """Everything needed to re-run a command and get identical outputs."""

    command: str
    argv: list
    config: dict
    seed: int
    version: str = __version__
    started: str = field(default_factory=_now)
    finished: str | None = None
    outputs: list = field(default_factory=list)
    # run-specific facts (timings, per-rep error messages); not needed to re-run
    diagnostics: dict = field(default_factory=dict)

    def write(self, path):
        self.finished = _now()
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(asdict(self), indent=2, default=_json_default) + "\n")
        return path


def _json_default(obj):
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def _finite_or_str(x):
    x = float(x)
    return x if math.isfinite(x) else ("inf" if x > 0 else "-inf")


def _progress(label):
    def report(done, total):
        print(f"\r{label}: {done}/{total}", end="" if done < total else "\n",
              file=sys.stderr, flush=True)
    return report


# -- input --------------------------------------------------------------------------

def read_matrix(path, header: bool = False, what: str = "data") -> np.ndarray:
    """Read a numeric CSV into a 2-d float array, with precise diagnostics."""
    try:
        with open(path, newline="") as fh:
            rows = [r for r in csv.reader(fh) if any(c.strip() for c in r)]
    except OSError as exc:
        raise CLIError(f"cannot read {what} file: {exc}") from exc
    if header and rows:
        rows = rows[1:]
    if not rows:
        raise CLIError(f"{what} file {path} has no rows")
    width = len(rows[0])
    out = np.empty((len(rows), width))
    for i, r in enumerate(rows):
        if len(r) != width:
            raise CLIError(f"{what} file {path}: row {i + 1} has {len(r)} fields, expected {width}")
        try:
            out[i] = [float(c) for c in r]
        except ValueError as exc:
            raise CLIError(f"{what} file {path}: row {i + 1}: {exc}") from exc
    return out


def _spec_from_args(args, p):
    if args.statistic == "custom":
        if not args.directions:
            raise CLIError("--statistic custom needs --directions FILE")
        D = read_matrix(args.directions, header=args.header, what="directions")
        if D.shape[1] != p:
            raise CLIError(f"directions have length {D.shape[1]}, data has p={p}")
        try:
            return FiniteSet(D)
        except ValueError as exc:
            raise CLIError(f"invalid directions: {exc}") from exc
    return make_spec(args.statistic, p)


# -- commands -------------------------------------------------------------------------

def cmd_test(args) -> int:
    X = read_matrix(args.data, header=args.header)
    try:
        X = check_data(X)
    except ValueError as exc:
        raise CLIError(str(exc)) from exc
    n, p = X.shape
    spec = _spec_from_args(args, p)

    if args.method == "eb":
        if isinstance(spec, NonNegativeOrthant):
            raise CLIError("the empirical bootstrap supports finite direction sets only")
        bcfg = BootstrapConfig(B=args.bootstrap, alpha=args.alpha,
                               beta=args.beta if args.select else 0.0,
                               seed=derive_seed(args.seed, 0, 2))
        out = eb_test_selected(X, spec, bcfg) if args.select else eb_test(X, spec, bcfg)
    else:
        M = args.reflections
        if n <= 62 and M > 2 ** n:
            log.warning("only 2^%d = %d reflections exist; using all of them", n, 2 ** n)
            M = 2 ** n
        plan = sample_reflections(n, M, derive_seed(args.seed, 0, 1))
        if args.select:
            sel_seed = derive_seed(args.seed, 0, 3)
            if args.selection_mode == "observed-set":
                selector = ObservedSet(beta=args.beta, B=args.bootstrap, seed=sel_seed)
            else:
                selector = EBCutoff(beta=args.beta, B=args.bootstrap, seed=sel_seed,
                                    per_reflection=args.selection_mode == "per-reflection")
            out = randomization_test_selected(X, spec, selector, plan, args.alpha)
        else:
            out = randomization_test(X, spec, plan, args.alpha)

    cop = check_copositivity_sufficient(sample_moments(X))
    report = {
        "n": n,
        "p": p,
        "statistic_set": getattr(spec, "name", "custom"),
        "method": out.method,
        "statistic": {"tag": out.statistic.tag, "value": _finite_or_str(out.statistic.value)},
        "p_value": out.p_value,
        "critical_value": None if out.critical_value is None else _finite_or_str(out.critical_value),
        "alpha": out.alpha,
        "reject": out.reject,
        "decision": "reject" if out.reject else "no rejection",
        "draws": out.M,
        "selected": None if out.selected is None else [int(j) for j in out.selected],
        "selection_cutoff": None if out.cutoff is None else _finite_or_str(out.cutoff),
        "diagnostics": {
            "copositivity": cop.status,
            "copositivity_removed": [int(j) for j in cop.removed],
            "infinite_reflections": out.n_infinite_reflections,
        },
        "seed": args.seed,
    }
    text = json.dumps(report, indent=2)
    print(text)
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text + "\n")
    return 0


def _tests_arg(text):
    tests = tuple(t.strip() for t in text.split(",") if t.strip())
    for t in tests:
        parse_test(t)
    return tests


def cmd_simulate(args) -> int:
    cfg = DesignConfig(n=args.n, p=args.p, rho=args.rho, design=args.design,
                       dist=parse_dist(args.dist), reps=args.reps, M=args.M, B=args.B,
                       alpha=args.alpha, beta=args.beta, seed=args.seed,
                       selection=args.selection_mode)
    tests = _tests_arg(args.tests)
    out = Path(args.out)
    manifest = RunManifest("simulate", sys.argv[1:], {**cfg.to_dict(), "tests": list(tests)}, args.seed)
    res = run_cell(cfg, tests, n_jobs=args.threads, progress=_progress("simulate"))
    rows = [{**r, "table": None, "paper_value": None} for r in res.rows()]
    csv_path = write_csv(out / "results.csv", rows)
    manifest.outputs = [str(csv_path)]
    manifest.diagnostics = {"mean_seconds": res.mean_seconds, "errors": res.errors}
    manifest.write(out / "manifest.json")
    for r in rows:
        print(f"{r['test']}{'-sel' if r['sel'] else ''}: rate={r['rejection_rate']:.3f}")
    return 0


def table_cells(table: int):
    """Preset cells of a published table: ``(key, DesignConfig kwargs, tests)``."""
    if table not in (1, 2, 3, 4, 5):
        raise CLIError(f"unknown table {table}; choose 1-5")
    cells = []
    if table == 5:
        for gamma in (-0.667, 0.667):
            for p in (200, 500, 1000):
                for rho in (0.0, 0.5, 0.9):
                    cells.append(({"gamma": gamma, "n": 400, "p": p, "rho": rho},
                                  dict(n=400, p=p, rho=rho, design=1, dist=SkewNormal(gamma)),
                                  ALL_TESTS))
        return cells
    for n in (400, 30):
        for p in (200, 500, 1000):
            for rho in (0.0, 0.5, 0.9):
                cells.append(({"n": n, "p": p, "rho": rho},
                              dict(n=n, p=p, rho=rho, design=table, dist=StudentT4Scaled()),
                              ALL_TESTS if n == 400 else SMALL_N_TESTS))
    return cells


def parse_cell_filter(text):
    """``"n=30,rho=0.5"`` -> ``{"n": 30.0, "rho": 0.5}`` (all must match)."""
    out = {}
    for part in (text or "").split(","):
        if not part.strip():
            continue
        k, sep, v = part.partition("=")
        k = k.strip().lower()
        if not sep or k not in ("n", "p", "rho", "gamma"):
            raise CLIError(f"bad cell filter {part!r}; use n=, p=, rho= or gamma=")
        try:
            out[k] = float(v)
        except ValueError as exc:
            raise CLIError(f"bad cell filter value {v!r}") from exc
    return out


def _matches(key, flt):
    return all(k in key and math.isclose(key[k], v, abs_tol=1e-9) for k, v in flt.items())


def cmd_reproduce(args) -> int:
    flt = parse_cell_filter(args.cells)
    wanted = _tests_arg(args.tests) if args.tests else None
    cells = [c for c in table_cells(args.table) if _matches(c[0], flt)]
    if not cells:
        raise CLIError("the cell filter matches no cells")
    out = Path(args.out)
    manifest = RunManifest("reproduce", sys.argv[1:],
                           {"table": args.table, "cells": args.cells, "tests": args.tests,
                            "reps": args.reps, "M": args.M, "B": args.B, "alpha": args.alpha,
                            "beta": args.beta, "selection": args.selection_mode,
                            "threads": args.threads}, args.seed)
    long_rows, wide_rows, timing, errors = [], [], {}, {}
    for i, (key, kw, tests) in enumerate(cells):
        tests = tuple(t for t in tests if wanted is None or t in wanted)
        if not tests:
            continue
        cfg = DesignConfig(**kw, reps=args.reps, M=args.M, B=args.B, alpha=args.alpha,
                           beta=args.beta, seed=args.seed, selection=args.selection_mode)
        label = " ".join(f"{k}={v:g}" for k, v in key.items())
        res = run_cell(cfg, tests, n_jobs=args.threads, progress=_progress(f"table {args.table} {label}"))
        first = key["gamma"] if args.table == 5 else key["n"]
        timing[label] = res.mean_seconds
        if res.errors:
            errors[label] = res.errors
        wide = dict(key)
        for row, t in zip(res.rows(), tests):
            pv = paper_value(args.table, first, key["p"], key["rho"], t)
            long_rows.append({**row, "table": args.table, "paper_value": pv})
            wide[t] = row["rejection_rate"]
            wide[f"{t}_paper"] = pv
        wide_rows.append(wide)

    fields_wide = (["gamma"] if args.table == 5 else []) + ["n", "p", "rho"]
    for t in ALL_TESTS:
        if any(t in r for r in wide_rows):
            fields_wide += [t, f"{t}_paper"]
    p_long = write_csv(out / f"table{args.table}_long.csv", long_rows)
    p_wide = write_csv(out / f"table{args.table}.csv", wide_rows, fields_wide)
    manifest.outputs = [str(p_long), str(p_wide)]
    manifest.diagnostics = {"mean_seconds": timing, "errors": errors}
    manifest.write(out / "manifest.json")
    print(f"wrote {p_long} and {p_wide}")
    return 0


def cmd_density(args) -> int:
    from scipy import stats

    dist = parse_dist(args.dist)
    grid = np.linspace(args.xmin, args.xmax, args.points)
    rows = [{"x": x, "pdf": f, "normal_pdf": float(stats.norm.pdf(x))} for x, f in density_curve(dist, grid)]
    out = Path(args.out)
    path = write_csv(out / f"density_{dist.name.replace(':', '_')}.csv", rows, ("x", "pdf", "normal_pdf"))
    manifest = RunManifest("density", sys.argv[1:], {"dist": dist.name, "xmin": args.xmin,
                                                     "xmax": args.xmax, "points": args.points}, 0)
    manifest.outputs = [str(path)]
    manifest.write(out / "manifest.json")
    print(f"wrote {path}")
    return 0


# -- parser ------------------------------------------------------------------------------

def _default_seed():
    try:
        return int(os.environ.get(SEED_ENV, "0"))
    except ValueError:
        return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="momentineq", description="Tests of many moment inequalities.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--alpha", type=float, default=0.05)
        sp.add_argument("--beta", type=float, default=0.001, help="selection level (with selection)")
        sp.add_argument("--seed", type=int, default=_default_seed(),
                        help=f"master seed (default: ${SEED_ENV} or 0)")
        sp.add_argument("--selection-mode", choices=SELECTION_MODES, default="per-reflection",
                        help="recompute the EB selection cutoff on every reflection (exact), reuse the "
                             "observed cutoff (fixed), or reuse the observed selected set (observed-set)")

    t = sub.add_parser("test", help="test mu <= 0 on a CSV data file")
    t.add_argument("data", help="CSV file, one observation per row")
    t.add_argument("--header", action="store_true", help="skip the first row of every CSV input")
    t.add_argument("--statistic", choices=("tmax", "tmax-iota", "tplus", "custom"), default="tmax")
    t.add_argument("--directions", help="CSV of non-negative direction vectors (with --statistic custom)")
    t.add_argument("--method", choices=("sr", "eb"), default="sr")
    t.add_argument("--reflections", "-M", type=int, default=1000)
    t.add_argument("--bootstrap", "-B", type=int, default=1000)
    t.add_argument("--select", action="store_true", help="pre-select inequalities with the EB cutoff")
    t.add_argument("--out", help="also write the JSON report here")
    common(t)
    t.set_defaults(func=cmd_test)

    threads = os.cpu_count() or 1

    s = sub.add_parser("simulate", help="Monte Carlo rejection rates for one design cell")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--rho", type=float, default=0.0)
    s.add_argument("--design", type=int, choices=(1, 2, 3, 4), default=1)
    s.add_argument("--dist", default="t4", help="t4 or skewnormal:<gamma>")
    s.add_argument("--reps", type=int, default=1000)
    s.add_argument("--tests", default="sr-tmax", help="comma list, e.g. sr-tmax,eb-tmax,sr-tplus-sel")
    s.add_argument("--M", type=int, default=1000)
    s.add_argument("--B", type=int, default=1000)
    s.add_argument("--threads", type=int, default=threads)
    s.add_argument("--out", default="results/simulate")
    common(s)
    s.set_defaults(func=cmd_simulate)

    r = sub.add_parser("reproduce", help="run the cells of a published table")
    r.add_argument("--table", type=int, required=True)
    r.add_argument("--cells", default="", help="filter such as 'n=30' or 'p=200,rho=0'")
    r.add_argument("--tests", default="", help="comma list restricting the tests")
    r.add_argument("--reps", type=int, default=1000)
    r.add_argument("--M", type=int, default=1000)
    r.add_argument("--B", type=int, default=1000)
    r.add_argument("--threads", type=int, default=threads)
    r.add_argument("--out", default="results")
    common(r)
    r.set_defaults(func=cmd_reproduce)

    d = sub.add_parser("density", help="density of an error distribution next to N(0, 1)")
    d.add_argument("--dist", default="skewnormal:0.667")
    d.add_argument("--xmin", type=float, default=-4.0)
    d.add_argument("--xmax", type=float, default=4.0)
    d.add_argument("--points", type=int, default=401)
    d.add_argument("--out", default="results")
    d.set_defaults(func=cmd_density)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s", stream=sys.stderr)
    try:
        return args.func(args)
    except (CLIError, ValueError, OSError) as exc:
        print(f"momentineq: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
