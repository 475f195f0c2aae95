"""Run the cells of one published table and print simulated vs published rates.

Example (a quick look at the n = 30 block of table 1)::

    python scripts/run_table.py --table 1 --cells n=30 --reps 200 --out results/t1
"""

from __future__ import annotations

import argparse
import csv
import sys
from pathlib import Path

from momentineq.cli import main as cli_main
from momentineq.simulation import SELECTION_MODES


def summarize(path: Path) -> None:
    with path.open(newline="") as fh:
        rows = list(csv.DictReader(fh))
    print(f"{'cell':<28}{'test':<20}{'sim':>8}{'paper':>8}")
    for r in rows:
        cell = f"n={r['n']} p={r['p']} rho={r['rho']} {r['dist']}"
        label = r["test"] + ("-sel" if r["sel"] == "1" else "")
        paper = r["paper_value"] or "-"
        print(f"{cell:<28}{label:<20}{float(r['rejection_rate']):>8.3f}{paper:>8}")


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--table", type=int, required=True)
    ap.add_argument("--cells", default="")
    ap.add_argument("--tests", default="")
    ap.add_argument("--reps", type=int, default=200)
    ap.add_argument("--M", type=int, default=1000)
    ap.add_argument("--B", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--selection-mode", default="per-reflection", choices=SELECTION_MODES)
    ap.add_argument("--out", default="results")
    args = ap.parse_args(argv)

    code = cli_main([
        "reproduce", "--table", str(args.table), "--cells", args.cells, "--tests", args.tests,
        "--reps", str(args.reps), "--M", str(args.M), "--B", str(args.B), "--seed", str(args.seed),
        "--selection-mode", args.selection_mode, "--out", args.out,
    ])
    if code == 0:
        summarize(Path(args.out) / f"table{args.table}_long.csv")
    return code


if __name__ == "__main__":
    sys.exit(main())
