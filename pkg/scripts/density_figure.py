"""Plot the standardized skew-normal error densities against N(0, 1).

Writes ``density.png`` (and the underlying CSV) to ``--out``. Needs
matplotlib (``pip install -e .[scripts]``).
"""

from __future__ import annotations

import argparse
import csv
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from scipy import stats  # noqa: E402

from momentineq.simulation import SkewNormal, density_curve  # noqa: E402


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--gammas", default="-0.667,0.667")
    ap.add_argument("--out", default="results")
    args = ap.parse_args(argv)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    grid = np.linspace(-4, 4, 801)
    fig, ax = plt.subplots(figsize=(6, 4))
    ax.plot(grid, stats.norm.pdf(grid), "k--", lw=1, label="N(0, 1)")
    with (out / "density.csv").open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["gamma", "x", "pdf"])
        for g in (float(s) for s in args.gammas.split(",")):
            curve = density_curve(SkewNormal(g), grid)
            w.writerows([g, x, f] for x, f in curve)
            ax.plot(grid, [f for _, f in curve], label=f"skew-normal, skewness {g:+.3f}")
    ax.set_xlabel("x")
    ax.set_ylabel("density")
    ax.legend(frameon=False)
    fig.tight_layout()
    fig.savefig(out / "density.png", dpi=150)
    print(f"wrote {out / 'density.png'} and {out / 'density.csv'}")


if __name__ == "__main__":
    main()
