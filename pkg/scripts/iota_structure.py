"""Compare t_max and t_max^iota dataset by dataset in design 4 at n = 30.

When the sum of the sample means is negative, the iota direction cannot be
the maximizer on the observed data, so the observed statistics coincide. On
every reflected dataset t_max^iota is at least t_max, so its randomization
p-value can only be larger. This script counts how often each case occurs.
"""

from __future__ import annotations

import argparse

import numpy as np

from momentineq.randomization import randomization_test, sample_reflections
from momentineq.simulation import DesignConfig, derive_seed, generate_dataset
from momentineq.statistics import make_spec


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--p", type=int, default=200)
    ap.add_argument("--reps", type=int, default=100)
    ap.add_argument("--M", type=int, default=1000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    cfg = DesignConfig(n=30, p=args.p, design=4, reps=args.reps, M=args.M, seed=args.seed)
    neg_sum = same_stat = p_not_smaller = rej_tmax = rej_iota = 0
    for rep in range(cfg.reps):
        X = generate_dataset(cfg, rep)
        plan = sample_reflections(cfg.n, cfg.M, derive_seed(cfg.seed, rep, 1))
        a = randomization_test(X, make_spec("tmax", cfg.p), plan)
        b = randomization_test(X, make_spec("tmax-iota", cfg.p), plan)
        neg_sum += X.mean(axis=0).sum() < 0
        same_stat += b.statistic.value == a.statistic.value
        p_not_smaller += b.p_value >= a.p_value
        rej_tmax += a.reject
        rej_iota += b.reject
    r = cfg.reps
    print(f"datasets with negative sum of means : {neg_sum}/{r}")
    print(f"observed t_max^iota equal to t_max   : {same_stat}/{r}")
    print(f"p-value of iota test not smaller     : {p_not_smaller}/{r}")
    print(f"rejection rate t_max                 : {rej_tmax / r:.3f}")
    print(f"rejection rate t_max^iota            : {rej_iota / r:.3f}")
    print(f"mean of sum(mu) in this design       : {np.sum(cfg.mean_vector()):.1f}")


if __name__ == "__main__":
    main()
