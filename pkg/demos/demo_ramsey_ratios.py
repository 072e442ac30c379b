"""Scaling of M, the independence number, and the max degree.

Full triangle-free runs across a range of n; prints the normalized ratios
M / (n^{3/2} sqrt(ln n)), alpha / sqrt(n ln n) and Delta / sqrt(n ln n),
which should be roughly flat in n, plus the implied Ramsey-style ratio
n ln(alpha+1) / (alpha+1)^2.
"""

import argparse

from hfree import ExperimentConfig, ramsey_summary, run_experiment


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n-list", default="200,400,800")
    ap.add_argument("--trials", type=int, default=4)
    ap.add_argument("--seed", type=int, default=2)
    args = ap.parse_args()

    cfg = ExperimentConfig(process="K3",
                           n_list=tuple(int(s) for s in args.n_list.split(",")),
                           trials=args.trials, base_seed=args.seed,
                           stop="full", greedy_repeats=8)
    records = run_experiment(cfg)
    rows = ramsey_summary(records)
    print("%6s %7s %9s %12s %12s %14s" % ("n", "trials", "M-ratio",
                                          "alpha-ratio", "Delta-ratio", "Ramsey-ratio"))
    for row in rows:
        print("%6d %7d %9.4f %12.4f %12.4f %14.4f"
              % (row["n"], row["trials"], row["mean_M_ratio"],
                 row["mean_alpha_ratio"], row["mean_delta_ratio"],
                 row["implied_ramsey_ratio"]))


if __name__ == "__main__":
    main()
