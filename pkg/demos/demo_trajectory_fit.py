"""Compare a live run against the closed-form trajectory.

Tracks Q and the witness-pair X/Y counts of the triangle-free process at a
grid of scaled times and prints the relative deviation from q(t) n^2,
x(t) n and y(t) sqrt(n).  The fit tightens as n grows.
"""

import argparse
import math

import numpy as np

from hfree import ProcessState, k3_eval, sampled_counts


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("-n", type=int, default=1200)
    ap.add_argument("--seed", type=int, default=3)
    ap.add_argument("--t-max", type=float, default=0.5)
    ap.add_argument("--witnesses", type=int, default=300)
    args = ap.parse_args()

    n = args.n
    rng = np.random.default_rng(args.seed)
    st = ProcessState(n, rule=3)
    ids = rng.choice(st.npairs, size=args.witnesses, replace=False)

    print("%8s %10s %9s %9s %9s" % ("t", "Q", "dQ%", "dX%", "dY%"))
    checkpoints = [round(t * n ** 1.5) for t in np.arange(0.05, args.t_max + 1e-9, 0.05)]
    for target in checkpoints:
        while st.open_count and st.steps < target:
            st.step(rng)
        if not st.open_count:
            break
        t = st.steps / n ** 1.5
        q, x, y = k3_eval(t)
        xs, ys, _, nonedge = sampled_counts(st, ids)
        dq = st.open_count / (q * n * n) - 1
        dx = xs[nonedge].mean() / (x * n) - 1
        dy = ys[nonedge].mean() / (y * math.sqrt(n)) - 1
        print("%8.3f %10d %8.2f%% %8.2f%% %8.2f%%"
              % (t, st.open_count, 100 * dq, 100 * dx, 100 * dy))


if __name__ == "__main__":
    main()
