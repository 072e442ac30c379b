"""Martingale tail bounds versus simulation.

Evaluates the Hoeffding-style bounds for (eta, N)-bounded sub- and
supermartingales and checks them against an i.i.d.-increment walk simulated
at the same parameters.
"""

import argparse

import numpy as np

from hfree import (
    MartingaleSpec,
    simulate_bounded_martingale,
    submartingale_tail,
    supermartingale_tail,
)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=200000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)

    print("submartingale, increments in [-1, 2], mean 0, m=100")
    spec = MartingaleSpec(eta=1.0, big_n=2.0, m=100, a=25.0)
    tb = submartingale_tail(spec)
    freq = simulate_bounded_martingale(spec, [-1.0, 2.0], [2 / 3, 1 / 3],
                                       args.trials, rng, side="lower")
    print("  Pr[A_m <= -%.0f]  lemma %.5f  sharp %.5f  simulated %.5f"
          % (spec.a, tb.lemma, tb.sharp, freq))

    print("supermartingale, increments in [-0.5, 5], mean 0, m=200")
    spec = MartingaleSpec(eta=0.5, big_n=5.0, m=200, a=35.0)
    tb = supermartingale_tail(spec)
    freq = simulate_bounded_martingale(spec, [-0.5, 5.0], [10 / 11, 1 / 11],
                                       args.trials, rng, side="upper")
    print("  Pr[A_m >= %.0f]   lemma %.5f  sharp %.5f  simulated %.5f"
          % (spec.a, tb.lemma, tb.sharp, freq))


if __name__ == "__main__":
    main()
