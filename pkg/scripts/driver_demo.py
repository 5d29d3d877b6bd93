#!/usr/bin/env python3
"""Run every optimizer on the absentminded driver from a grid of starting points.

Prints the final value per (optimizer, x(c)) cell; the optimum is 4000/2187.
"""

import argparse

import numpy as np

from irdp import classic
from irdp.model import Strategy
from irdp.optimize import ALL_KINDS, OptimizerConfig, run

ETA = {"PGD": 0.1, "OPTGD": 0.01, "AMS": 0.1}


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--starts", type=float, nargs="+", default=[0.1, 0.3, 0.5, 0.7, 0.74, 0.75, 0.9])
    ap.add_argument("--max-iters", type=int, default=6000)
    args = ap.parse_args()

    d = classic.absentminded_driver()
    print(f"optimum 4000/2187 = {4000 / 2187:.6f} at x(c) = 20/27 = {20 / 27:.4f}")
    print("kind     " + " ".join(f"{x:>8.2f}" for x in args.starts))
    for kind in ALL_KINDS:
        cfg = OptimizerConfig(kind) if kind.regret_based else OptimizerConfig(kind, learning_rate=ETA[kind.value])
        vals = []
        for x in args.starts:
            tr = run(d, cfg, initial_strategy=Strategy(d.offsets, np.array([x, 1 - x])))
            vals.append(tr.value)
        print(f"{kind.value:<8} " + " ".join(f"{v:8.4f}" for v in vals))


if __name__ == "__main__":
    main()
