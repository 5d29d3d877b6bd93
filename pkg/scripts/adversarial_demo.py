#!/usr/bin/env python3
"""Final values of PGD and RM on the three adversarial 1-D instances.

Regret matching jumps to a vertex on its first step; small-step gradient
ascent follows the local slope.
"""

import argparse

import numpy as np

from irdp.encode import adversarial_instance
from irdp.model import Strategy
from irdp.optimize import Kind, OptimizerConfig, run


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--eta", type=float, default=0.01)
    ap.add_argument("--starts", type=float, nargs="+", default=[0.1, 0.2, 0.4, 0.6, 0.9])
    args = ap.parse_args()

    cases = [("RMTrap", {}), ("GDTrap", {}), ("BasinTrap", {"eps": 0.1, "k": 4})]
    configs = [OptimizerConfig(Kind.PGD, learning_rate=args.eta), OptimizerConfig(Kind.RM), OptimizerConfig(Kind.RM_PLUS)]
    for name, kw in cases:
        p = adversarial_instance(name, **kw)
        print(f"{name} {kw or ''}")
        print("  start    " + " ".join(f"{x:>9.2f}" for x in args.starts))
        for cfg in configs:
            vals = [run(p, cfg, initial_strategy=Strategy(p.offsets, np.array([x, 1 - x]))).value for x in args.starts]
            print(f"  {cfg.label:<8} " + " ".join(f"{v:9.5f}" for v in vals))


if __name__ == "__main__":
    main()
