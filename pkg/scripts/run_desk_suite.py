#!/usr/bin/env python3
"""Sweep the twelve-instance desk suite and write CSV reports.

    python3 scripts/run_desk_suite.py --out-dir runs/desk --workers 4
"""

import argparse
import sys
import time

from irdp import harness


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--out-dir", default="runs/desk")
    ap.add_argument("--master-seed", type=int, default=0)
    ap.add_argument("--num-inits", type=int, default=4)
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--list", action="store_true", help="print instance sizes and exit")
    args = ap.parse_args(argv)

    if args.list:
        from irdp.bench import instance_stats

        for spec in harness.desk_suite():
            name, problem = spec.build()
            s = instance_stats(problem)
            print(f"{name:>10}  nodes={s.nodes:<6} infosets={s.infosets:<4} {s.recall_class.value}")
        return 0

    cfg = harness.desk_experiment(args.master_seed, args.num_inits, args.workers)
    t0 = time.perf_counter()
    res = harness.sweep(cfg, args.out_dir)
    print(harness.summary_csv(res.rows, res.roster))
    print(harness.aggregate_csv(harness.aggregate(res.rows)))
    print(f"wrote {args.out_dir} in {time.perf_counter() - t0:.0f}s", file=sys.stderr)
    return 0


if __name__ == "__main__":
    sys.exit(main())
