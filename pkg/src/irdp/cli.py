"""Command-line entry point: ``irdp <subcommand>`` or ``python -m irdp``.

Exit codes: 0 success, 2 invalid input (schema/validation/config), 1 other errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench, encode, harness
from .evaluate import evaluate, oracle_grid_search, oracle_pure_enumeration
from .model import ProblemFormatError, ProblemValidationError, load_file, save_file
from .optimize import ALL_KINDS, Kind, OptimizerConfig, TerminationCriteria, run, uniform_random_strategy

log = logging.getLogger("irdp")

EXIT_OK, EXIT_RUNTIME, EXIT_INVALID = 0, 1, 2


class InvalidInput(Exception):
    pass


def _read_json(path: str) -> dict:
    try:
        return json.loads(Path(path).read_text())
    except json.JSONDecodeError as e:
        raise InvalidInput(f"{path}: not valid JSON ({e})") from None


def _write_json(path: str, doc) -> None:
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n")


def cmd_generate(args) -> None:
    doc = _read_json(args.config) if args.config else {}
    try:
        cfg = bench.config_from_json(args.family, doc, seed=args.seed)
    except TypeError as e:
        raise InvalidInput(f"bad {args.family} config: {e}") from None
    problem = bench.generate(args.family, cfg)
    save_file(problem, args.out)
    stats = bench.instance_stats(problem)
    _write_json(args.out + ".stats.json", stats.to_json())
    print(f"wrote {args.out}: {stats.nodes} nodes, {stats.infosets} infosets, {stats.recall_class.value}")


def cmd_solve(args) -> None:
    problem = load_file(args.problem)
    kind = Kind(args.alg)
    kw = {}
    if args.eta is not None:
        kw["learning_rate"] = args.eta
    elif not kind.regret_based:
        kw["learning_rate"] = 0.1
    for name in ("beta1", "beta2"):
        if getattr(args, name) is not None:
            kw[name] = getattr(args, name)
    config = OptimizerConfig(kind, **kw)
    term = TerminationCriteria(args.gap_tol, args.max_iters, args.time_limit)
    trace = run(problem, config, term, uniform_random_strategy(problem, args.seed), log_every=args.log_every)
    if args.trace:
        Path(args.trace).write_text(trace.to_jsonl())
    if args.strategy_out:
        _write_json(args.strategy_out, [list(map(float, v)) for v in trace.final_strategy])
    print(json.dumps(trace.summary()))


def cmd_sweep(args) -> None:
    doc = _read_json(args.experiment)
    if args.workers is not None:
        doc["workers"] = args.workers
    if args.serial:
        doc["workers"] = 1
    try:
        config = harness.ExperimentConfig.from_json(doc)
    except (TypeError, KeyError) as e:
        raise InvalidInput(f"bad experiment config: {e!r}") from None
    result = harness.sweep(config, args.out_dir)
    sys.stdout.write(harness.summary_csv(result.rows, result.roster))


def cmd_encode(args) -> None:
    if args.poly:
        p = encode.SparsePolynomial.from_json(_read_json(args.poly))
        save_file(encode.poly_to_problem(p), args.out)
        print(f"wrote problem {args.out} ({len(p.monomials)} monomials)")
    else:
        p = encode.problem_to_poly(load_file(args.problem), cap=args.cap)
        _write_json(args.out, p.to_json())
        print(f"wrote polynomial {args.out} ({len(p.monomials)} monomials)")


def cmd_inspect(args) -> None:
    problem = load_file(args.problem)
    out = bench.instance_stats(problem).to_json()
    if args.uniform:
        from .model import Strategy

        out["uniform"] = evaluate(problem, Strategy.uniform(problem)).to_json()
    print(json.dumps(out, indent=2, sort_keys=True))


def cmd_oracle(args) -> None:
    problem = load_file(args.problem)
    if args.method == "pure":
        value, strat = oracle_pure_enumeration(problem)
        print(json.dumps({"method": "pure", "value": value, "strategy": [list(map(float, v)) for v in strat]}))
    else:
        print(json.dumps({"method": "grid", "resolution": args.resolution, "value": oracle_grid_search(problem, args.resolution)}))


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="irdp", description="Imperfect-recall decision problem solvers")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a benchmark instance")
    g.add_argument("--family", required=True, choices=bench.FAMILIES)
    g.add_argument("--config", help="generator config JSON (defaults apply if omitted)")
    g.add_argument("--seed", type=int, default=None)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="run one optimizer from one random init")
    s.add_argument("--problem", required=True)
    s.add_argument("--alg", required=True, choices=[k.value for k in ALL_KINDS])
    s.add_argument("--eta", type=float)
    s.add_argument("--beta1", type=float)
    s.add_argument("--beta2", type=float)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--gap-tol", type=float, default=1e-6)
    s.add_argument("--max-iters", type=int, default=6000)
    s.add_argument("--time-limit", type=float, default=None)
    s.add_argument("--log-every", type=int, default=1)
    s.add_argument("--trace")
    s.add_argument("--strategy-out")
    s.set_defaults(func=cmd_solve)

    w = sub.add_parser("sweep", help="run an experiment config")
    w.add_argument("--experiment", required=True)
    w.add_argument("--out-dir", required=True)
    w.add_argument("--serial", action="store_true")
    w.add_argument("--workers", type=int)
    w.set_defaults(func=cmd_sweep)

    e = sub.add_parser("encode", help="polynomial JSON <-> problem JSON")
    src = e.add_mutually_exclusive_group(required=True)
    src.add_argument("--poly", help="polynomial JSON to encode as a problem")
    src.add_argument("--problem", help="problem JSON to extract a polynomial from")
    e.add_argument("--out", required=True)
    e.add_argument("--cap", type=int, default=encode.TERMINAL_CAP)
    e.set_defaults(func=cmd_encode)

    i = sub.add_parser("inspect", help="instance statistics and recall class")
    i.add_argument("--problem", required=True)
    i.add_argument("--uniform", action="store_true", help="also evaluate the uniform strategy")
    i.set_defaults(func=cmd_inspect)

    o = sub.add_parser("oracle", help="brute-force optimum for small instances")
    o.add_argument("--problem", required=True)
    o.add_argument("--method", choices=("pure", "grid"), default="pure")
    o.add_argument("--resolution", type=int, default=100)
    o.set_defaults(func=cmd_oracle)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        args.func(args)
    except (InvalidInput, ProblemFormatError, ProblemValidationError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except ValueError as e:
        # config and parameter checks raise ValueError
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    except Exception as e:  # noqa: BLE001
        log.debug("runtime failure", exc_info=True)
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
