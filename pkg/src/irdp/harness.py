"""Experiment orchestration: hyperparameter sweeps over random inits, selection,
Table-style aggregation and CSV/JSONL reporting.

A sweep runs every (instance, algorithm, hyperparameter point, init) combo.
For each algorithm the point that reaches the gap tolerance soonest (median
over inits, unconverged inits counting as infinitely slow) is selected; if no
point converges on a majority of inits, the smallest median final gap wins.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bench
from .model import DecisionProblem, load_file
from .optimize import (
    ALL_KINDS,
    GAP_REACHED,
    Kind,
    OptimizerConfig,
    TerminationCriteria,
    run,
    uniform_random_strategy,
)

VALUE_TIE_TOL = 1e-4
SELECTIONS = ("iterations", "time")


def default_grid(kind: Kind) -> list[OptimizerConfig]:
    kind = Kind(kind)
    if kind.regret_based:
        return [OptimizerConfig(kind)]
    if kind in (Kind.PGD, Kind.OPTGD):
        return [OptimizerConfig(kind, learning_rate=eta) for eta in (1.0, 0.1, 0.01, 0.001)]
    return [
        OptimizerConfig(kind, learning_rate=eta, beta1=b1, beta2=b2)
        for eta, b1, b2 in itertools.product((1.0, 0.1, 0.01), (0.8, 0.9, 0.99), (0.99, 0.999, 0.9999))
    ]


def lower_median(values: Sequence[float]) -> float:
    s = sorted(values)
    return s[(len(s) - 1) // 2]


# --------------------------------------------------------------------------
# configuration


@dataclass
class InstanceSpec:
    """Either a problem file or a generator family with its config document."""

    name: Optional[str] = None
    path: Optional[str] = None
    family: Optional[str] = None
    config: Optional[dict] = None

    def build(self) -> tuple[str, DecisionProblem]:
        if self.path is not None:
            problem = load_file(self.path)
            default = Path(self.path).stem
        elif self.family is not None:
            problem = bench.generate(self.family, bench.config_from_json(self.family, self.config or {}))
            default = {"simulation": "sim", "detection": "det", "random": "rnd"}.get(self.family, self.family)
        else:
            raise ValueError("instance needs a path or a family")
        name = self.name or f"{default}-{bench.size_suffix(len(problem.nodes))}"
        return name, problem


@dataclass
class ExperimentConfig:
    instances: list[InstanceSpec]
    roster: list[Kind] = field(default_factory=lambda: list(ALL_KINDS))
    grids: dict = field(default_factory=dict)  # Kind -> list[OptimizerConfig]; missing kinds use defaults
    termination: TerminationCriteria = field(default_factory=TerminationCriteria)
    num_inits: int = 12
    master_seed: int = 0
    log_every: int = 1
    workers: int = 1
    selection: str = "iterations"

    def __post_init__(self):
        self.roster = [Kind(k) for k in self.roster]
        self.grids = {Kind(k): list(v) for k, v in self.grids.items()}
        if self.num_inits < 1:
            raise ValueError("num_inits must be >= 1")
        if not self.roster:
            raise ValueError("roster must not be empty")
        if self.selection not in SELECTIONS:
            raise ValueError(f"selection must be one of {SELECTIONS}")
        for k in self.roster:
            if not self.grid(k):
                raise ValueError(f"empty hyperparameter grid for {k.value}")

    def grid(self, kind: Kind) -> list[OptimizerConfig]:
        return self.grids[kind] if kind in self.grids else default_grid(kind)

    @classmethod
    def from_json(cls, doc: dict) -> "ExperimentConfig":
        doc = dict(doc)
        doc["instances"] = [InstanceSpec(**d) for d in doc["instances"]]
        if "grids" in doc:
            doc["grids"] = {
                Kind(k): [OptimizerConfig(kind=Kind(k), **{a: b for a, b in p.items() if a != "kind"}) for p in pts]
                for k, pts in doc["grids"].items()
            }
        if "termination" in doc:
            doc["termination"] = TerminationCriteria(**doc["termination"])
        return cls(**doc)


def init_seed(master_seed: int, instance: int, init: int) -> int:
    """Seed of init ``init`` on instance ``instance``; shared by all algorithms."""
    return int(np.random.SeedSequence([master_seed, instance, init]).generate_state(1)[0])


# --------------------------------------------------------------------------
# running


@dataclass
class RunResult:
    seed: int
    reason: str
    iterations: int
    value: float
    gap: float
    secs: float
    curve: np.ndarray  # rows (t, value, gap)

    @property
    def converged(self) -> bool:
        return self.reason == GAP_REACHED


@dataclass
class ConfigResult:
    config: OptimizerConfig
    runs: list[RunResult]

    @property
    def median_value(self) -> float:
        return lower_median([r.value for r in self.runs])

    @property
    def median_gap(self) -> float:
        return lower_median([r.gap for r in self.runs])

    @property
    def median_iterations(self) -> float:
        return lower_median([r.iterations if r.converged else math.inf for r in self.runs])

    @property
    def median_secs(self) -> float:
        return lower_median([r.secs if r.converged else math.inf for r in self.runs])

    def speed(self, selection: str) -> float:
        return self.median_iterations if selection == "iterations" else self.median_secs


@dataclass
class AlgorithmResult:
    kind: Kind
    selected: ConfigResult
    candidates: list[ConfigResult]

    @property
    def converged(self) -> bool:
        return math.isfinite(self.selected.median_secs)


@dataclass
class SummaryRow:
    instance: str
    results: dict  # Kind -> AlgorithmResult

    def value(self, kind: Kind) -> float:
        return self.results[kind].selected.median_value

    def time(self, kind: Kind) -> Optional[float]:
        s = self.results[kind].selected.median_secs
        return s if math.isfinite(s) else None


@dataclass
class SweepResult:
    rows: list[SummaryRow]
    roster: list[Kind]


def select(candidates: list[ConfigResult], selection: str = "iterations") -> ConfigResult:
    """Fastest median convergence; else smallest median final gap; grid order breaks ties."""
    speeds = [c.speed(selection) for c in candidates]
    if any(math.isfinite(s) for s in speeds):
        return candidates[int(np.argmin(speeds))]
    return candidates[int(np.argmin([c.median_gap for c in candidates]))]


_PROBLEMS: list[DecisionProblem] = []


def _init_worker(problems):
    global _PROBLEMS
    _PROBLEMS = problems


def _run_one(args) -> RunResult:
    idx, config, seed, termination, log_every, trace_path = args
    problem = _PROBLEMS[idx]
    trace = run(problem, config, termination, uniform_random_strategy(problem, seed), log_every=log_every)
    if trace_path is not None:
        trace_path.parent.mkdir(parents=True, exist_ok=True)
        trace_path.write_text(trace.to_jsonl())
    curve = np.array([(r.t, r.value, r.gap) for r in trace.records], dtype=np.float64)
    return RunResult(seed, trace.reason, trace.iterations, trace.value, trace.gap, trace.secs, curve)


def sweep(config: ExperimentConfig, out_dir: Optional[str] = None, problems: Optional[list] = None) -> SweepResult:
    """Run the full protocol; optionally pass pre-built ``(name, problem)`` pairs."""
    if problems is None:
        problems = [spec.build() for spec in config.instances]
    names = [n for n, _ in problems]
    if len(set(names)) != len(names):
        raise ValueError(f"instance names must be unique, got {names}")
    if out_dir is not None:
        _make_dir(out_dir)
    tasks = []
    for i, (name, _) in enumerate(problems):
        for kind in config.roster:
            for cfg in config.grid(kind):
                for j in range(config.num_inits):
                    path = None
                    if out_dir is not None:
                        path = Path(out_dir) / "traces" / _safe(name) / _safe(cfg.label) / f"init{j:02d}.jsonl"
                    tasks.append((i, cfg, init_seed(config.master_seed, i, j), config.termination, config.log_every, path))
    plain = [p for _, p in problems]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers, initializer=_init_worker, initargs=(plain,)) as pool:
            results = list(pool.map(_run_one, tasks, chunksize=max(1, len(tasks) // (8 * config.workers))))
    else:
        _init_worker(plain)
        results = [_run_one(t) for t in tasks]

    rows = []
    it = iter(results)
    for i, (name, _) in enumerate(problems):
        per_kind = {}
        for kind in config.roster:
            cands = [ConfigResult(cfg, [next(it) for _ in range(config.num_inits)]) for cfg in config.grid(kind)]
            per_kind[kind] = AlgorithmResult(kind, select(cands, config.selection), cands)
        rows.append(SummaryRow(name, per_kind))
    result = SweepResult(rows, list(config.roster))
    if out_dir is not None:
        report(result, out_dir)
    return result


# --------------------------------------------------------------------------
# aggregation


def average_ranks(keys: Sequence[float], tol: float = 0.0) -> list[float]:
    """Ranks for ascending ``keys``; entries chained within ``tol`` share the mean rank."""
    order = sorted(range(len(keys)), key=lambda i: keys[i])
    ranks = [0.0] * len(keys)
    start = 0
    while start < len(order):
        end = start + 1
        # equality first so that infinite keys (unconverged) tie with each other
        while end < len(order) and (keys[order[end]] == keys[order[start]] or keys[order[end]] - keys[order[start]] <= tol):
            end += 1
        for i in order[start:end]:
            ranks[i] = (start + 1 + end) / 2.0
        start = end
    return ranks


@dataclass
class AggregateRow:
    kind: Kind
    pct_best_value: float
    avg_value_rank: float
    pct_converged: float
    pct_best_convergence: float
    avg_convergence_rank: float


def aggregate_values(
    values: Sequence[dict], times: Sequence[dict], tol: float = VALUE_TIE_TOL
) -> list[AggregateRow]:
    """Table-1-style statistics from per-instance ``{kind: value}`` and ``{kind: secs or None}``."""
    if not values:
        raise ValueError("aggregate needs at least one instance")
    kinds = list(values[0])
    if len(kinds) < 2:
        raise ValueError("aggregate needs at least two algorithms")
    n = len(values)
    best_v = dict.fromkeys(kinds, 0)
    rank_v = dict.fromkeys(kinds, 0.0)
    conv = dict.fromkeys(kinds, 0)
    best_c = dict.fromkeys(kinds, 0)
    rank_c = dict.fromkeys(kinds, 0.0)
    for vals, secs in zip(values, times):
        # higher value is better; rank on negated values
        rv = average_ranks([-vals[k] for k in kinds], tol)
        for k, r in zip(kinds, rv):
            rank_v[k] += r
        top = min(rv)
        for k, r in zip(kinds, rv):
            best_v[k] += r == top
        keys = [secs[k] if secs[k] is not None else math.inf for k in kinds]
        rc = average_ranks(keys)
        fastest = min(keys)
        for k, r, s in zip(kinds, rc, keys):
            rank_c[k] += r
            conv[k] += math.isfinite(s)
            best_c[k] += math.isfinite(s) and s == fastest
    return [
        AggregateRow(k, 100.0 * best_v[k] / n, rank_v[k] / n, 100.0 * conv[k] / n, 100.0 * best_c[k] / n, rank_c[k] / n)
        for k in kinds
    ]


def aggregate(rows: Sequence[SummaryRow], tol: float = VALUE_TIE_TOL) -> list[AggregateRow]:
    if not rows:
        raise ValueError("aggregate needs at least one instance")
    kinds = list(rows[0].results)
    return aggregate_values(
        [{k: r.value(k) for k in kinds} for r in rows], [{k: r.time(k) for k in kinds} for r in rows], tol
    )


# --------------------------------------------------------------------------
# reporting


def _fmt(v: float) -> str:
    return repr(float(v))


def summary_csv(rows: Sequence[SummaryRow], roster: Sequence[Kind]) -> str:
    """Per-instance value/time/gap columns; time only if converged, gap only if not."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance"] + [f"{k.value} {c}" for k in roster for c in ("value", "time", "gap")])
    for row in rows:
        out = [row.instance]
        for k in roster:
            sel = row.results[k].selected
            t = row.time(k)
            out += [f"{sel.median_value:.6f}", "---" if t is None else f"{t:.4f}", "---" if t is not None else f"{sel.median_gap:.3e}"]
        w.writerow(out)
    return buf.getvalue()


def values_csv(rows: Sequence[SummaryRow], roster: Sequence[Kind]) -> str:
    """Timing-free selection results (deterministic for a fixed master seed)."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["instance", "algorithm", "config", "median_value", "median_gap", "converged_inits", "median_iterations"])
    for row in rows:
        for k in roster:
            sel = row.results[k].selected
            it = sel.median_iterations
            w.writerow([
                row.instance, k.value, sel.config.label, _fmt(sel.median_value), _fmt(sel.median_gap),
                sum(r.converged for r in sel.runs), "---" if not math.isfinite(it) else int(it),
            ])
    return buf.getvalue()


def aggregate_csv(agg: Sequence[AggregateRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["algorithm", "pct_best_value", "avg_value_rank", "pct_converged", "pct_best_convergence", "avg_convergence_rank"])
    for a in agg:
        w.writerow([a.kind.value, f"{a.pct_best_value:.1f}", f"{a.avg_value_rank:.3f}", f"{a.pct_converged:.1f}",
                    f"{a.pct_best_convergence:.1f}", f"{a.avg_convergence_rank:.3f}"])
    return buf.getvalue()


BAND_HEADER = ["t", "value_min", "value_median", "value_max", "gap_min", "gap_median", "gap_max"]


def band_csv(curves: Sequence[np.ndarray]) -> str:
    """Best/median/worst band over inits; finished runs hold their last record."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(BAND_HEADER)
    curves = [c for c in curves if len(c)]
    if not curves:
        return buf.getvalue()
    ts = np.unique(np.concatenate([c[:, 0] for c in curves]))
    # index of the last record at or before each t, per run
    pos = [np.clip(np.searchsorted(c[:, 0], ts, side="right") - 1, 0, None) for c in curves]
    vals = np.stack([c[p, 1] for c, p in zip(curves, pos)])
    gaps = np.stack([c[p, 2] for c, p in zip(curves, pos)])
    lo = (vals.shape[0] - 1) // 2
    vs, gs = np.sort(vals, axis=0), np.sort(gaps, axis=0)
    for k, t in enumerate(ts):
        w.writerow([int(t), _fmt(vs[0, k]), _fmt(vs[lo, k]), _fmt(vs[-1, k]), _fmt(gs[0, k]), _fmt(gs[lo, k]), _fmt(gs[-1, k])])
    return buf.getvalue()


def _safe(name: str) -> str:
    return "".join(c if c.isalnum() or c in "-_.=," else "_" for c in name)


def _make_dir(out_dir) -> Path:
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as e:
        raise OSError(f"cannot create output directory {out_dir}: {e}") from e
    return out


def report(result: SweepResult, out_dir: str) -> None:
    """Write summary, values, aggregate and band CSVs (traces are written by the runs)."""
    out = _make_dir(out_dir)
    roster = result.roster
    (out / "summary.csv").write_text(summary_csv(result.rows, roster))
    (out / "values.csv").write_text(values_csv(result.rows, roster))
    if len(result.rows) >= 1 and len(roster) >= 2:
        (out / "aggregate.csv").write_text(aggregate_csv(aggregate(result.rows)))
    for row in result.rows:
        bands = out / "bands" / _safe(row.instance)
        bands.mkdir(parents=True, exist_ok=True)
        for k in roster:
            alg = row.results[k]
            (bands / f"{k.value}.csv").write_text(band_csv([r.curve for r in alg.selected.runs]))


# --------------------------------------------------------------------------
# desk-scale suite


def desk_suite() -> list[InstanceSpec]:
    """Twelve fixed-seed instances, four per family, between 1e3 and 2e5 nodes."""
    sim = [
        dict(scenarios=1, max_sim_rounds=40, deploy_rounds=3, seed=11),
        dict(scenarios=1, max_sim_rounds=60, deploy_rounds=4, seed=12),
        dict(scenarios=2, max_sim_rounds=5, deploy_rounds=3, seed=13),
        dict(scenarios=3, max_sim_rounds=4, deploy_rounds=2, seed=14),
    ]
    det = [
        dict(graph=dict(kind="grid", width=3, height=3), subgroups=[dict(shape="line", size=2), dict(shape="star", size=3, weight=2.0)], rounds=4, seed=21),
        dict(graph=dict(kind="grid", width=2, height=3), subgroups=[dict(shape="cycle", size=4)], rounds=4, seed=22),
        dict(graph=dict(kind="gnp", n=8, p=0.4), subgroups=[dict(shape="clique", size=3)], rounds=4, seed=23),
        dict(graph=dict(kind="gnm", n=10, m_edges=20), subgroups=[dict(shape="cycle", size=4), dict(shape="line", size=2, weight=0.5)], rounds=3, seed=24, placements=2),
    ]
    rnd = [dict(max_depth=8, terminal_prob_depth_slope=0.08, seed=30 + i) for i in range(4)]
    specs = [InstanceSpec(family="simulation", config=c) for c in sim]
    specs += [InstanceSpec(family="detection", config=c) for c in det]
    specs += [InstanceSpec(family="random", config=c) for c in rnd]
    return specs


def desk_experiment(master_seed: int = 0, num_inits: int = 4, workers: int = 1) -> ExperimentConfig:
    return ExperimentConfig(instances=desk_suite(), num_inits=num_inits, master_seed=master_seed, workers=workers)
