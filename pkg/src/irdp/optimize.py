"""First-order optimizers over products of simplices.

Every infoset gets its own local optimizer exposing ``get_x(prediction)`` and
``step(gradient)``.  For speed, one optimizer object here drives all the
infosets of a problem at once on a flat vector cut into blocks by
``offsets``; the arithmetic is block-separable, so this is the same as running
independent local optimizers.  A single simplex is simply ``offsets=[0, m]``.
"""

from __future__ import annotations

import enum
import json
import time
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .evaluate import segment_gap, value_and_grad
from .model import DecisionProblem, Strategy


class Kind(str, enum.Enum):
    PGD = "PGD"
    OPTGD = "OPTGD"
    AMS = "AMS"
    RM = "RM"
    RM_PLUS = "RMPlus"
    PRM = "PRM"
    PRM_PLUS = "PRMPlus"

    @property
    def predictive(self) -> bool:
        return self in (Kind.OPTGD, Kind.PRM, Kind.PRM_PLUS)

    @property
    def regret_based(self) -> bool:
        return self in (Kind.RM, Kind.RM_PLUS, Kind.PRM, Kind.PRM_PLUS)


ALL_KINDS = tuple(Kind)


# --------------------------------------------------------------------------
# projections


def _block_ids(offsets: np.ndarray) -> np.ndarray:
    return np.repeat(np.arange(len(offsets) - 1), np.diff(offsets))


class BlockLayout:
    """Index arrays describing consecutive simplex blocks; reused across projections."""

    def __init__(self, offsets):
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.starts = self.offsets[:-1]
        self.seg = _block_ids(self.offsets)
        self.local = np.arange(int(self.offsets[-1])) - self.starts[self.seg]
        self.local_plus_one = (self.local + 1).astype(np.float64)


def project_blocks(v: np.ndarray, offsets, weights: Optional[np.ndarray] = None) -> np.ndarray:
    """Project each block of ``v`` onto its simplex under a diagonal weighted norm.

    Solves ``min_y sum_i w_i (y_i - v_i)^2`` s.t. ``y >= 0, sum y = 1`` per block.
    The solution is ``y_i = max(0, v_i + tau / w_i)``; activating coordinates in
    decreasing order of ``v_i w_i`` gives the threshold in closed form.
    ``offsets`` may be a precomputed :class:`BlockLayout`.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.size == 0:
        return v.copy()
    lay = offsets if isinstance(offsets, BlockLayout) else BlockLayout(offsets)
    seg, starts = lay.seg, lay.starts
    if weights is None:
        order = np.lexsort((-v, seg))
        vs = v[order]
        cs_v = np.cumsum(vs)
        cs_v -= np.concatenate([[0.0], cs_v])[starts][seg]
        tau = (1.0 - cs_v) / lay.local_plus_one
        ok = vs + tau > 0
        inv_w = 1.0
    else:
        w = np.asarray(weights, dtype=np.float64)
        order = np.lexsort((-(v * w), seg))
        vs, inv_ws = v[order], 1.0 / w[order]
        cs_v = np.cumsum(vs)
        cs_iw = np.cumsum(inv_ws)
        cs_v -= np.concatenate([[0.0], cs_v])[starts][seg]
        cs_iw -= np.concatenate([[0.0], cs_iw])[starts][seg]
        tau = (1.0 - cs_v) / cs_iw
        ok = vs + tau * inv_ws > 0
        inv_w = 1.0 / w
    rho = np.maximum.reduceat(np.where(ok, lay.local, 0), starts)
    tau_block = tau[starts + rho]
    y = np.maximum(v + tau_block[seg] * inv_w, 0.0)
    return y / np.add.reduceat(y, starts)[seg]


def project_simplex_euclidean(v: Sequence[float]) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("expected a non-empty vector")
    if not np.all(np.isfinite(v)):
        raise ValueError("vector has non-finite entries")
    return project_blocks(v, np.array([0, v.size]))


def project_simplex_weighted(v: Sequence[float], w: Sequence[float]) -> np.ndarray:
    v = np.asarray(v, dtype=np.float64)
    w = np.asarray(w, dtype=np.float64)
    if v.ndim != 1 or v.size == 0:
        raise ValueError("expected a non-empty vector")
    if w.shape != v.shape:
        raise ValueError("weights and vector differ in shape")
    if np.any(~(w > 0)):
        raise ValueError("weights must be strictly positive")
    return project_blocks(v, np.array([0, v.size]), w)


# --------------------------------------------------------------------------
# local optimizers


def _block_dot(a: np.ndarray, b: np.ndarray, offsets: np.ndarray, seg: np.ndarray) -> np.ndarray:
    return np.add.reduceat(a * b, offsets[:-1])[seg]


class LocalOptimizer:
    predictive = False

    def __init__(self, offsets, x0):
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.layout = BlockLayout(self.offsets)
        self.seg = self.layout.seg
        self.x = np.array(x0, dtype=np.float64)

    def get_x(self, prediction: Optional[np.ndarray] = None) -> np.ndarray:
        raise NotImplementedError

    def step(self, u: np.ndarray) -> None:
        raise NotImplementedError


class ProjectedGradient(LocalOptimizer):
    """(Optimistic) projected gradient ascent around an anchor point."""

    def __init__(self, offsets, x0, eta: float, optimistic: bool = False):
        super().__init__(offsets, x0)
        self.eta = float(eta)
        self.predictive = optimistic
        self.anchor = self.x.copy()

    def get_x(self, prediction=None):
        if prediction is None or not np.any(prediction):
            self.x = self.anchor.copy()
        else:
            self.x = project_blocks(self.anchor + self.eta * prediction, self.layout)
        return self.x

    def step(self, u):
        self.anchor = project_blocks(self.anchor + self.eta * u, self.layout)


class AMSGrad(LocalOptimizer):
    def __init__(
        self,
        offsets,
        x0,
        eta: float,
        beta1: float = 0.9,
        beta2: float = 0.999,
        div_epsilon: float = 1e-8,
        sqrt_divisor: bool = True,
    ):
        super().__init__(offsets, x0)
        self.eta, self.beta1, self.beta2 = float(eta), float(beta1), float(beta2)
        self.div_epsilon = float(div_epsilon)
        self.sqrt_divisor = sqrt_divisor
        self.m = np.zeros_like(self.x)
        self.v = np.zeros_like(self.x)
        self.v_hat = np.zeros_like(self.x)

    def get_x(self, prediction=None):
        return self.x

    def step(self, u):
        self.m = self.beta1 * self.m + (1 - self.beta1) * u
        self.v = self.beta2 * self.v + (1 - self.beta2) * u * u
        np.maximum(self.v_hat, self.v, out=self.v_hat)
        root = np.sqrt(self.v_hat)
        denom = (root if self.sqrt_divisor else self.v_hat) + self.div_epsilon
        # coordinates that never saw a gradient get weight div_epsilon, not 0
        self.x = project_blocks(self.x + self.eta * self.m / denom, self.layout, root + self.div_epsilon)


class RegretMatching(LocalOptimizer):
    """RM / RM+ and their predictive variants on the current iterate."""

    def __init__(self, offsets, x0, plus: bool = False, predictive: bool = False):
        super().__init__(offsets, x0)
        self.plus = plus
        self.predictive = predictive
        self.regrets = np.zeros_like(self.x)

    def get_x(self, prediction=None):
        theta = self.regrets
        if prediction is not None and np.any(prediction):
            theta = theta + prediction - _block_dot(prediction, self.x, self.offsets, self.seg)
        theta = np.maximum(theta, 0.0)
        norms = np.add.reduceat(theta, self.offsets[:-1]) if theta.size else np.zeros(0)
        live = norms > 0
        if np.all(live):
            self.x = theta / norms[self.seg]
        else:
            mask = live[self.seg]
            x = self.x.copy()
            x[mask] = theta[mask] / norms[self.seg][mask]
            self.x = x
        return self.x

    def step(self, u):
        self.regrets = self.regrets + u - _block_dot(u, self.x, self.offsets, self.seg)
        if self.plus:
            np.maximum(self.regrets, 0.0, out=self.regrets)


# --------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class OptimizerConfig:
    kind: Kind
    learning_rate: Optional[float] = None
    beta1: Optional[float] = None
    beta2: Optional[float] = None
    div_epsilon: Optional[float] = None
    ams_sqrt_divisor: bool = True

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        k = self.kind
        if k.regret_based:
            if any(p is not None for p in (self.learning_rate, self.beta1, self.beta2, self.div_epsilon)):
                raise ValueError(f"{k.value} is parameter-free; step-size parameters are not accepted")
            return
        if self.learning_rate is None or not self.learning_rate > 0:
            raise ValueError(f"{k.value} needs a learning rate > 0")
        if k != Kind.AMS and any(p is not None for p in (self.beta1, self.beta2, self.div_epsilon)):
            raise ValueError(f"beta1/beta2/div_epsilon only apply to AMS, not {k.value}")
        if k == Kind.AMS:
            for name in ("beta1", "beta2"):
                b = getattr(self, name)
                if b is not None and not 0 <= b < 1:
                    raise ValueError(f"{name} must lie in [0, 1)")
            if self.div_epsilon is not None and self.div_epsilon < 0:
                raise ValueError("div_epsilon must be >= 0")

    @property
    def label(self) -> str:
        if self.kind.regret_based:
            return self.kind.value
        if self.kind == Kind.AMS:
            return f"AMS(eta={self.learning_rate:g},b1={self._b1:g},b2={self._b2:g})"
        return f"{self.kind.value}(eta={self.learning_rate:g})"

    @property
    def _b1(self) -> float:
        return 0.9 if self.beta1 is None else self.beta1

    @property
    def _b2(self) -> float:
        return 0.999 if self.beta2 is None else self.beta2

    def to_json(self) -> dict:
        out = {"kind": self.kind.value}
        for name in ("learning_rate", "beta1", "beta2", "div_epsilon"):
            if getattr(self, name) is not None:
                out[name] = getattr(self, name)
        if self.kind == Kind.AMS and not self.ams_sqrt_divisor:
            out["ams_sqrt_divisor"] = False
        return out

    def build(self, offsets, x0) -> LocalOptimizer:
        k = self.kind
        if k in (Kind.PGD, Kind.OPTGD):
            return ProjectedGradient(offsets, x0, self.learning_rate, optimistic=k == Kind.OPTGD)
        if k == Kind.AMS:
            eps = 1e-8 if self.div_epsilon is None else self.div_epsilon
            return AMSGrad(offsets, x0, self.learning_rate, self._b1, self._b2, eps, self.ams_sqrt_divisor)
        return RegretMatching(
            offsets, x0, plus=k in (Kind.RM_PLUS, Kind.PRM_PLUS), predictive=k.predictive
        )


@dataclass(frozen=True)
class TerminationCriteria:
    gap_tolerance: float = 1e-6
    max_iterations: int = 6000
    time_limit: Optional[float] = 4 * 3600.0

    def __post_init__(self):
        if not self.gap_tolerance > 0:
            raise ValueError("gap_tolerance must be positive")
        if self.max_iterations < 0:
            raise ValueError("max_iterations must be non-negative")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ValueError("time_limit must be positive")


GAP_REACHED = "GapReached"
MAX_ITERATIONS = "MaxIterations"
TIME_LIMIT = "TimeLimit"


@dataclass
class TraceRecord:
    t: int
    value: float
    gap: float
    secs: float


@dataclass
class RunTrace:
    records: list[TraceRecord]
    final_strategy: Strategy
    reason: str
    iterations: int
    value: float
    gap: float
    secs: float
    config: Optional[OptimizerConfig] = None
    iterates: Optional[list[np.ndarray]] = field(default=None, repr=False)

    @property
    def converged(self) -> bool:
        return self.reason == GAP_REACHED

    def summary(self) -> dict:
        return {
            "summary": True,
            "reason": self.reason,
            "iterations": self.iterations,
            "value": self.value,
            "gap": self.gap,
            "secs": self.secs,
            **({"config": self.config.to_json()} if self.config else {}),
        }

    def to_jsonl(self) -> str:
        lines = [json.dumps({"t": r.t, "value": r.value, "gap": r.gap, "secs": r.secs}) for r in self.records]
        lines.append(json.dumps(self.summary()))
        return "\n".join(lines) + "\n"


def uniform_random_strategy(problem: DecisionProblem, seed) -> Strategy:
    """Independent uniform draws on each simplex (normalized exponentials)."""
    rng = np.random.default_rng(seed)
    e = rng.standard_exponential(problem.num_actions)
    off = problem.offsets
    if len(off) <= 1:
        return Strategy(off, e)
    sums = np.add.reduceat(e, off[:-1])
    return Strategy(off, e / np.repeat(sums, np.diff(off)))


def run(
    problem: DecisionProblem,
    config: OptimizerConfig,
    termination: TerminationCriteria = TerminationCriteria(),
    initial_strategy: Optional[Strategy] = None,
    seed=0,
    log_every: int = 1,
    keep_iterates: bool = False,
) -> RunTrace:
    """Run the per-infoset template until the first termination criterion fires.

    Iteration 0 is the initial strategy; each later iteration performs one
    ``step`` with the last gradient followed by ``get_x`` with the prediction
    (the last gradient for predictive kinds, zero otherwise).
    """
    if initial_strategy is None:
        initial_strategy = uniform_random_strategy(problem, seed)
    initial_strategy.check_matches(problem)
    if not initial_strategy.is_feasible(1e-9):
        raise ValueError("initial strategy is not on the product of simplices")
    offsets = problem.offsets
    opt = config.build(offsets, initial_strategy.flat)
    predictive = config.kind.predictive
    records: list[TraceRecord] = []
    iterates = [] if keep_iterates else None

    start = time.perf_counter()
    x = opt.get_x(None)
    value, grad = value_and_grad(problem, x)
    per = segment_gap(x, grad, offsets)
    gap = float(per.max()) if per.size else 0.0
    t = 0
    records.append(TraceRecord(0, value, gap, time.perf_counter() - start))
    if keep_iterates:
        iterates.append(x.copy())
    while True:
        if gap <= termination.gap_tolerance:
            reason = GAP_REACHED
            break
        if t >= termination.max_iterations:
            reason = MAX_ITERATIONS
            break
        if termination.time_limit is not None and time.perf_counter() - start >= termination.time_limit:
            reason = TIME_LIMIT
            break
        opt.step(grad)
        t += 1
        x = opt.get_x(grad if predictive else None)
        value, grad = value_and_grad(problem, x)
        per = segment_gap(x, grad, offsets)
        gap = float(per.max()) if per.size else 0.0
        if keep_iterates:
            iterates.append(x.copy())
        if t % log_every == 0:
            records.append(TraceRecord(t, value, gap, time.perf_counter() - start))
    secs = time.perf_counter() - start
    if records[-1].t != t:
        records.append(TraceRecord(t, value, gap, secs))
    return RunTrace(
        records=records,
        final_strategy=Strategy(offsets, x.copy()),
        reason=reason,
        iterations=t,
        value=value,
        gap=gap,
        secs=secs,
        config=config,
        iterates=iterates,
    )


def iterate_sequence(problem: DecisionProblem, config: OptimizerConfig, initial_strategy: Strategy, iterations: int) -> list[np.ndarray]:
    """First ``iterations + 1`` iterates of the template with no termination checks."""
    initial_strategy.check_matches(problem)
    opt = config.build(problem.offsets, initial_strategy.flat)
    predictive = config.kind.predictive
    x = opt.get_x(None).copy()
    out = [x]
    for _ in range(iterations):
        _, grad = value_and_grad(problem, x)
        opt.step(grad)
        x = opt.get_x(grad if predictive else None).copy()
        out.append(x)
    return out
