"""Exact evaluation of strategies: reach probabilities, utilities, gradients, CDT gaps.

The tree is compiled once into breadth-first arrays.  Reach probabilities flow
down level by level; continuation values flow up with a segmented sum (the
children of a node are contiguous in BFS order).  The gradient entry for
action ``a`` at infoset ``I`` is ``sum_{h in I} P(h|x) U(x|ha)``, which is the
partial derivative of the utility polynomial even under absentmindedness.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .model import CHANCE, DECISION, TERMINAL, DecisionProblem, Strategy

PURE_ENUMERATION_CAP = 10**7
GRID_MAX_FREE_DIMS = 4


class _Compiled:
    def __init__(self, problem: DecisionProblem):
        nodes = problem.nodes
        offsets = problem.offsets
        order = [problem.root]
        head = 0
        while head < len(order):
            order.extend(nodes[order[head]].children)
            head += 1
        n = len(order)
        pos = np.empty(len(nodes), dtype=np.int64)
        pos[np.asarray(order)] = np.arange(n)
        depth = np.zeros(n, dtype=np.int64)
        parent = np.full(n, -1, dtype=np.int64)
        base_w = np.ones(n)
        slot = np.full(n, -1, dtype=np.int64)
        payoff = np.zeros(n)
        is_internal = np.zeros(n, dtype=bool)
        for k, i in enumerate(order):
            node = nodes[i]
            if node.kind == TERMINAL:
                payoff[k] = node.payoff
                continue
            is_internal[k] = True
            for a, c in enumerate(node.children):
                kc = pos[c]
                parent[kc] = k
                depth[kc] = depth[k] + 1
                if node.kind == CHANCE:
                    base_w[kc] = node.probs[a]
                else:
                    slot[kc] = offsets[node.infoset] + a
        self.order = np.asarray(order, dtype=np.int64)
        self.n = n
        self.parent = parent
        self.base_w = base_w
        self.payoff = payoff
        self.num_actions = problem.num_actions
        self.dec_children = np.flatnonzero(slot >= 0)
        self.dec_slot = slot[self.dec_children]
        self.dec_parent = parent[self.dec_children]
        bounds = np.flatnonzero(np.diff(depth)) + 1
        starts = np.concatenate([[0], bounds])
        ends = np.concatenate([bounds, [n]])
        self.levels = []  # (start, end, parents slice info) for levels >= 1
        for s, e in zip(starts[1:], ends[1:]):
            par = parent[s:e]
            # first child index (relative to s) of each distinct parent, in order
            change = np.flatnonzero(np.diff(par)) + 1
            group_starts = np.concatenate([[0], change]).astype(np.int64)
            self.levels.append((int(s), int(e), par, par[group_starts], group_starts))

    def weights(self, x: np.ndarray) -> np.ndarray:
        w = np.empty((self.n,) + x.shape[1:])
        w[...] = self.base_w.reshape((-1,) + (1,) * (x.ndim - 1))
        w[self.dec_children] = x[self.dec_slot]
        return w

    def reach(self, w: np.ndarray) -> np.ndarray:
        r = np.empty_like(w)
        r[0] = 1.0
        for s, e, par, _, _ in self.levels:
            r[s:e] = r[par] * w[s:e]
        return r

    def cont(self, w: np.ndarray) -> np.ndarray:
        c = np.empty_like(w)
        c[...] = self.payoff.reshape((-1,) + (1,) * (w.ndim - 1))
        for s, e, _, parents, group_starts in reversed(self.levels):
            c[parents] = np.add.reduceat(w[s:e] * c[s:e], group_starts, axis=0)
        return c

    def grad_from(self, r: np.ndarray, c: np.ndarray) -> np.ndarray:
        return np.bincount(
            self.dec_slot, weights=r[self.dec_parent] * c[self.dec_children], minlength=self.num_actions
        )


def compiled(problem: DecisionProblem) -> _Compiled:
    comp = problem._cache.get("compiled")
    if comp is None:
        comp = problem._cache["compiled"] = _Compiled(problem)
    return comp


def _flat(problem: DecisionProblem, strategy) -> np.ndarray:
    if isinstance(strategy, Strategy):
        strategy.check_matches(problem)
        return strategy.flat
    x = np.asarray(strategy, dtype=np.float64)
    if x.shape[0] != problem.num_actions:
        raise ValueError(f"strategy has {x.shape[0]} entries, problem has {problem.num_actions} actions")
    return x


def value_and_grad(problem: DecisionProblem, x: np.ndarray) -> tuple[float, np.ndarray]:
    """Utility and flat gradient at flat strategy ``x`` (two linear passes)."""
    comp = compiled(problem)
    w = comp.weights(np.asarray(x, dtype=np.float64))
    r = comp.reach(w)
    c = comp.cont(w)
    return float(c[0]), comp.grad_from(r, c)


def batch_values(problem: DecisionProblem, xs: np.ndarray) -> np.ndarray:
    """Utilities of many flat strategies at once; ``xs`` has shape (num_actions, B)."""
    comp = compiled(problem)
    return comp.cont(comp.weights(np.asarray(xs, dtype=np.float64)))[0]


def segment_gap(x: np.ndarray, g: np.ndarray, offsets: np.ndarray) -> np.ndarray:
    """Per-block ``max_a g_a - <x, g>``, clipped at zero."""
    if len(offsets) <= 1:
        return np.zeros(0)
    starts = offsets[:-1]
    gap = np.maximum.reduceat(g, starts) - np.add.reduceat(x * g, starts)
    return np.maximum(gap, 0.0)


# --------------------------------------------------------------------------
# public API


@dataclass
class EvalReport:
    reach: np.ndarray
    cont: np.ndarray
    value: float
    grad_flat: np.ndarray
    offsets: np.ndarray
    gap: float
    per_infoset_gap: np.ndarray

    def grad(self, infoset: int) -> np.ndarray:
        return self.grad_flat[self.offsets[infoset] : self.offsets[infoset + 1]]

    def to_json(self, include_grad: bool = False) -> dict:
        out = {"value": self.value, "gap": self.gap, "per_infoset_gap": self.per_infoset_gap.tolist()}
        if include_grad:
            out["grad"] = [self.grad(i).tolist() for i in range(len(self.offsets) - 1)]
        return out


def evaluate(problem: DecisionProblem, strategy) -> EvalReport:
    x = _flat(problem, strategy)
    comp = compiled(problem)
    w = comp.weights(np.asarray(x, dtype=np.float64))
    r = comp.reach(w)
    c = comp.cont(w)
    g = comp.grad_from(r, c)
    per = segment_gap(x, g, problem.offsets)
    reach = np.empty(comp.n)
    cont = np.empty(comp.n)
    reach[comp.order] = r
    cont[comp.order] = c
    return EvalReport(
        reach=reach,
        cont=cont,
        value=float(c[0]),
        grad_flat=g,
        offsets=problem.offsets,
        gap=float(per.max()) if per.size else 0.0,
        per_infoset_gap=per,
    )


def reach_probabilities(problem: DecisionProblem, strategy) -> np.ndarray:
    """``P(h|x)`` for every node id."""
    comp = compiled(problem)
    r = comp.reach(comp.weights(_flat(problem, strategy)))
    out = np.empty(comp.n)
    out[comp.order] = r
    return out


def continuation_values(problem: DecisionProblem, strategy) -> np.ndarray:
    """``U(x|h)`` for every node id."""
    comp = compiled(problem)
    c = comp.cont(comp.weights(_flat(problem, strategy)))
    out = np.empty(comp.n)
    out[comp.order] = c
    return out


def expected_utility(problem: DecisionProblem, strategy) -> float:
    comp = compiled(problem)
    return float(comp.cont(comp.weights(_flat(problem, strategy)))[0])


def gradient(problem: DecisionProblem, strategy) -> list[np.ndarray]:
    """Per-infoset partial derivatives of the utility."""
    _, g = value_and_grad(problem, _flat(problem, strategy))
    off = problem.offsets
    return [g[off[i] : off[i + 1]] for i in range(len(problem.infosets))]


def cdt_deviation_utility(problem: DecisionProblem, strategy, infoset: int, alpha) -> float:
    x = _flat(problem, strategy)
    lo, hi = problem.offsets[infoset], problem.offsets[infoset + 1]
    alpha = np.asarray(alpha, dtype=np.float64)
    if alpha.shape != (hi - lo,):
        raise ValueError(f"alpha has {alpha.size} entries, infoset {infoset} has {hi - lo} actions")
    value, g = value_and_grad(problem, x)
    return value + float(np.dot(alpha - x[lo:hi], g[lo:hi]))


def cdt_gap(problem: DecisionProblem, strategy) -> tuple[float, np.ndarray]:
    x = _flat(problem, strategy)
    _, g = value_and_grad(problem, x)
    per = segment_gap(x, g, problem.offsets)
    return (float(per.max()) if per.size else 0.0), per


# --------------------------------------------------------------------------
# brute-force oracles


def oracle_pure_enumeration(problem: DecisionProblem, cap: int = PURE_ENUMERATION_CAP) -> tuple[float, Strategy]:
    """Best pure strategy by exhaustive enumeration.

    Globally optimal only for problems without absentmindedness.
    """
    counts = [int(k) for k in problem.action_counts]
    total = math.prod(counts)
    if total > cap:
        raise ValueError(f"{total} pure strategies exceed the enumeration cap {cap}")
    best_value, best_choice = -math.inf, None
    chunk = 4096
    it = itertools.product(*(range(k) for k in counts))
    starts = problem.offsets[:-1]
    while True:
        choices = list(itertools.islice(it, chunk))
        if not choices:
            break
        xs = np.zeros((problem.num_actions, len(choices)))
        idx = starts[None, :] + np.asarray(choices, dtype=np.int64).reshape(len(choices), len(counts))
        xs[idx.T, np.arange(len(choices))[None, :]] = 1.0
        vals = batch_values(problem, xs)
        k = int(np.argmax(vals))
        if vals[k] > best_value:
            best_value, best_choice = float(vals[k]), choices[k]
    return best_value, Strategy.pure(problem, best_choice)


def _simplex_grid(k: int, resolution: int) -> np.ndarray:
    """All points of the k-simplex with coordinates in multiples of 1/resolution."""
    if k == 1:
        return np.ones((1, 1))
    pts = []
    for comp in itertools.combinations(range(resolution + k - 1), k - 1):
        bars = (-1,) + comp + (resolution + k - 1,)
        pts.append([bars[i + 1] - bars[i] - 1 for i in range(k)])
    return np.asarray(pts, dtype=np.float64) / resolution


def oracle_grid_search(problem: DecisionProblem, resolution: int) -> float:
    """Max utility over a uniform grid of the product of simplices."""
    free = int(sum(int(k) - 1 for k in problem.action_counts))
    if free > GRID_MAX_FREE_DIMS:
        raise ValueError(f"{free} free dimensions exceed the grid-search cap of {GRID_MAX_FREE_DIMS}")
    grids = [_simplex_grid(int(k), resolution) for k in problem.action_counts]
    best = -math.inf
    if not grids:
        return expected_utility(problem, np.zeros(0))
    chunk = 1 << 14
    it = itertools.product(*(range(len(g)) for g in grids))
    while True:
        combo = list(itertools.islice(it, chunk))
        if not combo:
            break
        idx = np.asarray(combo, dtype=np.int64)
        xs = np.concatenate([grids[j][idx[:, j]] for j in range(len(grids))], axis=1)
        best = max(best, float(batch_values(problem, xs.T).max()))
    return best
