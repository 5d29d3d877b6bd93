"""Seeded generators for the three benchmark families.

* simulation problems: an agent is tested in simulated scenarios it cannot
  tell apart from deployment;
* subgroup detection: an agent probes graph vertices, remembers hits and
  forgets misses;
* random problems: trees grown top-down with a depth-dependent stopping rule.

All randomness goes through ``numpy.random.default_rng`` (PCG64), so an
instance is reproducible from (family, config, seed) alone.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import networkx as nx
import numpy as np

from .model import (
    CHANCE,
    DECISION,
    TERMINAL,
    DecisionProblem,
    InfoSet,
    Node,
    RecallClass,
    TreeBuilder,
    canonicalize,
    check,
    classify_recall,
)

DEFAULT_MAX_NODES = 5_000_000
PLACEMENT_RETRIES = 10_000


# --------------------------------------------------------------------------
# simulation problems


@dataclass
class SimulationConfig:
    scenarios: int = 1
    max_sim_rounds: int = 2
    sim_continue_prob: float = 0.8
    deploy_rounds: int = 1
    deploy_continue_prob: float = 0.5
    good_payoff: Optional[Sequence[float]] = None
    bad_payoff: Optional[Sequence[float]] = None
    caught_payoff: float = 0.0
    seed: int = 0
    max_nodes: int = DEFAULT_MAX_NODES

    def payoffs(self) -> tuple[list[float], list[float]]:
        """Per-scenario (good, bad) payoffs; missing lists are drawn from the seed."""
        rng = np.random.default_rng(self.seed)
        k = self.scenarios

        def expand(v, lo, hi):
            if v is None:
                return [float(a) for a in np.round(rng.uniform(lo, hi, size=k), 2)]
            if isinstance(v, (int, float)):
                return [float(v)] * k
            return [float(a) for a in v]

        good = expand(self.good_payoff, 0.0, 5.0)
        bad = expand(self.bad_payoff, 0.0, 10.0)
        return good, bad

    def check(self) -> None:
        if self.scenarios < 1:
            raise ValueError("scenarios must be >= 1")
        if self.max_sim_rounds < 0:
            raise ValueError("max_sim_rounds must be >= 0")
        if self.deploy_rounds < 1:
            raise ValueError("deploy_rounds must be >= 1")
        for name in ("sim_continue_prob", "deploy_continue_prob"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        good, bad = self.payoffs()
        if len(good) != self.scenarios or len(bad) != self.scenarios:
            raise ValueError("good_payoff and bad_payoff need one entry per scenario")


SIM_ACTIONS = ("good", "bad")


def gen_simulation(config: SimulationConfig) -> DecisionProblem:
    config.check()
    k, n, m = config.scenarios, config.max_sim_rounds, config.deploy_rounds
    q, q_dep = config.sim_continue_prob, config.deploy_continue_prob
    good, bad = config.payoffs()
    b = TreeBuilder(config.max_nodes)

    def deploy_node(i: int, acts: int, acc: float) -> int:
        node = b.reserve()
        children = []
        for pay in (good[i], bad[i]):
            total = acc + pay
            if acts + 1 >= m:
                children.append(b.terminal(total))
                continue
            ch = b.reserve()
            outcomes = [("stop", 1.0 - q_dep, b.terminal(total))]
            outcomes += [(f"scenario:{j}", q_dep / k, deploy_node(j, acts + 1, total)) for j in range(k)]
            b.set_chance(ch, outcomes)
            children.append(ch)
        b.set_decision(node, ("scenario", i), SIM_ACTIONS, children)
        return node

    def deployment() -> int:
        if k == 1:
            return deploy_node(0, 0, 0.0)
        ch = b.reserve()
        b.set_chance(ch, [(f"scenario:{i}", 1.0 / k, deploy_node(i, 0, 0.0)) for i in range(k)])
        return ch

    def sim_node(i: int, done: int) -> int:
        node = b.reserve()
        cont = simulation(done + 1)
        b.set_decision(node, ("scenario", i), SIM_ACTIONS, [cont, b.terminal(config.caught_payoff)])
        return node

    def simulation(done: int) -> int:
        # budget exhausted: all remaining mass goes to deployment
        if done >= n:
            return deployment()
        ch = b.reserve()
        outcomes = [(f"simulate:{i}", q / k, sim_node(i, done)) for i in range(k)]
        outcomes.append(("deploy", 1.0 - q, deployment()))
        b.set_chance(ch, outcomes)
        return ch

    simulation(0)
    return b.build()


# --------------------------------------------------------------------------
# subgroup detection


@dataclass
class GraphSpec:
    kind: str  # "grid" | "gnp" | "gnm"
    width: int = 0
    height: int = 0
    n: int = 0
    p: float = 0.0
    m_edges: int = 0

    def check(self) -> None:
        if self.kind == "grid":
            if self.width < 1 or self.height < 1:
                raise ValueError("grid needs positive width and height")
        elif self.kind == "gnp":
            if self.n < 1 or not 0 <= self.p <= 1:
                raise ValueError("gnp needs n >= 1 and p in [0, 1]")
        elif self.kind == "gnm":
            if self.n < 1 or not 0 <= self.m_edges <= self.n * (self.n - 1) // 2:
                raise ValueError("gnm needs n >= 1 and 0 <= m_edges <= n(n-1)/2")
        else:
            raise ValueError(f"unknown graph kind {self.kind!r}")

    def build(self, seed: int) -> nx.Graph:
        self.check()
        if self.kind == "grid":
            g = nx.grid_2d_graph(self.width, self.height)
            return nx.relabel_nodes(g, {(x, y): y * self.width + x for x, y in g.nodes})
        if self.kind == "gnp":
            return nx.gnp_random_graph(self.n, self.p, seed=seed)
        return nx.gnm_random_graph(self.n, self.m_edges, seed=seed)


SHAPES = ("line", "cycle", "clique", "star")


@dataclass
class SubgroupSpec:
    shape: str
    size: int
    weight: float = 1.0

    def check(self) -> None:
        if self.shape not in SHAPES:
            raise ValueError(f"unknown subgroup shape {self.shape!r}")
        if self.size < 1:
            raise ValueError("subgroup size must be >= 1")
        if self.shape == "cycle" and self.size < 3:
            raise ValueError("cycle subgroups need size >= 3")
        if self.shape == "star" and self.size < 2:
            raise ValueError("star subgroups need size >= 2")
        if not self.weight > 0:
            raise ValueError("subgroup weight must be positive")


@dataclass
class DetectionConfig:
    graph: GraphSpec
    subgroups: list[SubgroupSpec]
    rounds: int = 2
    seed: int = 0
    placements: int = 1
    max_nodes: int = DEFAULT_MAX_NODES

    def check(self) -> None:
        self.graph.check()
        for s in self.subgroups:
            s.check()
        if self.rounds < 1:
            raise ValueError("rounds must be >= 1")
        if self.placements < 1:
            raise ValueError("placements must be >= 1")


def _try_place(g: nx.Graph, spec: SubgroupSpec, free: set, rng: np.random.Generator) -> Optional[list[int]]:
    verts = sorted(free)
    if len(verts) < spec.size:
        return None
    start = verts[rng.integers(len(verts))]
    free_nbrs = lambda v, taken: sorted(u for u in g.neighbors(v) if u in free and u not in taken)
    if spec.shape in ("line", "cycle"):
        path = [start]
        while len(path) < spec.size:
            nbrs = free_nbrs(path[-1], path)
            if not nbrs:
                return None
            path.append(nbrs[rng.integers(len(nbrs))])
        if spec.shape == "cycle" and not g.has_edge(path[-1], path[0]):
            return None
        return path
    if spec.shape == "clique":
        members = [start]
        while len(members) < spec.size:
            cands = [u for u in free_nbrs(members[-1], members) if all(g.has_edge(u, w) for w in members)]
            if not cands:
                return None
            members.append(cands[rng.integers(len(cands))])
        return members
    nbrs = free_nbrs(start, [start])
    if len(nbrs) < spec.size - 1:
        return None
    leaves = rng.choice(len(nbrs), size=spec.size - 1, replace=False)
    return [start] + [nbrs[i] for i in sorted(leaves)]


def place_subgroups(g: nx.Graph, specs: Sequence[SubgroupSpec], rng: np.random.Generator) -> list[list[int]]:
    """Disjoint random placements of every subgroup shape (rejection sampling)."""
    free = set(g.nodes)
    placed = []
    for j, spec in enumerate(specs):
        for _ in range(PLACEMENT_RETRIES):
            members = _try_place(g, spec, free, rng)
            if members is not None:
                break
        else:
            raise ValueError(f"could not place subgroup {j} ({spec.shape}, size {spec.size}) after {PLACEMENT_RETRIES} tries")
        free.difference_update(members)
        placed.append(members)
    return placed


def gen_detection(config: DetectionConfig) -> DecisionProblem:
    """Subgroup detection tree; infosets are keyed by the ordered sequence of hits.

    With ``placements > 1`` a chance root picks one of several independent
    placements uniformly, so the agent does not know where the subgroups are.
    """
    config.check()
    rng = np.random.default_rng(config.seed)
    graph = config.graph.build(int(rng.integers(2**31)))
    verts = sorted(graph.nodes)
    labels = [str(v) for v in verts]
    layouts = [place_subgroups(graph, config.subgroups, rng) for _ in range(config.placements)]
    weights = [s.weight for s in config.subgroups]
    R = config.rounds
    b = TreeBuilder(config.max_nodes)

    def subtree(layout, group_of: dict, r: int, hits: tuple) -> int:
        if r == R:
            counts = [0.0] * len(weights)
            for v in hits:
                counts[group_of[v]] += 1
            return b.terminal(math.fsum(w * c for w, c in zip(weights, counts)))
        node = b.reserve()
        children = []
        for v in verts:
            new_hit = v in group_of and v not in hits
            children.append(subtree(layout, group_of, r + 1, hits + (v,) if new_hit else hits))
        b.set_decision(node, ("hits",) + hits, labels, children)
        return node

    def placement_root(layout) -> int:
        group_of = {v: j for j, members in enumerate(layout) for v in members}
        return subtree(layout, group_of, 0, ())

    if len(layouts) == 1:
        placement_root(layouts[0])
    else:
        root = b.reserve()
        P = len(layouts)
        b.set_chance(root, [(f"placement:{i}", 1.0 / P, placement_root(L)) for i, L in enumerate(layouts)])
    return b.build()


# --------------------------------------------------------------------------
# random problems


@dataclass
class RandomConfig:
    max_depth: int = 6
    terminal_prob_base: float = 0.0
    terminal_prob_depth_slope: float = 0.12
    action_count_weights: dict = field(default_factory=lambda: {3: 1.0, 4: 1.0, 5: 1.0})
    chance_prob: float = 0.2
    infoset_exponent: float = 2.0 / 3.0
    payoff_range: tuple[float, float] = (0.0, 1.0)
    seed: int = 0
    max_nodes: int = DEFAULT_MAX_NODES

    def check(self) -> None:
        if not 1 <= self.max_depth <= 64:
            raise ValueError("max_depth must lie in [1, 64]")
        for name in ("terminal_prob_base", "chance_prob"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                raise ValueError(f"{name} must lie in [0, 1]")
        if not self.action_count_weights or any(int(k) < 1 or w < 0 for k, w in self.action_count_weights.items()):
            raise ValueError("action_count_weights needs positive counts and non-negative weights")
        if sum(self.action_count_weights.values()) <= 0:
            raise ValueError("action_count_weights must not all be zero")
        lo, hi = self.payoff_range
        if not lo <= hi:
            raise ValueError("payoff_range must be (low, high) with low <= high")

    def terminal_prob(self, depth: int) -> float:
        return min(1.0, max(0.0, self.terminal_prob_base + self.terminal_prob_depth_slope * depth))


def gen_random(config: RandomConfig) -> DecisionProblem:
    config.check()
    rng = np.random.default_rng(config.seed)
    counts = np.array(sorted(int(k) for k in config.action_count_weights), dtype=np.int64)
    probs = np.array([config.action_count_weights[k] if k in config.action_count_weights
                      else config.action_count_weights[str(k)] for k in counts], dtype=np.float64)
    probs /= probs.sum()
    lo, hi = config.payoff_range

    kinds: list[str] = []
    children: list[list[int]] = []
    chance_probs: list[tuple[float, ...]] = []
    payoffs: list[float] = []

    def grow(depth: int) -> int:
        if len(kinds) >= config.max_nodes:
            raise OverflowError(f"tree exceeds the cap of {config.max_nodes} nodes")
        i = len(kinds)
        kinds.append(TERMINAL)
        children.append([])
        chance_probs.append(())
        payoffs.append(0.0)
        if depth >= config.max_depth or rng.random() < config.terminal_prob(depth):
            payoffs[i] = float(rng.uniform(lo, hi))
            return i
        is_chance = rng.random() < config.chance_prob
        k = int(rng.choice(counts, p=probs))
        kinds[i] = CHANCE if is_chance else DECISION
        if is_chance:
            chance_probs[i] = tuple(float(p) for p in rng.dirichlet(np.ones(k)))
        children[i] = [grow(depth + 1) for _ in range(k)]
        return i

    grow(0)
    decision = [i for i, kd in enumerate(kinds) if kd == DECISION]
    buckets: dict[int, list[int]] = {}
    for i in decision:
        buckets.setdefault(len(children[i]), []).append(i)
    target = max(1, round(len(decision) ** config.infoset_exponent / max(1, len(buckets)))) if decision else 1
    infoset_of: dict[int, int] = {}
    groups: list[list[int]] = []
    for k in sorted(buckets):
        members = [buckets[k][j] for j in rng.permutation(len(buckets[k]))]
        for s in range(0, len(members), target):
            for h in members[s : s + target]:
                infoset_of[h] = len(groups)
            groups.append(sorted(members[s : s + target]))

    nodes = []
    for i, kd in enumerate(kinds):
        labels = tuple(f"a{a}" for a in range(len(children[i])))
        if kd == TERMINAL:
            nodes.append(Node.terminal(payoffs[i]))
        elif kd == CHANCE:
            nodes.append(Node(CHANCE, labels, tuple(children[i]), chance_probs[i]))
        else:
            nodes.append(Node.decision(infoset_of[i], labels, children[i]))
    infosets = [
        InfoSet(j, tuple(f"a{a}" for a in range(len(children[g[0]]))), tuple(g)) for j, g in enumerate(groups)
    ]
    return canonicalize(check(DecisionProblem(nodes, 0, infosets)))


# --------------------------------------------------------------------------
# statistics and config plumbing


@dataclass(frozen=True)
class InstanceStats:
    nodes: int
    decision: int
    chance: int
    terminal: int
    infosets: int
    max_infoset_size: int
    depth: int
    recall_class: RecallClass

    @property
    def suffix(self) -> str:
        return size_suffix(self.nodes)

    def to_json(self) -> dict:
        d = dataclasses.asdict(self)
        d["recall_class"] = self.recall_class.value
        d["suffix"] = self.suffix
        return d


def size_suffix(n: int) -> str:
    """Node-count abbreviation used in instance names (e.g. 86, 1.8k, 130k, 2.2m)."""
    if n < 1000:
        return str(n)
    if n < 10_000:
        return f"{n / 1e3:.1f}k"
    if n < 1_000_000:
        return f"{round(n / 1e3)}k"
    return f"{n / 1e6:.1f}m"


def instance_stats(problem: DecisionProblem) -> InstanceStats:
    kinds = [n.kind for n in problem.nodes]
    return InstanceStats(
        nodes=len(kinds),
        decision=kinds.count(DECISION),
        chance=kinds.count(CHANCE),
        terminal=kinds.count(TERMINAL),
        infosets=len(problem.infosets),
        max_infoset_size=max((len(I.members) for I in problem.infosets), default=0),
        depth=int(problem.depths().max()) if len(problem.nodes) else 0,
        recall_class=classify_recall(problem).recall_class,
    )


FAMILIES = ("simulation", "detection", "random")


def config_from_json(family: str, doc: dict[str, Any], seed: Optional[int] = None):
    """Build a generator config from a JSON-style dict; ``seed`` overrides the document's."""
    doc = dict(doc)
    if seed is not None:
        doc["seed"] = seed
    if family == "simulation":
        return SimulationConfig(**doc)
    if family == "detection":
        doc["graph"] = GraphSpec(**doc["graph"])
        doc["subgroups"] = [SubgroupSpec(**s) for s in doc["subgroups"]]
        return DetectionConfig(**doc)
    if family == "random":
        if "action_count_weights" in doc:
            doc["action_count_weights"] = {int(k): float(v) for k, v in doc["action_count_weights"].items()}
        if "payoff_range" in doc:
            doc["payoff_range"] = tuple(doc["payoff_range"])
        return RandomConfig(**doc)
    raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")


def generate(family: str, config) -> DecisionProblem:
    if isinstance(config, dict):
        config = config_from_json(family, config)
    return {"simulation": gen_simulation, "detection": gen_detection, "random": gen_random}[family](config)
