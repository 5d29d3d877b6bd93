"""Tree-form decision problems with imperfect recall.

A problem is a flat arena of nodes addressed by integer id.  Decision nodes
belong to exactly one information set; all members of an infoset share the
same ordered action list.  Payoffs live on terminals only.

Canonical form: node ids follow a pre-order traversal from the root, infosets
are numbered by first pre-order appearance, member lists are in pre-order and
decision children follow the infoset's action order.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

import numpy as np

FORMAT_TAG = "irdp-v1"
PROB_TOL = 1e-12

DECISION = "decision"
CHANCE = "chance"
TERMINAL = "terminal"


class ProblemFormatError(ValueError):
    """Malformed or schema-violating problem document."""


class ProblemValidationError(ValueError):
    """A structurally parseable problem breaks one or more invariants."""

    def __init__(self, violations: Sequence["Violation"]):
        self.violations = list(violations)
        lines = "; ".join(str(v) for v in self.violations[:10])
        more = f" (+{len(self.violations) - 10} more)" if len(self.violations) > 10 else ""
        super().__init__(f"{len(self.violations)} violation(s): {lines}{more}")


@dataclass(frozen=True)
class Node:
    kind: str
    labels: tuple[str, ...] = ()
    children: tuple[int, ...] = ()
    probs: tuple[float, ...] = ()
    infoset: int = -1
    payoff: float = 0.0

    @classmethod
    def decision(cls, infoset: int, labels: Sequence[str], children: Sequence[int]) -> "Node":
        return cls(DECISION, tuple(labels), tuple(children), infoset=infoset)

    @classmethod
    def chance(cls, outcomes: Iterable[tuple[str, float, int]]) -> "Node":
        outcomes = list(outcomes)
        return cls(
            CHANCE,
            tuple(o[0] for o in outcomes),
            tuple(o[2] for o in outcomes),
            tuple(float(o[1]) for o in outcomes),
        )

    @classmethod
    def terminal(cls, payoff: float) -> "Node":
        return cls(TERMINAL, payoff=float(payoff))


@dataclass(frozen=True)
class InfoSet:
    id: int
    actions: tuple[str, ...]
    members: tuple[int, ...]


class RecallClass(enum.Enum):
    PERFECT_RECALL = "PerfectRecall"
    IMPERFECT_RECALL = "ImperfectRecallWithoutAbsentmindedness"
    ABSENTMINDED = "Absentminded"


@dataclass(frozen=True)
class RecallReport:
    recall_class: RecallClass
    perfect_recall: tuple[bool, ...]
    absentminded: tuple[bool, ...]


@dataclass(frozen=True)
class Violation:
    rule: str
    where: str
    message: str

    def __str__(self) -> str:
        return f"[{self.rule}] {self.where}: {self.message}"


class DecisionProblem:
    """Immutable rooted tree of decision, chance and terminal nodes.

    ``nodes[i]`` is the node with id ``i``; ``infosets[j]`` the infoset with
    id ``j``.  The constructor does not validate; call :func:`validate`.
    """

    def __init__(self, nodes: Sequence[Node], root: int, infosets: Sequence[InfoSet]):
        self.nodes: tuple[Node, ...] = tuple(nodes)
        self.root = int(root)
        self.infosets: tuple[InfoSet, ...] = tuple(infosets)
        self._cache: dict = {}

    def __len__(self) -> int:
        return len(self.nodes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, DecisionProblem):
            return NotImplemented
        return (self.root, self.nodes, self.infosets) == (other.root, other.nodes, other.infosets)

    def __hash__(self) -> int:
        return hash((self.root, len(self.nodes), len(self.infosets)))

    def __repr__(self) -> str:
        return f"DecisionProblem(nodes={len(self.nodes)}, infosets={len(self.infosets)})"

    @property
    def action_counts(self) -> np.ndarray:
        if "action_counts" not in self._cache:
            self._cache["action_counts"] = np.array(
                [len(I.actions) for I in self.infosets], dtype=np.int64
            )
        return self._cache["action_counts"]

    @property
    def offsets(self) -> np.ndarray:
        """Start of each infoset's block in a flat strategy vector (length |I|+1)."""
        if "offsets" not in self._cache:
            off = np.zeros(len(self.infosets) + 1, dtype=np.int64)
            np.cumsum(self.action_counts, out=off[1:])
            self._cache["offsets"] = off
        return self._cache["offsets"]

    @property
    def num_actions(self) -> int:
        return int(self.offsets[-1])

    @property
    def parents(self) -> np.ndarray:
        if "parents" not in self._cache:
            parent = np.full(len(self.nodes), -1, dtype=np.int64)
            for i, n in enumerate(self.nodes):
                for c in n.children:
                    parent[c] = i
            self._cache["parents"] = parent
        return self._cache["parents"]

    def preorder(self) -> list[int]:
        if "preorder" not in self._cache:
            order, stack = [], [self.root]
            while stack:
                i = stack.pop()
                order.append(i)
                stack.extend(reversed(self.nodes[i].children))
            self._cache["preorder"] = order
        return self._cache["preorder"]

    def depths(self) -> np.ndarray:
        if "depths" not in self._cache:
            depth = np.zeros(len(self.nodes), dtype=np.int64)
            for i in self.preorder():
                for c in self.nodes[i].children:
                    depth[c] = depth[i] + 1
            self._cache["depths"] = depth
        return self._cache["depths"]

    def decision_nodes(self) -> list[int]:
        return [i for i, n in enumerate(self.nodes) if n.kind == DECISION]

    def terminal_nodes(self) -> list[int]:
        return [i for i, n in enumerate(self.nodes) if n.kind == TERMINAL]


# --------------------------------------------------------------------------
# strategies


class Strategy:
    """Behavioral strategy stored as one flat vector cut into per-infoset blocks."""

    __slots__ = ("offsets", "flat")

    def __init__(self, offsets: np.ndarray, flat: np.ndarray):
        self.offsets = np.asarray(offsets, dtype=np.int64)
        self.flat = np.asarray(flat, dtype=np.float64)
        if self.flat.shape != (int(self.offsets[-1]),):
            raise ValueError(
                f"flat strategy has shape {self.flat.shape}, expected ({int(self.offsets[-1])},)"
            )

    def __len__(self) -> int:
        return len(self.offsets) - 1

    def __getitem__(self, infoset: int) -> np.ndarray:
        return self.flat[self.offsets[infoset] : self.offsets[infoset + 1]]

    def __iter__(self):
        return (self[i] for i in range(len(self)))

    def __repr__(self) -> str:
        return f"Strategy({[list(np.round(v, 6)) for v in self][:8]}{'...' if len(self) > 8 else ''})"

    @classmethod
    def uniform(cls, problem: DecisionProblem) -> "Strategy":
        counts = problem.action_counts
        return cls(problem.offsets, np.repeat(1.0 / counts, counts) if len(counts) else np.zeros(0))

    @classmethod
    def from_vectors(cls, problem: DecisionProblem, vectors: Sequence[Sequence[float]]) -> "Strategy":
        if len(vectors) != len(problem.infosets):
            raise ValueError(f"expected {len(problem.infosets)} vectors, got {len(vectors)}")
        flat = np.concatenate([np.asarray(v, dtype=np.float64) for v in vectors]) if vectors else np.zeros(0)
        return cls(problem.offsets, flat)

    @classmethod
    def pure(cls, problem: DecisionProblem, choice: Sequence[int]) -> "Strategy":
        flat = np.zeros(problem.num_actions)
        flat[problem.offsets[:-1] + np.asarray(choice, dtype=np.int64)] = 1.0
        return cls(problem.offsets, flat)

    def copy(self) -> "Strategy":
        return Strategy(self.offsets, self.flat.copy())

    def replace(self, infoset: int, alpha: Sequence[float]) -> "Strategy":
        out = self.copy()
        block = out[infoset]
        alpha = np.asarray(alpha, dtype=np.float64)
        if alpha.shape != block.shape:
            raise ValueError(f"alpha has {alpha.size} entries, infoset {infoset} has {block.size} actions")
        block[:] = alpha
        return out

    def is_feasible(self, tol: float = PROB_TOL) -> bool:
        if np.any(self.flat < -tol):
            return False
        sums = np.add.reduceat(self.flat, self.offsets[:-1]) if len(self) else np.zeros(0)
        return bool(np.all(np.abs(sums - 1.0) <= tol))

    def check_matches(self, problem: DecisionProblem) -> None:
        if len(self.offsets) != len(problem.offsets) or np.any(self.offsets != problem.offsets):
            raise ValueError("strategy does not match the problem's infoset/action layout")


# --------------------------------------------------------------------------
# validation


def validate(problem: DecisionProblem) -> list[Violation]:
    """All invariant violations of ``problem``; empty iff well-formed."""
    out: list[Violation] = []
    nodes, n = problem.nodes, len(problem.nodes)
    if n == 0:
        return [Violation("root", "problem", "root missing: no nodes")]
    if not 0 <= problem.root < n:
        return [Violation("root", "problem", f"root missing: id {problem.root} not a node")]

    parent_count = [0] * n
    for i, node in enumerate(nodes):
        where = f"node {i}"
        if node.kind not in (DECISION, CHANCE, TERMINAL):
            out.append(Violation("kind", where, f"unknown node kind {node.kind!r}"))
            continue
        if len(set(node.labels)) != len(node.labels):
            out.append(Violation("labels", where, "duplicate action labels"))
        if len(node.labels) != len(node.children):
            out.append(Violation("labels", where, "labels and children differ in length"))
        for c in node.children:
            if not 0 <= c < n:
                out.append(Violation("child", where, f"child id {c} is not a node"))
            else:
                parent_count[c] += 1
        if node.kind == TERMINAL:
            if node.children:
                out.append(Violation("terminal", where, "terminal node has children"))
            if not math.isfinite(node.payoff):
                out.append(Violation("payoff", where, f"non-finite payoff {node.payoff}"))
        elif not node.children:
            out.append(Violation("children", where, f"{node.kind} node has no children"))
        if node.kind == CHANCE:
            if len(node.probs) != len(node.children):
                out.append(Violation("chance", where, "probabilities and children differ in length"))
            if any(not (p >= 0.0) or not math.isfinite(p) for p in node.probs):
                out.append(Violation("chance", where, "negative or non-finite probability"))
            total = math.fsum(node.probs)
            if abs(total - 1.0) > PROB_TOL:
                out.append(Violation("chance", where, f"chance distribution sums to {total:.12g}"))
        if node.kind == DECISION:
            if not 0 <= node.infoset < len(problem.infosets):
                out.append(Violation("infoset", where, f"infoset {node.infoset} does not exist"))
            else:
                actions = problem.infosets[node.infoset].actions
                if set(node.labels) != set(actions) or len(node.labels) != len(actions):
                    out.append(
                        Violation(
                            "actions",
                            where,
                            f"action set mismatch: node has {list(node.labels)}, "
                            f"infoset {node.infoset} has {list(actions)}",
                        )
                    )

    for i, k in enumerate(parent_count):
        if i == problem.root and k:
            out.append(Violation("tree", f"node {i}", "root has a parent"))
        elif i != problem.root and k != 1:
            out.append(Violation("tree", f"node {i}", f"node has {k} parents (expected 1)"))
    if not any(v.rule in ("tree", "child") for v in out):
        seen = [False] * n
        stack = [problem.root]
        while stack:
            i = stack.pop()
            if seen[i]:
                out.append(Violation("tree", f"node {i}", "cycle detected"))
                break
            seen[i] = True
            stack.extend(nodes[i].children)
        unreached = [i for i in range(n) if not seen[i]]
        if unreached:
            out.append(Violation("tree", f"node {unreached[0]}", f"{len(unreached)} node(s) unreachable from root"))

    owner: dict[int, int] = {}
    for j, I in enumerate(problem.infosets):
        where = f"infoset {j}"
        if I.id != j:
            out.append(Violation("infoset", where, f"infoset stored at {j} carries id {I.id}"))
        if not I.actions:
            out.append(Violation("infoset", where, "empty action list"))
        if len(set(I.actions)) != len(I.actions):
            out.append(Violation("infoset", where, "duplicate actions"))
        if not I.members:
            out.append(Violation("infoset", where, "no member nodes"))
        for h in I.members:
            if not 0 <= h < n or nodes[h].kind != DECISION:
                out.append(Violation("partition", where, f"member {h} is not a decision node"))
                continue
            if h in owner:
                out.append(Violation("partition", f"node {h}", f"in infosets {owner[h]} and {j}"))
            owner[h] = j
            if nodes[h].infoset != j:
                out.append(Violation("partition", f"node {h}", f"listed in infoset {j} but points to {nodes[h].infoset}"))
    for i, node in enumerate(nodes):
        if node.kind == DECISION and i not in owner:
            out.append(Violation("partition", f"node {i}", "decision node belongs to no infoset"))
    return out


def check(problem: DecisionProblem) -> DecisionProblem:
    violations = validate(problem)
    if violations:
        raise ProblemValidationError(violations)
    return problem


# --------------------------------------------------------------------------
# sequences and recall


def seq(problem: DecisionProblem, node: int) -> list[tuple[int, str]]:
    """Player-only (infoset, action) pairs on the root-to-``node`` path."""
    if not 0 <= node < len(problem.nodes):
        raise KeyError(f"unknown node id {node}")
    parents = problem.parents
    out = []
    child = node
    while child != problem.root:
        p = int(parents[child])
        pn = problem.nodes[p]
        if pn.kind == DECISION:
            out.append((pn.infoset, pn.labels[pn.children.index(child)]))
        child = p
    out.reverse()
    return out


def classify_recall(problem: DecisionProblem) -> RecallReport:
    nodes = problem.nodes
    # interned sequence ids: equal ids <=> equal seq(h)
    seq_id = np.zeros(len(nodes), dtype=np.int64)
    trie: dict[tuple[int, int, int], int] = {}
    on_path = [0] * len(problem.infosets)
    absent = [False] * len(problem.infosets)
    stack: list[tuple[int, bool]] = [(problem.root, True)]
    while stack:
        i, entering = stack.pop()
        node = nodes[i]
        if node.kind != DECISION:
            if entering:
                for c in reversed(node.children):
                    seq_id[c] = seq_id[i]
                    stack.append((c, True))
            continue
        I = node.infoset
        if not entering:
            on_path[I] -= 1
            continue
        if on_path[I]:
            absent[I] = True
        on_path[I] += 1
        stack.append((i, False))
        for a, c in reversed(list(enumerate(node.children))):
            key = (int(seq_id[i]), I, a)
            seq_id[c] = trie.setdefault(key, len(trie) + 1)
            stack.append((c, True))

    perfect = tuple(len({int(seq_id[h]) for h in I.members}) <= 1 for I in problem.infosets)
    absent_t = tuple(absent)
    if any(absent_t):
        cls = RecallClass.ABSENTMINDED
    elif not all(perfect):
        cls = RecallClass.IMPERFECT_RECALL
    else:
        cls = RecallClass.PERFECT_RECALL
    return RecallReport(cls, perfect, absent_t)


# --------------------------------------------------------------------------
# canonical form, building


def canonicalize(problem: DecisionProblem) -> DecisionProblem:
    """Renumber nodes in pre-order and infosets by first appearance."""
    nodes = problem.nodes
    actions_of = {j: I.actions for j, I in enumerate(problem.infosets)}
    # decision children follow the infoset's action order
    def ordered_children(node: Node) -> tuple[tuple[str, ...], tuple[int, ...]]:
        if node.kind != DECISION:
            return node.labels, node.children
        pos = dict(zip(node.labels, node.children))
        acts = actions_of[node.infoset]
        return acts, tuple(pos[a] for a in acts)

    order, stack = [], [problem.root]
    while stack:
        i = stack.pop()
        order.append(i)
        stack.extend(reversed(ordered_children(nodes[i])[1]))
    new_id = {old: k for k, old in enumerate(order)}
    new_infoset: dict[int, int] = {}
    for old in order:
        node = nodes[old]
        if node.kind == DECISION and node.infoset not in new_infoset:
            new_infoset[node.infoset] = len(new_infoset)

    new_nodes = []
    members: list[list[int]] = [[] for _ in new_infoset]
    for k, old in enumerate(order):
        node = nodes[old]
        labels, children = ordered_children(node)
        children = tuple(new_id[c] for c in children)
        if node.kind == DECISION:
            j = new_infoset[node.infoset]
            members[j].append(k)
            new_nodes.append(Node(DECISION, labels, children, infoset=j))
        elif node.kind == CHANCE:
            new_nodes.append(Node(CHANCE, labels, children, node.probs))
        else:
            new_nodes.append(Node(TERMINAL, payoff=node.payoff))
    infosets = [None] * len(new_infoset)
    for old, j in new_infoset.items():
        infosets[j] = InfoSet(j, tuple(problem.infosets[old].actions), tuple(members[j]))
    return DecisionProblem(new_nodes, 0, infosets)


class TreeBuilder:
    """Incremental construction of a problem; infosets are keyed by any hashable.

    Reserve a node id with :meth:`reserve` before building its subtree so that
    ids come out in pre-order when children are built depth-first.
    """

    def __init__(self, max_nodes: int | None = None):
        self._nodes: list[Node | None] = []
        self._infoset_index: dict[Hashable, int] = {}
        self._infoset_actions: list[tuple[str, ...]] = []
        self.max_nodes = max_nodes

    def __len__(self) -> int:
        return len(self._nodes)

    def reserve(self) -> int:
        if self.max_nodes is not None and len(self._nodes) >= self.max_nodes:
            raise OverflowError(f"tree exceeds the cap of {self.max_nodes} nodes")
        self._nodes.append(None)
        return len(self._nodes) - 1

    def infoset(self, key: Hashable, actions: Sequence[str]) -> int:
        j = self._infoset_index.get(key)
        if j is None:
            j = self._infoset_index[key] = len(self._infoset_actions)
            self._infoset_actions.append(tuple(actions))
        elif self._infoset_actions[j] != tuple(actions):
            raise ValueError(f"infoset {key!r} reused with different actions")
        return j

    def set_decision(self, node: int, key: Hashable, actions: Sequence[str], children: Sequence[int]) -> None:
        self._nodes[node] = Node.decision(self.infoset(key, actions), actions, children)

    def set_chance(self, node: int, outcomes: Sequence[tuple[str, float, int]]) -> None:
        self._nodes[node] = Node.chance(outcomes)

    def set_terminal(self, node: int, payoff: float) -> None:
        self._nodes[node] = Node.terminal(payoff)

    def terminal(self, payoff: float) -> int:
        i = self.reserve()
        self.set_terminal(i, payoff)
        return i

    def build(self, root: int = 0) -> DecisionProblem:
        if any(n is None for n in self._nodes):
            raise ValueError("some reserved nodes were never defined")
        members: list[list[int]] = [[] for _ in self._infoset_actions]
        for i, n in enumerate(self._nodes):
            if n.kind == DECISION:
                members[n.infoset].append(i)
        infosets = [InfoSet(j, a, tuple(m)) for j, (a, m) in enumerate(zip(self._infoset_actions, members))]
        return canonicalize(check(DecisionProblem(self._nodes, root, infosets)))


# --------------------------------------------------------------------------
# JSON


def to_document(problem: DecisionProblem) -> dict:
    nodes = []
    for i, node in enumerate(problem.nodes):
        if node.kind == DECISION:
            nodes.append(
                {"id": i, "kind": DECISION, "infoset": node.infoset, "children": dict(zip(node.labels, node.children))}
            )
        elif node.kind == CHANCE:
            nodes.append(
                {"id": i, "kind": CHANCE, "outcomes": [[l, p, c] for l, p, c in zip(node.labels, node.probs, node.children)]}
            )
        else:
            nodes.append({"id": i, "kind": TERMINAL, "payoff": node.payoff})
    return {
        "format": FORMAT_TAG,
        "root": problem.root,
        "infosets": [{"id": I.id, "actions": list(I.actions), "members": list(I.members)} for I in problem.infosets],
        "nodes": nodes,
    }


def save(problem: DecisionProblem) -> bytes:
    """Serialize in canonical form (compact JSON, one node per line)."""
    doc = to_document(canonicalize(problem))
    dump = lambda obj: json.dumps(obj, separators=(",", ":"), ensure_ascii=False, allow_nan=False)
    head = f'{{"format":{dump(doc["format"])},"root":{doc["root"]},\n"infosets":[\n'
    infosets = ",\n".join(dump(I) for I in doc["infosets"])
    nodes = ",\n".join(dump(n) for n in doc["nodes"])
    return (head + infosets + "],\n\"nodes\":[\n" + nodes + "]}\n").encode("utf-8")


def _expect(cond: bool, msg: str) -> None:
    if not cond:
        raise ProblemFormatError(msg)


def _is_int(v) -> bool:
    return isinstance(v, int) and not isinstance(v, bool)


def _is_real(v) -> bool:
    return isinstance(v, (int, float)) and not isinstance(v, bool)


def from_document(doc: dict) -> DecisionProblem:
    _expect(isinstance(doc, dict), "document root must be an object")
    _expect(doc.get("format") == FORMAT_TAG, f"format must be {FORMAT_TAG!r}, got {doc.get('format')!r}")
    raw_nodes = doc.get("nodes")
    _expect(isinstance(raw_nodes, list), "'nodes' must be a list")
    _expect(len(raw_nodes) > 0, "root missing: empty nodes list")
    raw_infosets = doc.get("infosets", [])
    _expect(isinstance(raw_infosets, list), "'infosets' must be a list")

    infoset_pos: dict[int, int] = {}
    for k, I in enumerate(raw_infosets):
        _expect(isinstance(I, dict) and _is_int(I.get("id")), f"infosets[{k}]: missing integer id")
        _expect(I["id"] not in infoset_pos, f"infosets[{k}]: duplicate id {I['id']}")
        _expect(
            isinstance(I.get("actions"), list) and all(isinstance(a, str) for a in I["actions"]),
            f"infoset {I['id']}: 'actions' must be a list of strings",
        )
        _expect(
            isinstance(I.get("members"), list) and all(_is_int(m) for m in I["members"]),
            f"infoset {I['id']}: 'members' must be a list of node ids",
        )
        infoset_pos[I["id"]] = k

    node_pos: dict[int, int] = {}
    for k, n in enumerate(raw_nodes):
        _expect(isinstance(n, dict) and _is_int(n.get("id")), f"nodes[{k}]: missing integer id")
        _expect(n["id"] not in node_pos, f"nodes[{k}]: duplicate id {n['id']}")
        node_pos[n["id"]] = k
    _expect(_is_int(doc.get("root")), "root missing: 'root' must be a node id")
    _expect(doc["root"] in node_pos, f"root missing: root id {doc['root']} is not a node")

    def ref(nid, where: str) -> int:
        _expect(_is_int(nid) and nid in node_pos, f"{where}: references missing node {nid!r}")
        return node_pos[nid]

    nodes = []
    for n in raw_nodes:
        where, kind = f"node {n['id']}", n.get("kind")
        if kind == DECISION:
            _expect(
                _is_int(n.get("infoset")) and n["infoset"] in infoset_pos,
                f"{where}: references missing infoset {n.get('infoset')!r}",
            )
            ch = n.get("children")
            _expect(isinstance(ch, dict) and ch, f"{where}: 'children' must be a non-empty object")
            nodes.append(
                Node.decision(infoset_pos[n["infoset"]], list(ch), [ref(c, where) for c in ch.values()])
            )
        elif kind == CHANCE:
            outs = n.get("outcomes")
            _expect(isinstance(outs, list) and outs, f"{where}: 'outcomes' must be a non-empty list")
            parsed = []
            for o in outs:
                _expect(
                    isinstance(o, list) and len(o) == 3 and isinstance(o[0], str) and _is_real(o[1]),
                    f"{where}: outcome must be [label, prob, id]",
                )
                parsed.append((o[0], float(o[1]), ref(o[2], where)))
            nodes.append(Node.chance(parsed))
        elif kind == TERMINAL:
            _expect(_is_real(n.get("payoff")), f"{where}: terminal needs a numeric 'payoff'")
            nodes.append(Node.terminal(float(n["payoff"])))
        else:
            raise ProblemFormatError(f"{where}: unknown kind {kind!r}")

    infosets = []
    for k, I in enumerate(raw_infosets):
        members = tuple(ref(m, f"infoset {I['id']}") for m in I["members"])
        infosets.append(InfoSet(k, tuple(I["actions"]), members))
    problem = DecisionProblem(nodes, node_pos[doc["root"]], infosets)
    return canonicalize(check(problem))


def load(data: bytes | str) -> DecisionProblem:
    try:
        doc = json.loads(data)
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ProblemFormatError(f"malformed JSON: {e}") from e
    return from_document(doc)


def load_file(path) -> DecisionProblem:
    with open(path, "rb") as f:
        return load(f.read())


def save_file(problem: DecisionProblem, path) -> None:
    with open(path, "wb") as f:
        f.write(save(problem))
