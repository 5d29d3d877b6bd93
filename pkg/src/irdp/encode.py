"""Bridge between decision problems and polynomials over products of simplices.

``poly_to_problem`` builds a tree whose utility equals a given polynomial:
a uniform chance root picks a monomial, then a chain of decision nodes (one
per variable occurrence) must all take the monomial's action for the chain
to pay ``coef * M``.  ``problem_to_poly`` goes the other way by summing one
monomial per terminal.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .model import CHANCE, TERMINAL, DecisionProblem, TreeBuilder

TERMINAL_CAP = 10**6
HYPERCUBE_ACTIONS = ("hi", "lo")


@dataclass(frozen=True)
class Block:
    name: str
    actions: tuple[str, ...]


@dataclass
class SparsePolynomial:
    """Sum of ``coef * prod x[block][action]^k`` over a product of simplices.

    Monomial powers are keyed by ``(block index, action index)``.
    """

    blocks: list[Block]
    monomials: list[tuple[float, dict[tuple[int, int], int]]] = field(default_factory=list)

    def __post_init__(self):
        names = [b.name for b in self.blocks]
        if len(set(names)) != len(names):
            raise ValueError("duplicate block names")
        for b in self.blocks:
            if not b.actions or len(set(b.actions)) != len(b.actions):
                raise ValueError(f"block {b.name!r} needs distinct, non-empty actions")
        seen = set()
        for coef, powers in self.monomials:
            if not math.isfinite(coef) or coef == 0:
                raise ValueError(f"monomial coefficients must be finite and nonzero, got {coef}")
            for (bi, ai), k in powers.items():
                if not (0 <= bi < len(self.blocks) and 0 <= ai < len(self.blocks[bi].actions)) or k < 1:
                    raise ValueError(f"bad power entry {(bi, ai)}: {k}")
            key = _key(powers)
            if key in seen:
                raise ValueError(f"duplicate monomial {self.format_powers(powers)}")
            seen.add(key)

    @classmethod
    def hypercube(cls, names: Sequence[str], terms: Sequence[tuple[float, Mapping[str, int]]]) -> "SparsePolynomial":
        """Polynomial in variables on [0, 1]; each variable becomes the block (hi, lo)."""
        blocks = [Block(n, HYPERCUBE_ACTIONS) for n in names]
        index = {n: i for i, n in enumerate(names)}
        return cls.merged(blocks, [(c, {(index[v], 0): k for v, k in p.items() if k}) for c, p in terms])

    @classmethod
    def merged(cls, blocks, monomials) -> "SparsePolynomial":
        """Build from possibly repeated monomials, merging like terms and dropping zeros."""
        acc: dict = {}
        order = []
        for coef, powers in monomials:
            key = _key(powers)
            if key not in acc:
                acc[key] = 0.0
                order.append(key)
            acc[key] += coef
        return cls(list(blocks), [(acc[k], dict(k)) for k in order if acc[k] != 0])

    def format_powers(self, powers) -> str:
        return "*".join(f"{self.blocks[b].name}.{self.blocks[b].actions[a]}^{k}" for (b, a), k in sorted(powers.items()))

    @property
    def degree(self) -> int:
        return max((sum(p.values()) for _, p in self.monomials), default=0)

    def evaluate(self, point: Sequence[Sequence[float]]) -> float:
        """``point[b]`` is the probability vector of block ``b``."""
        total = 0.0
        for coef, powers in self.monomials:
            term = coef
            for (b, a), k in powers.items():
                term *= point[b][a] ** k
            total += term
        return total

    # JSON form uses "block.action" keys
    def to_json(self) -> dict:
        return {
            "blocks": [{"name": b.name, "actions": list(b.actions)} for b in self.blocks],
            "monomials": [
                {"coef": c, "powers": {f"{self.blocks[b].name}.{self.blocks[b].actions[a]}": k for (b, a), k in sorted(p.items())}}
                for c, p in self.monomials
            ],
        }

    @classmethod
    def from_json(cls, doc: dict) -> "SparsePolynomial":
        try:
            blocks = [Block(str(b["name"]), tuple(str(a) for a in b["actions"])) for b in doc["blocks"]]
            lookup = {f"{b.name}.{a}": (i, j) for i, b in enumerate(blocks) for j, a in enumerate(b.actions)}
            monomials = []
            for m in doc["monomials"]:
                powers = {}
                for key, k in m.get("powers", {}).items():
                    if key not in lookup:
                        raise ValueError(f"unknown variable {key!r}")
                    if not isinstance(k, int) or k < 0:
                        raise ValueError(f"exponent of {key!r} must be a non-negative integer")
                    if k:
                        powers[lookup[key]] = k
                monomials.append((float(m["coef"]), powers))
        except (KeyError, TypeError) as e:
            raise ValueError(f"malformed polynomial document: {e!r}") from None
        return cls(blocks, monomials)


def _key(powers) -> tuple:
    return tuple(sorted(powers.items()))


@dataclass
class Encoding:
    problem: DecisionProblem
    block_of_infoset: list[int]  # polynomial block behind each problem infoset

    def strategy_flat(self, point: Sequence[Sequence[float]]) -> np.ndarray:
        """Flat strategy for the encoded problem from a per-block point."""
        if not self.block_of_infoset:
            return np.zeros(0)
        return np.concatenate([np.asarray(point[b], dtype=np.float64) for b in self.block_of_infoset])


def encode_polynomial(p: SparsePolynomial) -> Encoding:
    if not p.monomials:
        raise ValueError("cannot encode an empty polynomial")
    M = len(p.monomials)
    b = TreeBuilder()
    root = b.reserve()
    outcomes, chains = [], []
    for m, (coef, powers) in enumerate(p.monomials):
        occurrences = []
        for (bi, ai), k in sorted(powers.items(), key=lambda kv: (p.blocks[kv[0][0]].name, kv[0][1])):
            occurrences += [(bi, ai)] * k
        chains.append(occurrences)
        first = _chain(b, p, occurrences, coef * M)
        outcomes.append((f"monomial:{m}", 1.0 / M, first))
    b.set_chance(root, outcomes)
    problem = b.build()
    # canonical infosets are numbered by first appearance in pre-order, which
    # is the order blocks first occur scanning the chains in monomial order
    blocks: list[int] = []
    for occurrences in chains:
        for bi, _ in occurrences:
            if bi not in blocks:
                blocks.append(bi)
    return Encoding(problem, blocks)


def _chain(b: TreeBuilder, p: SparsePolynomial, occurrences, payoff: float) -> int:
    if not occurrences:
        return b.terminal(payoff)
    bi, ai = occurrences[0]
    blk = p.blocks[bi]
    node = b.reserve()
    children = [_chain(b, p, occurrences[1:], payoff) if j == ai else b.terminal(0.0) for j in range(len(blk.actions))]
    b.set_decision(node, blk.name, blk.actions, children)
    return node


def poly_to_problem(p: SparsePolynomial) -> DecisionProblem:
    return encode_polynomial(p).problem


def problem_to_poly(problem: DecisionProblem, cap: int = TERMINAL_CAP) -> SparsePolynomial:
    """Utility polynomial of ``problem`` with one block ``I<i>`` per infoset."""
    n_terminal = sum(1 for n in problem.nodes if n.kind == TERMINAL)
    if n_terminal > cap:
        raise ValueError(f"{n_terminal} terminals exceed the extraction cap {cap}")
    blocks = [Block(f"I{I.id}", tuple(I.actions)) for I in problem.infosets]
    monomials = []
    stack = [(problem.root, 1.0, {})]
    while stack:
        h, weight, powers = stack.pop()
        node = problem.nodes[h]
        if node.kind == TERMINAL:
            if node.payoff != 0 and weight != 0:
                monomials.append((node.payoff * weight, powers))
            continue
        for a, c in reversed(list(enumerate(node.children))):
            if node.kind == CHANCE:
                stack.append((c, weight * node.probs[a], powers))
            else:
                nxt = dict(powers)
                nxt[(node.infoset, a)] = nxt.get((node.infoset, a), 0) + 1
                stack.append((c, weight, nxt))
    return SparsePolynomial.merged(blocks, monomials)


# --------------------------------------------------------------------------
# adversarial 1-D instances


BASIN_EPS_MAX = (3.0 - math.sqrt(5.0)) / 2.0


def univariate(coefs: Sequence[float], name: str = "x") -> SparsePolynomial:
    """``sum_j coefs[j] x^j`` on [0, 1], expanded in the ``hi`` coordinate only."""
    return SparsePolynomial.hypercube([name], [(float(c), {name: j}) for j, c in enumerate(coefs) if c != 0])


def basin_trap_coefs(eps: float, k: int) -> np.ndarray:
    """(1/eps)(x^k - eps)^2 = x^(2k)/eps - 2 x^k + eps."""
    c = np.zeros(2 * k + 1)
    c[0] = eps
    c[k] = -2.0
    c[2 * k] = 1.0 / eps
    return c


def gd_trap_coefs() -> np.ndarray:
    """(3/16)^2 (x - 1/4)^2 (x - 3/4)^2."""
    P = np.polynomial.polynomial
    q = P.polymul([-0.25, 1.0], [-0.75, 1.0])
    return (3.0 / 16.0) ** 2 * P.polymul(q, q)


def rm_trap_coefs() -> np.ndarray:
    """16 x^2 (1 - x)^2."""
    P = np.polynomial.polynomial
    return 16.0 * P.polymul([0.0, 0.0, 1.0], P.polymul([1.0, -1.0], [1.0, -1.0]))


ADVERSARIAL_KINDS = ("BasinTrap", "GDTrap", "RMTrap")


def adversarial_polynomial(kind: str, eps: Optional[float] = None, k: Optional[int] = None) -> SparsePolynomial:
    if kind == "BasinTrap":
        if eps is None or k is None:
            raise ValueError("BasinTrap needs eps and k")
        if not 0.0 < eps < BASIN_EPS_MAX:
            raise ValueError(f"eps must lie in (0, {BASIN_EPS_MAX:.6f})")
        if int(k) != k or k < 1:
            raise ValueError("k must be an integer >= 1")
        return univariate(basin_trap_coefs(eps, int(k)))
    if kind == "GDTrap":
        return univariate(gd_trap_coefs())
    if kind == "RMTrap":
        return univariate(rm_trap_coefs())
    raise ValueError(f"unknown adversarial kind {kind!r}; expected one of {ADVERSARIAL_KINDS}")


def adversarial_instance(kind: str, eps: Optional[float] = None, k: Optional[int] = None) -> DecisionProblem:
    """Tree whose utility at x(hi) = x equals the named 1-D polynomial."""
    return poly_to_problem(adversarial_polynomial(kind, eps, k))
