"""Small hand-built decision problems used as fixtures and demos."""

from __future__ import annotations

from .model import DecisionProblem, TreeBuilder


def hidden_coin() -> DecisionProblem:
    """Chance flips a fair coin the player cannot observe; guessing left pays 2/0, right 0/1."""
    b = TreeBuilder()
    root = b.reserve()
    left = b.reserve()
    b.set_decision(left, "I", ["l", "r"], [b.terminal(2), b.terminal(0)])
    right = b.reserve()
    b.set_decision(right, "I", ["l", "r"], [b.terminal(0), b.terminal(1)])
    b.set_chance(root, [("l_chance", 0.5, left), ("r_chance", 0.5, right)])
    return b.build()


def forgotten_move() -> DecisionProblem:
    """Two-step problem where the player forgets its first move: U = 2 x_l x_l' + x_r x_r'."""
    b = TreeBuilder()
    root = b.reserve()
    left = b.reserve()
    b.set_decision(left, "I2", ["l'", "r'"], [b.terminal(2), b.terminal(0)])
    right = b.reserve()
    b.set_decision(right, "I2", ["l'", "r'"], [b.terminal(0), b.terminal(1)])
    b.set_decision(root, "I1", ["l", "r"], [left, right])
    return b.build()


def absentminded_driver(exit_payoffs=(0.0, 0.0, 10.0), end_payoff: float = 1.0) -> DecisionProblem:
    """Chain of indistinguishable nodes; ``c`` continues, ``e`` exits.

    With the default payoffs U(p) = p^3 + 10 p^2 (1 - p) where p = x(c).
    """
    b = TreeBuilder()
    nodes = [b.reserve() for _ in exit_payoffs]
    for k, node in enumerate(nodes):
        nxt = nodes[k + 1] if k + 1 < len(nodes) else b.terminal(end_payoff)
        b.set_decision(node, "I", ["c", "e"], [nxt, b.terminal(exit_payoffs[k])])
    return b.build()
