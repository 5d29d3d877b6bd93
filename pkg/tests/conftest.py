import numpy as np
import pytest
from hypothesis import settings
import hypothesis.strategies as st

from irdp import classic
from irdp.bench import RandomConfig, gen_random
from irdp.model import Strategy

settings.register_profile("default", deadline=None, max_examples=50, derandomize=True)
settings.load_profile("default")


@pytest.fixture
def driver():
    return classic.absentminded_driver()


@pytest.fixture
def coin():
    return classic.hidden_coin()


@pytest.fixture
def forgot():
    return classic.forgotten_move()


def small_random(seed, max_nodes=200, **kw):
    """Random-generator instance with at most ``max_nodes`` nodes (retries shallower trees)."""
    depth = kw.pop("max_depth", 4)
    while True:
        p = gen_random(RandomConfig(max_depth=depth, seed=seed, **kw))
        if len(p.nodes) <= max_nodes or depth == 1:
            return p
        depth -= 1


def random_flat(problem, rng):
    return np.concatenate([rng.dirichlet(np.ones(k)) for k in problem.action_counts]) if len(problem.infosets) else np.zeros(0)


def strategy_from(problem, flat):
    return Strategy(problem.offsets, np.asarray(flat, dtype=float))


# hypothesis: a seed for a small random problem plus a seed for strategies
problem_seeds = st.integers(min_value=0, max_value=10_000)


def random_poly(rng, max_vars=5, max_degree=4, max_terms=6):
    """Random sparse polynomial mixing hypercube variables and 3-action simplex blocks."""
    from irdp.encode import Block, SparsePolynomial

    n = int(rng.integers(1, max_vars + 1))
    blocks = [Block(f"v{i}", ("hi", "lo") if rng.random() < 0.6 else ("a", "b", "c")) for i in range(n)]
    terms = []
    for _ in range(int(rng.integers(1, max_terms + 1))):
        deg = int(rng.integers(0, max_degree + 1))
        powers: dict = {}
        for _ in range(deg):
            b = int(rng.integers(n))
            key = (b, int(rng.integers(len(blocks[b].actions))))
            powers[key] = powers.get(key, 0) + 1
        terms.append((float(np.round(rng.uniform(-5, 5), 3)) or 1.0, powers))
    p = SparsePolynomial.merged(blocks, terms)
    return p if p.monomials else SparsePolynomial(blocks, [(1.0, {})])


def random_point(poly, rng):
    return [rng.dirichlet(np.ones(len(b.actions))) for b in poly.blocks]
