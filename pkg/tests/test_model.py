import json

import numpy as np
import pytest
from hypothesis import given
import hypothesis.strategies as st

from irdp import classic
from irdp.model import (
    DecisionProblem,
    InfoSet,
    Node,
    ProblemFormatError,
    ProblemValidationError,
    RecallClass,
    Strategy,
    TreeBuilder,
    canonicalize,
    check,
    classify_recall,
    load,
    save,
    seq,
    to_document,
    validate,
)

from conftest import problem_seeds, small_random


def coin_nodes(p_left=0.5, p_right=0.5, right_actions=("l", "r")):
    nodes = [
        Node.chance([("l_chance", p_left, 1), ("r_chance", p_right, 4)]),
        Node.decision(0, ["l", "r"], [2, 3]),
        Node.terminal(2.0),
        Node.terminal(0.0),
        Node.decision(0, list(right_actions), [5, 6] + ([7] if len(right_actions) == 3 else [])),
        Node.terminal(0.0),
        Node.terminal(1.0),
    ]
    if len(right_actions) == 3:
        nodes.append(Node.terminal(0.0))
    return nodes


def test_hand_built_coin_is_valid():
    p = DecisionProblem(coin_nodes(), 0, [InfoSet(0, ("l", "r"), (1, 4))])
    assert validate(p) == []


def test_bad_chance_sum_reported():
    p = DecisionProblem(coin_nodes(0.5, 0.4), 0, [InfoSet(0, ("l", "r"), (1, 4))])
    v = validate(p)
    assert len(v) == 1
    assert "chance distribution sums to 0.9" in v[0].message
    assert v[0].where == "node 0"


def test_action_set_mismatch_reported():
    p = DecisionProblem(coin_nodes(right_actions=("l", "r", "m")), 0, [InfoSet(0, ("l", "r"), (1, 4))])
    v = validate(p)
    assert any("action set mismatch" in x.message and x.where == "node 4" for x in v)


def test_empty_problem_root_missing():
    v = validate(DecisionProblem([], 0, []))
    assert [x.message.startswith("root missing") for x in v] == [True]


def test_two_parents_and_unowned_decision():
    nodes = [Node.chance([("a", 0.5, 1), ("b", 0.5, 1)]), Node.terminal(1.0)]
    assert any("2 parents" in x.message for x in validate(DecisionProblem(nodes, 0, [])))
    nodes = [Node.decision(0, ["a"], [1]), Node.terminal(1.0)]
    assert any("belongs to no infoset" in x.message for x in validate(DecisionProblem(nodes, 0, [])))


def test_cycle_detected():
    nodes = [Node.decision(0, ["a"], [1]), Node.decision(0, ["a"], [0])]
    v = validate(DecisionProblem(nodes, 0, [InfoSet(0, ("a",), (0, 1))]))
    assert any(x.rule == "tree" for x in v)


def test_check_raises():
    p = DecisionProblem(coin_nodes(0.5, 0.4), 0, [InfoSet(0, ("l", "r"), (1, 4))])
    with pytest.raises(ProblemValidationError) as e:
        check(p)
    assert e.value.violations


def test_seq_examples(driver, forgot):
    assert seq(driver, driver.root) == []
    deepest = driver.infosets[0].members[-1]
    assert seq(driver, deepest) == [(0, "c"), (0, "c")]
    # left child of the root in the forgotten-move problem
    left = forgot.nodes[forgot.root].children[0]
    assert forgot.nodes[left].infoset == 1
    assert seq(forgot, left) == [(0, "l")]
    with pytest.raises(KeyError):
        seq(driver, 999)


def test_seq_skips_chance(coin):
    for h in coin.infosets[0].members:
        assert seq(coin, h) == []


def test_recall_classes(coin, forgot, driver):
    assert classify_recall(coin).recall_class == RecallClass.PERFECT_RECALL
    r = classify_recall(forgot)
    assert r.recall_class == RecallClass.IMPERFECT_RECALL
    assert r.perfect_recall == (True, False)
    assert r.absentminded == (False, False)
    r = classify_recall(driver)
    assert r.recall_class == RecallClass.ABSENTMINDED
    assert r.absentminded == (True,)


def test_round_trip(driver):
    data = save(driver)
    back = load(data)
    assert back == driver
    assert save(back) == data


def test_missing_infoset_names_node(driver):
    doc = to_document(driver)
    doc["nodes"][0]["infoset"] = 7
    with pytest.raises(ProblemFormatError, match="node 0.*missing infoset"):
        load(json.dumps(doc))


def test_empty_nodes_root_missing():
    with pytest.raises(ProblemFormatError, match="root missing"):
        load(json.dumps({"format": "irdp-v1", "root": 0, "infosets": [], "nodes": []}))


def test_malformed_json():
    with pytest.raises(ProblemFormatError, match="malformed JSON"):
        load(b"{nope")


def test_load_validation_failure_has_location():
    doc = to_document(classic.hidden_coin())
    doc["nodes"][0]["outcomes"][0][1] = 0.4
    with pytest.raises(ProblemValidationError, match="node 0"):
        load(json.dumps(doc))


def test_load_accepts_decimal_literals():
    text = """{"format":"irdp-v1","root":0,"infosets":[{"id":0,"actions":["a","b"],"members":[1]}],
    "nodes":[{"id":0,"kind":"chance","outcomes":[["x",0.1,1],["y",0.9,2]]},
    {"id":1,"kind":"decision","infoset":0,"children":{"a":3,"b":4}},
    {"id":2,"kind":"terminal","payoff":1e-3},{"id":3,"kind":"terminal","payoff":-2},
    {"id":4,"kind":"terminal","payoff":2.5}]}"""
    p = load(text)
    assert p.nodes[0].probs == (0.1, 0.9)
    assert sorted(n.payoff for n in p.nodes if n.kind == "terminal") == [-2.0, 0.001, 2.5]


def test_builder_cap():
    b = TreeBuilder(max_nodes=2)
    b.reserve()
    b.reserve()
    with pytest.raises(OverflowError):
        b.reserve()


def test_builder_rejects_inconsistent_actions():
    b = TreeBuilder()
    b.infoset("I", ["a", "b"])
    with pytest.raises(ValueError):
        b.infoset("I", ["a"])


def test_strategy_helpers(driver, forgot):
    u = Strategy.uniform(forgot)
    assert len(u) == 2
    assert np.allclose(u[1], [0.5, 0.5])
    s = u.replace(0, [1.0, 0.0])
    assert s[0].tolist() == [1.0, 0.0] and u[0].tolist() == [0.5, 0.5]
    assert Strategy.pure(forgot, [1, 0]).flat.tolist() == [0.0, 1.0, 1.0, 0.0]
    assert not Strategy(forgot.offsets, np.array([0.6, 0.6, 0.5, 0.5])).is_feasible()
    with pytest.raises(ValueError):
        Strategy.uniform(forgot).check_matches(driver)


# ---------------------------------------------------------------- properties


def all_paths(problem):
    """Every root-to-node path by explicit enumeration."""
    paths = {}
    stack = [(problem.root, (problem.root,))]
    while stack:
        i, path = stack.pop()
        paths.setdefault(i, []).append(path)
        for c in problem.nodes[i].children:
            stack.append((c, path + (c,)))
    return paths


@given(problem_seeds)
def test_unique_paths(seed):
    p = small_random(seed, max_nodes=150)
    paths = all_paths(p)
    assert set(paths) == set(range(len(p.nodes)))
    assert all(len(v) == 1 for v in paths.values())


def shuffled_copy(problem, rng, flip_chance=True):
    """Relabel node ids randomly and reverse sibling order (chance nodes optional)."""
    n = len(problem.nodes)
    perm = rng.permutation(n)
    nodes = [None] * n
    for i, node in enumerate(problem.nodes):
        kids = tuple(int(perm[c]) for c in node.children)
        if node.kind == "chance" and flip_chance:
            nodes[perm[i]] = Node("chance", node.labels[::-1], kids[::-1], node.probs[::-1])
        elif node.kind == "chance":
            nodes[perm[i]] = Node("chance", node.labels, kids, node.probs)
        elif node.kind == "decision":
            nodes[perm[i]] = Node("decision", node.labels[::-1], kids[::-1], infoset=node.infoset)
        else:
            nodes[perm[i]] = node
    infosets = [InfoSet(I.id, I.actions, tuple(int(perm[h]) for h in I.members)) for I in problem.infosets]
    return DecisionProblem(nodes, int(perm[problem.root]), infosets)


@given(problem_seeds, st.integers(0, 2**31))
def test_recall_invariant_under_relabeling(seed, perm_seed):
    p = small_random(seed, max_nodes=150, terminal_prob_depth_slope=0.15)
    q = shuffled_copy(p, np.random.default_rng(perm_seed))
    assert validate(q) == []
    assert classify_recall(q) == classify_recall(p)
    # decision children are reordered by canonicalize, chance outcomes are not
    q = shuffled_copy(p, np.random.default_rng(perm_seed), flip_chance=False)
    assert canonicalize(q) == p


@given(problem_seeds)
def test_uniform_sums_to_one(seed):
    p = small_random(seed)
    u = Strategy.uniform(p)
    for v in u:
        assert abs(v.sum() - 1.0) <= 1e-12


@given(problem_seeds)
def test_save_load_byte_identical(seed):
    p = small_random(seed)
    data = save(p)
    assert save(load(data)) == data


def brute_recall(problem):
    """Recall flags straight from the definitions (seq by path walk, ancestry by paths)."""
    paths = all_paths(problem)
    perfect, absent = [], []
    for I in problem.infosets:
        perfect.append(len({tuple(seq(problem, h)) for h in I.members}) == 1)
        members = set(I.members)
        absent.append(any(h != g and g in paths[h][0] for h in members for g in members))
    return tuple(perfect), tuple(absent)


@given(problem_seeds)
def test_recall_matches_definition(seed):
    p = small_random(seed, max_nodes=120, terminal_prob_depth_slope=0.15)
    r = classify_recall(p)
    assert (r.perfect_recall, r.absentminded) == brute_recall(p)
