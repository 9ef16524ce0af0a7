import copy
import random
from fractions import Fraction

import pytest

from semgraph.graph import Graph
from semgraph.smatch import (DEFAULT_CATEGORIES, SmatchScore, TripleSet,
                             breakdown, matched_count, smatch, smatch_oracle,
                             triples)

from conftest import build_demo_graph


def relabeled_demo():
    """Demo graph with r0 relabeled ARG0 -> ARG2."""
    g = build_demo_graph()
    g.update_relation("r0", "ARG2")
    return g


def test_triples_of_demo_graph(demo_graph):
    ts = triples(demo_graph)
    assert ts.instances == {
        ("c0", "instance", "want-01"),
        ("c1", "instance", "boy"),
        ("c2", "instance", "girl"),
        ("c3", "instance", "believe-01"),
    }
    assert ts.edges == {
        ("c0", "ARG0", "c1"),
        ("c0", "ARG1", "c3"),
        ("c3", "ARG0", "c2"),
        ("c3", "ARG1", "c1"),
    }
    assert ts.attributes == {("c0", "TOP", "want-01")}
    assert ts.size == 9
    assert ts.variables() == ["c0", "c1", "c2", "c3"]


def test_triples_attributes_and_multi_root():
    g = Graph(tid="t.1", tokens=["no", "go"])
    g.add_concept("go-02", [1])
    g.add_concept("-", [0], attribute=True)
    g.add_relation("c0", "c1", "polarity")
    g.add_concept("thing", [])          # second root
    ts = triples(g)
    assert ts.instances == {("c0", "instance", "go-02"), ("c2", "instance", "thing")}
    assert ts.attributes == {("c0", "polarity", "-"),
                             ("c0", "TOP", "go-02"), ("c2", "TOP", "thing")}
    assert ts.edges == set()


def test_triples_detached_constant_contributes_nothing():
    g = Graph(tid="t.1", tokens=["x"])
    g.add_concept("-", [0], attribute=True)
    ts = triples(g)
    assert ts.size == 0


def test_triples_empty_graph():
    assert triples(Graph(tid="t.1")).size == 0


# ----------------------------------------------------------------------
# oracle first: the exhaustive search pins down every frozen score below

def test_oracle_identity_is_perfect(demo_graph):
    ts = triples(demo_graph)
    score = smatch_oracle(ts, ts)
    assert score.matched == 9
    assert score.f1 == Fraction(1)
    assert score.mapping == {"c0": "c0", "c1": "c1", "c2": "c2", "c3": "c3"}


def test_oracle_relabel_scores_eight_ninths(demo_graph):
    score = smatch_oracle(triples(demo_graph), triples(relabeled_demo()))
    assert score.matched == 8
    assert (score.total_left, score.total_right) == (9, 9)
    assert score.precision == Fraction(8, 9)
    assert score.recall == Fraction(8, 9)
    assert score.f1 == Fraction(8, 9)


def test_oracle_injective_direction():
    a = TripleSet(instances={("c0", "instance", "x")})
    b = TripleSet(instances={("c0", "instance", "x"), ("c1", "instance", "x")},
                  edges={("c0", "mod", "c1")})
    score = smatch_oracle(a, b)
    assert score.matched == 1
    assert score.precision == Fraction(1)
    assert score.recall == Fraction(1, 3)
    # and flipped: the larger side is enumerated against the smaller
    flipped = smatch_oracle(b, a)
    assert flipped.matched == 1
    assert flipped.precision == Fraction(1, 3)


def test_oracle_size_guard():
    big = TripleSet(instances={(f"c{i}", "instance", "x") for i in range(9)})
    with pytest.raises(ValueError):
        smatch_oracle(big, big)


def test_oracle_disjoint_concepts_score_zero():
    a = TripleSet(instances={("c0", "instance", "x")},
                  attributes={("c0", "TOP", "x")})
    b = TripleSet(instances={("c0", "instance", "y")},
                  attributes={("c0", "TOP", "y")})
    assert smatch_oracle(a, b).matched == 0
    assert smatch_oracle(a, b).f1 == Fraction(0)


# ----------------------------------------------------------------------
# hill climbing against the oracle

def test_smatch_identity(demo_graph):
    ts = triples(demo_graph)
    score = smatch(ts, ts)
    assert score.f1 == Fraction(1)
    assert score.matched == 9


def test_smatch_relabel_matches_oracle(demo_graph):
    score = smatch(triples(demo_graph), triples(relabeled_demo()))
    assert score.matched == 8
    assert score.f1 == Fraction(8, 9)


def test_smatch_deterministic(demo_graph):
    a = triples(demo_graph)
    b = triples(relabeled_demo())
    runs = [smatch(a, b, restarts=4, seed=13) for _ in range(3)]
    assert all(r.matched == runs[0].matched for r in runs)
    assert all(r.mapping == runs[0].mapping for r in runs)


def test_smatch_empty_sides():
    empty = TripleSet()
    score = smatch(empty, empty)
    assert score.matched == 0
    assert score.f1 == Fraction(0)
    one = TripleSet(instances={("c0", "instance", "x")})
    assert smatch(one, empty).f1 == Fraction(0)
    assert smatch(empty, one).f1 == Fraction(0)


def _random_tripleset(rng, max_vars=5):
    names = ["want-01", "boy", "girl", "go-02", "thing"]
    labels = ["ARG0", "ARG1", "mod", "time"]
    n = rng.randint(1, max_vars)
    ts = TripleSet()
    vs = [f"c{i}" for i in range(n)]
    for v in vs:
        ts.instances.add((v, "instance", rng.choice(names)))
    for _ in range(rng.randint(0, 6)):
        v1, v2 = rng.choice(vs), rng.choice(vs)
        if v1 != v2:
            ts.edges.add((v1, rng.choice(labels), v2))
    for _ in range(rng.randint(0, 2)):
        ts.attributes.add((rng.choice(vs), "polarity", "-"))
    ts.attributes.add((vs[0], "TOP", next(iter(
        name for v, _, name in ts.instances if v == vs[0]))))
    return ts


def test_hill_climb_never_beats_oracle_and_usually_matches():
    rng = random.Random(42)
    agree = 0
    pairs = 120
    for _ in range(pairs):
        a = _random_tripleset(rng)
        b = _random_tripleset(rng)
        hc = smatch(a, b, restarts=8, seed=0)
        ex = smatch_oracle(a, b)
        assert hc.matched <= ex.matched
        if hc.matched == ex.matched:
            agree += 1
    assert agree >= pairs * 0.95


def test_smatch_symmetry_through_oracle():
    rng = random.Random(3)
    for _ in range(25):
        a = _random_tripleset(rng)
        b = _random_tripleset(rng)
        assert smatch_oracle(a, b).matched == smatch_oracle(b, a).matched


def test_matched_count_respects_mapping(demo_graph):
    ts = triples(demo_graph)
    assert matched_count(ts, ts, {}) == 0
    assert matched_count(ts, ts, {"c0": "c0"}) == 2   # instance + TOP
    full = {"c0": "c0", "c1": "c1", "c2": "c2", "c3": "c3"}
    assert matched_count(ts, ts, full) == 9


# ----------------------------------------------------------------------
# breakdown

def test_breakdown_identity_all_ones(demo_graph):
    out = breakdown(demo_graph, build_demo_graph())
    assert set(out) == set(DEFAULT_CATEGORIES)
    for name in ("instances", "edges:ARG", "top", "reentrancy"):
        assert out[name].f1 == Fraction(1), name
    # no polarity anywhere: empty on both sides scores 1.0 with zero totals
    assert out["polarity"].f1 == Fraction(1)
    assert (out["polarity"].total_left, out["polarity"].total_right) == (0, 0)


def test_breakdown_relabel(demo_graph):
    out = breakdown(demo_graph, relabeled_demo())
    assert out["instances"].f1 == Fraction(1)
    assert out["edges:ARG"].matched == 3
    assert out["edges:ARG"].precision == Fraction(3, 4)
    assert out["edges:ARG"].recall == Fraction(3, 4)


def test_breakdown_reentrancy(demo_graph):
    out = breakdown(demo_graph, build_demo_graph(), categories=["reentrancy"])
    score = out["reentrancy"]
    assert (score.matched, score.total_left, score.total_right) == (1, 1, 1)
    assert score.f1 == Fraction(1)


def test_breakdown_asymmetric_empty_category(demo_graph):
    withpol = build_demo_graph()
    neg = withpol.add_concept("-", attribute=True)
    withpol.add_relation("c0", neg, "polarity")
    out = breakdown(withpol, build_demo_graph(), categories=["polarity"])
    assert out["polarity"].f1 == Fraction(0)
    assert out["polarity"].total_left == 1
    assert out["polarity"].total_right == 0


def test_breakdown_unknown_category(demo_graph):
    with pytest.raises(ValueError):
        breakdown(demo_graph, demo_graph, categories=["nonsense"])
    with pytest.raises(ValueError):
        breakdown(demo_graph, demo_graph, categories=["edges:"])


def test_breakdown_edge_category_maps_both_ends():
    # same shapes but shifted variable names: a literal tail comparison
    # would miscount, the mapping-aware count must not
    a = Graph(tid="t.1", tokens=["x", "y"])
    a.add_concept("alpha", [0])
    a.add_concept("beta", [1])
    a.add_relation("c0", "c1", "ARG0")
    b = Graph(tid="t.1", tokens=["x", "y"])
    b.add_concept("beta", [0])      # c0 is beta here
    b.add_concept("alpha", [1])     # c1 is alpha
    b.add_relation("c1", "c0", "ARG0")
    out = breakdown(a, b, categories=["edges:ARG"])
    assert out["edges:ARG"].matched == 1
    assert out["edges:ARG"].f1 == Fraction(1)
