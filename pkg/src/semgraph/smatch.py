"""Triple extraction and Smatch scoring for pairs of graphs.

A graph is flattened into three sets of triples: instance triples for
non-attribute concepts, attribute triples for constants plus one TOP
marker per root, and edge triples between concepts.  Scoring searches
for the injective variable mapping that maximizes the number of shared
triples; the standard hill-climbing search with restarts is provided
next to an exhaustive oracle for small inputs.  Scores are kept as
exact rationals so equality checks in downstream tooling never hinge
on float rounding.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .graph import Graph

Triple = tuple[str, str, str]

ORACLE_MAX_VARS = 8


@dataclass
class TripleSet:
    """Instance, attribute, and edge triples of one graph.

    instances: (var, "instance", concept name)
    attributes: (var, label, constant value), including (root, "TOP", name)
    edges: (parent var, label, child var)
    """

    instances: set[Triple] = field(default_factory=set)
    attributes: set[Triple] = field(default_factory=set)
    edges: set[Triple] = field(default_factory=set)

    @property
    def size(self) -> int:
        return len(self.instances) + len(self.attributes) + len(self.edges)

    def variables(self) -> list[str]:
        return sorted({t[0] for t in self.instances}, key=_var_key)


@dataclass
class SmatchScore:
    precision: Fraction
    recall: Fraction
    f1: Fraction
    matched: int
    total_left: int
    total_right: int
    mapping: dict[str, str] = field(default_factory=dict)


def triples(g: Graph) -> TripleSet:
    """Flatten a graph into its triple sets.

    Attribute concepts appear only as constant values on the edge that
    reaches them, never as variables.  Every non-attribute root adds a
    TOP marker; a detached constant contributes nothing, since there is
    no variable to hang a marker on.
    """
    ts = TripleSet()
    for cid, c in g.concepts.items():
        if not c.attribute:
            ts.instances.add((cid, "instance", c.name))
    for r in g.relations.values():
        child = g.concepts[r.child_id]
        if child.attribute:
            ts.attributes.add((r.parent_id, r.label, child.name))
        else:
            ts.edges.add((r.parent_id, r.label, r.child_id))
    for cid in g.roots():
        c = g.concepts[cid]
        if not c.attribute:
            ts.attributes.add((cid, "TOP", c.name))
    return ts


def matched_count(a: TripleSet, b: TripleSet, mapping: dict[str, str]) -> int:
    """Number of triples of a that land on triples of b under mapping."""
    n = 0
    for v, _, name in a.instances:
        if (mapping.get(v), "instance", name) in b.instances:
            n += 1
    for v, label, value in a.attributes:
        if (mapping.get(v), label, value) in b.attributes:
            n += 1
    for v1, label, v2 in a.edges:
        m1, m2 = mapping.get(v1), mapping.get(v2)
        if m1 is not None and m2 is not None and (m1, label, m2) in b.edges:
            n += 1
    return n


def smatch(a: TripleSet, b: TripleSet, restarts: int = 4, seed: int = 0) -> SmatchScore:
    """Hill-climbing Smatch between two triple sets.

    Restart 0 starts from a concept-name agreement mapping (left
    variables in most-frequent-concept-first order grab an unmapped
    right variable with the same concept); the remaining restarts start
    from random injective mappings drawn from the seeded generator, so
    repeated calls give identical results.
    """
    left = a.variables()
    right = b.variables()
    rng = random.Random(seed)
    best_matched = -1
    best_mapping: dict[str, str] = {}
    for attempt in range(max(1, restarts)):
        if attempt == 0:
            mapping = _concept_seed(a, b, left, right)
        else:
            mapping = _random_seed(rng, left, right)
        mapping, count = _climb(a, b, mapping, left, right)
        if count > best_matched:
            best_matched = count
            best_mapping = mapping
    return _score(a, b, best_matched, best_mapping)


def smatch_oracle(a: TripleSet, b: TripleSet) -> SmatchScore:
    """Exhaustive search over all injective mappings of the smaller
    variable set into the larger.  Guarded: refuses when both sides
    exceed ORACLE_MAX_VARS variables."""
    left = a.variables()
    right = b.variables()
    if min(len(left), len(right)) > ORACLE_MAX_VARS:
        raise ValueError(
            f"oracle limited to {ORACLE_MAX_VARS} variables on the smaller side")
    flipped = len(left) > len(right)
    small, large = (right, left) if flipped else (left, right)
    best_matched = -1
    best_mapping: dict[str, str] = {}
    for images in itertools.permutations(large, len(small)):
        mapping = dict(zip(small, images))
        if flipped:
            mapping = {v: k for k, v in mapping.items()}
        count = matched_count(a, b, mapping)
        if count > best_matched:
            best_matched = count
            best_mapping = mapping
    if best_matched < 0:        # one side has no variables at all
        best_matched = 0
    return _score(a, b, best_matched, best_mapping)


# breakdown filters: name -> (kind, side selector).  Node-kind triples
# carry a literal in third position and only map their head variable;
# edge-kind triples map both ends.  "edges:PREFIX" is parsed dynamically
# and selects edge triples whose label starts with PREFIX.
_FILTERS = {
    "instances": ("node", lambda ts, reent: set(ts.instances)),
    "attributes": ("node", lambda ts, reent: {t for t in ts.attributes if t[1] != "TOP"}),
    "top": ("node", lambda ts, reent: {t for t in ts.attributes if t[1] == "TOP"}),
    "polarity": ("node", lambda ts, reent: {t for t in ts.attributes if t[1] == "polarity"}),
    "reentrancy": ("edge", lambda ts, reent: set(reent)),
}

DEFAULT_CATEGORIES = ("instances", "attributes", "edges:ARG",
                      "polarity", "reentrancy", "top")


def breakdown(a: Graph, b: Graph, categories=None,
              restarts: int = 4, seed: int = 0) -> dict[str, SmatchScore]:
    """Per-category scores under one fixed variable mapping.

    The mapping is the best full-graph mapping; each category then
    filters both sides to a triple subset and recounts.  A category
    empty on both sides scores 1.0 with zero totals.  Unknown category
    names raise ValueError.
    """
    ts_a, ts_b = triples(a), triples(b)
    reent_a = _reentrant_edges(a)
    reent_b = _reentrant_edges(b)
    mapping = smatch(ts_a, ts_b, restarts=restarts, seed=seed).mapping
    out: dict[str, SmatchScore] = {}
    for name in (categories or DEFAULT_CATEGORIES):
        kind, select = _resolve_filter(name)
        sub_a = select(ts_a, reent_a)
        sub_b = select(ts_b, reent_b)
        matched = _matched_subset(kind, sub_a, sub_b, mapping)
        out[name] = _subset_score(matched, len(sub_a), len(sub_b), mapping)
    return out


# ----------------------------------------------------------------------
# internals

def _var_key(v: str):
    tail = v[1:]
    return (0, int(tail)) if tail.isdigit() else (1, v)


def _score(a: TripleSet, b: TripleSet, matched: int,
           mapping: dict[str, str]) -> SmatchScore:
    total_left, total_right = a.size, b.size
    p = Fraction(matched, total_left) if total_left else Fraction(0)
    r = Fraction(matched, total_right) if total_right else Fraction(0)
    f1 = 2 * p * r / (p + r) if p + r else Fraction(0)
    return SmatchScore(p, r, f1, matched, total_left, total_right, dict(mapping))


def _subset_score(matched: int, total_left: int, total_right: int,
                  mapping: dict[str, str]) -> SmatchScore:
    if total_left == 0 and total_right == 0:
        one = Fraction(1)
        return SmatchScore(one, one, one, 0, 0, 0, dict(mapping))
    p = Fraction(matched, total_left) if total_left else Fraction(0)
    r = Fraction(matched, total_right) if total_right else Fraction(0)
    f1 = 2 * p * r / (p + r) if p + r else Fraction(0)
    return SmatchScore(p, r, f1, matched, total_left, total_right, dict(mapping))


def _concept_seed(a: TripleSet, b: TripleSet,
                  left: list[str], right: list[str]) -> dict[str, str]:
    name_of = {v: name for v, _, name in a.instances}
    freq: dict[str, int] = {}
    for v in left:
        freq[name_of[v]] = freq.get(name_of[v], 0) + 1
    pool: dict[str, list[str]] = {}
    for v, _, name in sorted(b.instances, key=lambda t: _var_key(t[0])):
        pool.setdefault(name, []).append(v)
    mapping: dict[str, str] = {}
    for v in sorted(left, key=lambda v: (-freq[name_of[v]], _var_key(v))):
        avail = pool.get(name_of[v])
        if avail:
            mapping[v] = avail.pop(0)
    return mapping


def _random_seed(rng: random.Random, left: list[str],
                 right: list[str]) -> dict[str, str]:
    if not left or not right:
        return {}
    if len(left) <= len(right):
        images = rng.sample(right, len(left))
        return dict(zip(left, images))
    chosen = rng.sample(left, len(right))
    images = rng.sample(right, len(right))
    return dict(zip(chosen, images))


def _climb(a: TripleSet, b: TripleSet, mapping: dict[str, str],
           left: list[str], right: list[str]) -> tuple[dict[str, str], int]:
    current = matched_count(a, b, mapping)
    while True:
        best_gain = 0
        best_next = None
        used = set(mapping.values())
        # move: remap one left variable to a free right variable or to nothing
        for lv in left:
            old = mapping.get(lv)
            for rv in right:
                if rv == old or rv in used:
                    continue
                trial = dict(mapping)
                trial[lv] = rv
                gain = matched_count(a, b, trial) - current
                if gain > best_gain:
                    best_gain, best_next = gain, trial
            if old is not None:
                trial = dict(mapping)
                del trial[lv]
                gain = matched_count(a, b, trial) - current
                if gain > best_gain:
                    best_gain, best_next = gain, trial
        # swap: exchange the images of two left variables
        for i, lv1 in enumerate(left):
            for lv2 in left[i + 1:]:
                m1, m2 = mapping.get(lv1), mapping.get(lv2)
                if m1 is None and m2 is None:
                    continue
                trial = dict(mapping)
                if m2 is None:
                    del trial[lv1]
                else:
                    trial[lv1] = m2
                if m1 is None:
                    del trial[lv2]
                else:
                    trial[lv2] = m1
                gain = matched_count(a, b, trial) - current
                if gain > best_gain:
                    best_gain, best_next = gain, trial
        if best_next is None:
            return mapping, current
        mapping = best_next
        current += best_gain


def _reentrant_edges(g: Graph) -> set[Triple]:
    out = set()
    for r in g.relations.values():
        if r.referent and not g.concepts[r.child_id].attribute:
            out.add((r.parent_id, r.label, r.child_id))
    return out


def _resolve_filter(name: str):
    if name in _FILTERS:
        return _FILTERS[name]
    if name.startswith("edges:") and len(name) > len("edges:"):
        prefix = name[len("edges:"):]
        return ("edge",
                lambda ts, reent: {t for t in ts.edges if t[1].startswith(prefix)})
    raise ValueError(f"unknown breakdown category {name!r}")


def _matched_subset(kind: str, sub_a: set[Triple], sub_b: set[Triple],
                    mapping: dict[str, str]) -> int:
    n = 0
    for v1, label, v2 in sub_a:
        head = mapping.get(v1)
        if head is None:
            continue
        tail = mapping.get(v2) if kind == "edge" else v2
        if tail is not None and (head, label, tail) in sub_b:
            n += 1
    return n
