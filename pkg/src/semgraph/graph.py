"""In-memory model of meaning-representation graphs.

A Graph holds the tokens of one sentence plus the concepts and relations
annotated over them.  Concepts are keyed "c{n}" and relations "r{n}";
both counters only ever grow, so an id is never reused within a graph,
even after deletions.  Non-referent relations must form a multi-rooted
forest (at most one non-referent parent per node, no cycles): that is
what keeps every graph serializable to Penman notation.  Re-entrancies
are ordinary relations flagged referent=True and may point anywhere
except at attribute concepts, which are leaf constants.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

_CONCEPT_ID = re.compile(r"^c\d+$")
_RELATION_ID = re.compile(r"^r\d+$")
# characters that would make a relation label unparseable in Penman output
_BAD_LABEL_CHARS = set(' \t\n\r():~"/')

# sort key for children that have no alignment of their own
_UNALIGNED = 1 << 60


class GraphError(Exception):
    """Base class for graph mutation failures."""


class MissingIdError(GraphError):
    """Concept or relation id not present in the graph."""


class TokenRangeError(GraphError):
    """Token index outside [0, len(tokens))."""


class StructureError(GraphError):
    """Mutation would violate a structural invariant."""


@dataclass
class Violation:
    """One invariant violation found by Graph.validate()."""

    kind: str                 # FOREST, COVERAGE, COUNTER, ENDPOINT, ...
    ids: tuple[str, ...]      # offending concept/relation ids
    message: str

    def __str__(self) -> str:
        return f"{self.kind}({', '.join(self.ids)}): {self.message}"


@dataclass
class Concept:
    """A node: either a predicate/entity concept or a leaf constant.

    token_ids is the sorted list of 0-based token indices this concept
    is aligned to; first_token_id caches min(token_ids) or -1 when the
    concept is unaligned.  attribute=True marks constants (numbers,
    quoted strings, polarity, modes): they never have outgoing
    relations and are never the target of a re-entrancy.
    """

    name: str
    token_ids: list[int] = field(default_factory=list)
    attribute: bool = False
    first_token_id: int = -1
    extra: dict = field(default_factory=dict)


@dataclass
class Relation:
    """A labeled edge between two concepts.

    Labels are stored without the leading colon.  Inverse relations
    keep their surface form (label ending in "-of"); nothing is
    normalized away.  referent=True marks a re-entrancy: the edge is
    rendered as a bare variable reference instead of a nested node.
    """

    parent_id: str
    child_id: str
    label: str
    referent: bool = False
    extra: dict = field(default_factory=dict)


@dataclass
class Graph:
    """One annotated sentence: tokens, concepts, relations, counters."""

    tid: str
    annotator: str = ""
    last_saved: str = ""
    tokens: list[str] = field(default_factory=list)
    concepts: dict[str, Concept] = field(default_factory=dict)
    relations: dict[str, Relation] = field(default_factory=dict)
    covered_token_ids: list[int] = field(default_factory=list)
    concept_counter: int = 0
    relation_counter: int = 0
    meta: dict[str, str] = field(default_factory=dict)   # unrecognized "# ::key" lines
    extra: dict = field(default_factory=dict)            # unrecognized JSON keys

    # ------------------------------------------------------------------
    # mutations

    def add_concept(self, name: str, token_ids: list[int] | None = None,
                    attribute: bool = False) -> str:
        """Create a concept and return its id.

        token_ids may arrive unsorted or with duplicates; they are
        stored as a sorted set.  Raises TokenRangeError for indices
        outside the sentence.
        """
        _check_name(name)
        ids = sorted(set(token_ids or []))
        self._check_token_range(ids)
        cid = f"c{self.concept_counter}"
        self.concept_counter += 1
        self.concepts[cid] = Concept(name, ids, attribute, ids[0] if ids else -1)
        self._recompute_coverage()
        return cid

    def add_relation(self, parent_id: str, child_id: str, label: str,
                     referent: bool = False, inverse: bool = False) -> str:
        """Create a relation and return its id.

        The stored referent flag is the requested one OR-ed with an
        automatic upgrade: if the child already has a non-referent
        parent, the new edge becomes a re-entrancy no matter what was
        requested, so the tree structure of the graph is never broken.
        inverse=True appends "-of" to the label.
        """
        parent = self._concept(parent_id)
        child = self._concept(child_id)
        if parent_id == child_id:
            raise StructureError(f"self-loop on {parent_id}")
        _check_label(label)
        if inverse:
            label = label + "-of"
        if parent.attribute:
            raise StructureError(
                f"{parent_id} is an attribute; constants cannot have outgoing relations")
        effective = referent or any(
            r.child_id == child_id and not r.referent for r in self.relations.values())
        if child.attribute and effective:
            raise StructureError(
                f"{child_id} is an attribute; constants are never re-entered")
        if not effective and self._reaches(child_id, parent_id):
            # a second path into an ancestor must be a re-entrancy; the
            # caller asked for a tree edge, which would close a cycle
            raise StructureError(
                f"edge {parent_id}->{child_id} would create a cycle of tree relations")
        rid = f"r{self.relation_counter}"
        self.relation_counter += 1
        self.relations[rid] = Relation(parent_id, child_id, label, effective)
        return rid

    def update_concept(self, concept_id: str, name: str) -> None:
        _check_name(name)
        self._concept(concept_id).name = name

    def update_relation(self, relation_id: str, label: str) -> None:
        _check_label(label)
        self._relation(relation_id).label = label

    def delete_concept(self, concept_id: str) -> None:
        """Remove a concept and every relation touching it.

        Counters are left untouched, so the freed ids are never handed
        out again.  A surviving node whose tree edge vanished keeps its
        re-entrancies; the lowest-r-id one whose promotion does not
        close a cycle is promoted to a tree edge so the node stays
        reachable in Penman output.
        """
        self._concept(concept_id)
        removed = [rid for rid, r in self.relations.items()
                   if r.parent_id == concept_id or r.child_id == concept_id]
        orphans = [self.relations[rid].child_id for rid in removed
                   if self.relations[rid].parent_id == concept_id
                   and not self.relations[rid].referent]
        for rid in removed:
            del self.relations[rid]
        del self.concepts[concept_id]
        for child_id in orphans:
            self._promote_referent(child_id)
        self._recompute_coverage()

    def delete_relation(self, relation_id: str) -> None:
        """Remove a single relation.  No re-entrancy promotion happens
        here, so deleting a just-added relation restores the previous
        relation map exactly."""
        self._relation(relation_id)
        del self.relations[relation_id]

    def align(self, concept_id: str, token_ids: list[int]) -> None:
        """Add token indices to a concept's alignment (set union)."""
        c = self._concept(concept_id)
        self._check_token_range(token_ids)
        c.token_ids = sorted(set(c.token_ids) | set(token_ids))
        c.first_token_id = c.token_ids[0] if c.token_ids else -1
        self._recompute_coverage()

    def unalign(self, concept_id: str, token_ids: list[int]) -> None:
        """Remove token indices from a concept's alignment.  Indices
        that were not aligned are ignored."""
        c = self._concept(concept_id)
        self._check_token_range(token_ids)
        c.token_ids = sorted(set(c.token_ids) - set(token_ids))
        c.first_token_id = c.token_ids[0] if c.token_ids else -1
        self._recompute_coverage()

    # ------------------------------------------------------------------
    # queries

    def ordered_children(self, parent_id: str) -> list[tuple[str, str]]:
        """Children of a node in surface order: (relation id, child id).

        Tree children with an alignment come first, sorted by the
        child's first aligned token.  Re-entrancies and unaligned
        children go last: a re-entrant mention has no definition span
        of its own (its alignment belongs to the defining edge), so it
        sorts like an unaligned child.  Ties keep creation order.
        """
        self._concept(parent_id)
        items = []
        for rid, rel in self.relations.items():
            if rel.parent_id != parent_id:
                continue
            child = self.concepts.get(rel.child_id)
            if rel.referent or child is None or not child.token_ids:
                key = _UNALIGNED
            else:
                key = child.first_token_id
            items.append((key, _num(rid), rid, rel.child_id))
        items.sort(key=lambda t: (t[0], t[1]))
        return [(rid, cid) for _, _, rid, cid in items]

    def roots(self) -> list[str]:
        """Concepts with no incoming tree relation, in creation order.
        Attribute concepts count as roots only while fully detached."""
        tree_children = {r.child_id for r in self.relations.values() if not r.referent}
        targets = {r.child_id for r in self.relations.values()}
        out = []
        for cid, c in self.concepts.items():
            if cid in tree_children:
                continue
            if c.attribute and cid in targets:
                continue
            out.append(cid)
        return out

    def validate(self) -> list[Violation]:
        """Check every structural invariant; return all violations found."""
        v: list[Violation] = []
        n = len(self.tokens)
        for cid, c in self.concepts.items():
            if not _CONCEPT_ID.match(cid):
                v.append(Violation("ID", (cid,), "malformed concept id"))
            elif _num(cid) >= self.concept_counter:
                v.append(Violation("COUNTER", (cid,),
                                   f"id index >= _concept_id {self.concept_counter}"))
            if not c.name:
                v.append(Violation("NAME", (cid,), "empty concept name"))
            if c.token_ids != sorted(set(c.token_ids)):
                v.append(Violation("TOKENS", (cid,), "token ids not strictly ascending"))
            elif any(t < 0 or t >= n for t in c.token_ids):
                v.append(Violation("TOKENS", (cid,), f"token id outside [0, {n})"))
            want_first = c.token_ids[0] if c.token_ids else -1
            if c.first_token_id != want_first:
                v.append(Violation("TOKENS", (cid,),
                                   f"first_token_id {c.first_token_id} != {want_first}"))

        dangling = set()
        for rid, r in self.relations.items():
            if not _RELATION_ID.match(rid):
                v.append(Violation("ID", (rid,), "malformed relation id"))
            elif _num(rid) >= self.relation_counter:
                v.append(Violation("COUNTER", (rid,),
                                   f"id index >= _relation_id {self.relation_counter}"))
            if not r.label or r.label.startswith(":"):
                v.append(Violation("LABEL", (rid,), f"bad label {r.label!r}"))
            missing = [x for x in (r.parent_id, r.child_id) if x not in self.concepts]
            if missing:
                v.append(Violation("ENDPOINT", (rid, *missing),
                                   f"relation endpoint does not exist: {', '.join(missing)}"))
                dangling.add(rid)
                continue
            if r.parent_id == r.child_id:
                v.append(Violation("SELF_LOOP", (rid,), f"self-loop on {r.parent_id}"))
                dangling.add(rid)
                continue
            if self.concepts[r.parent_id].attribute:
                v.append(Violation("ATTRIBUTE", (rid, r.parent_id),
                                   "attribute concept has an outgoing relation"))
            if self.concepts[r.child_id].attribute and r.referent:
                v.append(Violation("ATTRIBUTE", (rid, r.child_id),
                                   "attribute concept is the target of a re-entrancy"))

        # forest: at most one tree parent per node, no cycles among tree edges
        incoming: dict[str, list[str]] = {}
        for rid, r in self.relations.items():
            if rid in dangling or r.referent:
                continue
            incoming.setdefault(r.child_id, []).append(rid)
        for cid, rids in incoming.items():
            if len(rids) > 1:
                v.append(Violation("FOREST", (cid, *sorted(rids, key=_num)),
                                   f"{cid} has {len(rids)} tree parents"))
        for cycle in self._tree_cycles(dangling):
            v.append(Violation("FOREST", tuple(cycle),
                               "cycle of tree relations: " + " -> ".join(cycle)))

        want = sorted({t for c in self.concepts.values() for t in c.token_ids})
        if self.covered_token_ids != want:
            v.append(Violation("COVERAGE", (),
                               f"covered_token_ids {self.covered_token_ids} != {want}"))
        return v

    # ------------------------------------------------------------------
    # internals

    def _concept(self, cid: str) -> Concept:
        try:
            return self.concepts[cid]
        except KeyError:
            raise MissingIdError(f"no concept {cid!r}") from None

    def _relation(self, rid: str) -> Relation:
        try:
            return self.relations[rid]
        except KeyError:
            raise MissingIdError(f"no relation {rid!r}") from None

    def _check_token_range(self, token_ids) -> None:
        for t in token_ids:
            if not isinstance(t, int) or isinstance(t, bool) or t < 0 or t >= len(self.tokens):
                raise TokenRangeError(
                    f"token id {t!r} outside [0, {len(self.tokens)})")

    def _recompute_coverage(self) -> None:
        self.covered_token_ids = sorted(
            {t for c in self.concepts.values() for t in c.token_ids})

    def _reaches(self, src: str, dst: str) -> bool:
        """True when dst is reachable from src along tree relations."""
        stack, seen = [src], set()
        while stack:
            cur = stack.pop()
            if cur == dst:
                return True
            if cur in seen:
                continue
            seen.add(cur)
            stack.extend(r.child_id for r in self.relations.values()
                         if not r.referent and r.parent_id == cur)
        return False

    def _promote_referent(self, child_id: str) -> None:
        if child_id not in self.concepts:
            return
        if any(r.child_id == child_id and not r.referent for r in self.relations.values()):
            return
        candidates = sorted(
            (rid for rid, r in self.relations.items()
             if r.child_id == child_id and r.referent),
            key=_num)
        for rid in candidates:
            parent = self.relations[rid].parent_id
            if not self._reaches(child_id, parent):
                self.relations[rid].referent = False
                return
        # every re-entrancy into this node comes from its own subtree;
        # promoting one would close a cycle, so the node becomes a root

    def _tree_cycles(self, skip: set[str]) -> list[list[str]]:
        children: dict[str, list[str]] = {}
        for rid, r in self.relations.items():
            if rid in skip or r.referent:
                continue
            children.setdefault(r.parent_id, []).append(r.child_id)
        color: dict[str, int] = {}          # 1 = on stack, 2 = done
        cycles: list[list[str]] = []

        def visit(cid: str, path: list[str]) -> None:
            color[cid] = 1
            path.append(cid)
            for nxt in children.get(cid, ()):
                if color.get(nxt) == 1:
                    cycles.append(path[path.index(nxt):])
                elif color.get(nxt) is None:
                    visit(nxt, path)
            path.pop()
            color[cid] = 2

        for cid in self.concepts:
            if color.get(cid) is None:
                visit(cid, [])
        return cycles


@dataclass
class Batch:
    """An ordered collection of graphs loaded from one source file."""

    source_name: str = ""
    graphs: list[Graph] = field(default_factory=list)
    extra: dict = field(default_factory=dict)

    def tids(self) -> list[str]:
        return [g.tid for g in self.graphs]


def _num(xid: str) -> int:
    try:
        return int(xid[1:])
    except ValueError:
        return -1


def _check_name(name: str) -> None:
    if not isinstance(name, str) or not name:
        raise StructureError("concept name must be a non-empty string")


def _check_label(label: str) -> None:
    if not isinstance(label, str) or not label:
        raise StructureError("relation label must be a non-empty string")
    if label.startswith(":"):
        raise StructureError(f"label {label!r} must not carry the leading colon")
    bad = _BAD_LABEL_CHARS.intersection(label)
    if bad:
        raise StructureError(f"label {label!r} contains unusable characters {sorted(bad)}")
