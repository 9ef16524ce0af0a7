"""Reader and writer for the JSON annotation batch format.

A batch file is one JSON object {"graphs": [...]}.  Graph objects keep
a frozen key order (tid, annotator, last_saved, tokens, concepts,
relations, covered_token_ids, _concept_id, _relation_id) so that
repeated saves of the same state are byte-identical except for the
timestamp.  Unknown keys at any level are kept in side maps and written
back after the known keys, so files produced by newer tools survive a
round trip unharmed.
"""

from __future__ import annotations

import json
import os
from datetime import datetime

from .graph import Batch, Concept, Graph, Relation

GRAPH_KEYS = ("tid", "annotator", "last_saved", "tokens", "concepts",
              "relations", "covered_token_ids", "_concept_id", "_relation_id")
CONCEPT_KEYS = ("name", "token_ids", "attribute", "first_token_id")
RELATION_KEYS = ("parent_id", "child_id", "label", "referent")

TIMESTAMP_FORMAT = "%m/%d/%Y %H:%M:%S"


class FormatError(Exception):
    """Schema or invariant failure in a batch file, with a JSON path."""


def timestamp() -> str:
    return datetime.now().strftime(TIMESTAMP_FORMAT)


def read_plain_text(name: str, text: str, annotator: str = "") -> Batch:
    """Build a fresh batch from raw sentences, one per non-blank line.

    Tokens come from whitespace splitting.  Graph ids are
    "<base>.<n>" where base is the file name without its extension and
    n counts non-blank lines from 1.
    """
    base = os.path.splitext(os.path.basename(name))[0]
    batch = Batch(source_name=os.path.basename(name))
    n = 0
    for line in text.splitlines():
        if not line.strip():
            continue
        n += 1
        batch.graphs.append(Graph(tid=f"{base}.{n}", annotator=annotator,
                                  tokens=line.split()))
    return batch


def write_json(batch: Batch) -> bytes:
    """Serialize a batch to UTF-8 JSON bytes.

    Every graph must pass validate() and tids must be unique; anything
    else is a caller bug and raises FormatError before a byte is
    produced.  Output is deterministic: identical batches give
    identical bytes.
    """
    seen = set()
    for i, g in enumerate(batch.graphs):
        if g.tid in seen:
            raise FormatError(f"graphs[{i}]: duplicate tid {g.tid!r}")
        seen.add(g.tid)
        violations = g.validate()
        if violations:
            raise FormatError(
                f"graphs[{i}] ({g.tid}): " + "; ".join(str(v) for v in violations))
    doc = {"graphs": [_graph_to_dict(g) for g in batch.graphs]}
    doc.update(batch.extra)
    return (json.dumps(doc, ensure_ascii=False, indent=2) + "\n").encode("utf-8")


def graph_to_dict(g: Graph) -> dict:
    """The JSON object form of one graph (same shape as in batch files)."""
    return _graph_to_dict(g)


def read_json(data: bytes | str, source_name: str = "") -> Batch:
    """Parse batch JSON, checking the schema and every graph invariant.

    Errors carry a path such as "graphs[0].concepts.c1.token_ids" so a
    broken file can be fixed by hand.
    """
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    try:
        doc = json.loads(data)
    except json.JSONDecodeError as e:
        raise FormatError(f"not valid JSON: {e}") from None
    if not isinstance(doc, dict):
        raise FormatError("top level: expected an object")
    if "graphs" not in doc:
        raise FormatError("top level: missing key 'graphs'")
    if not isinstance(doc["graphs"], list):
        raise FormatError("graphs: expected a list")
    batch = Batch(source_name=source_name)
    batch.extra = {k: v for k, v in doc.items() if k != "graphs"}
    seen = set()
    for i, obj in enumerate(doc["graphs"]):
        g = _graph_from_dict(obj, f"graphs[{i}]")
        if g.tid in seen:
            raise FormatError(f"graphs[{i}]: duplicate tid {g.tid!r}")
        seen.add(g.tid)
        violations = g.validate()
        if violations:
            raise FormatError(
                f"graphs[{i}] ({g.tid}): " + "; ".join(str(v) for v in violations))
        batch.graphs.append(g)
    return batch


# ----------------------------------------------------------------------

def _graph_to_dict(g: Graph) -> dict:
    concepts = {}
    for cid, c in g.concepts.items():
        entry = {"name": c.name, "token_ids": list(c.token_ids),
                 "attribute": c.attribute, "first_token_id": c.first_token_id}
        entry.update(c.extra)
        concepts[cid] = entry
    relations = {}
    for rid, r in g.relations.items():
        entry = {"parent_id": r.parent_id, "child_id": r.child_id,
                 "label": r.label, "referent": r.referent}
        entry.update(r.extra)
        relations[rid] = entry
    out = {
        "tid": g.tid,
        "annotator": g.annotator,
        "last_saved": g.last_saved,
        "tokens": list(g.tokens),
        "concepts": concepts,
        "relations": relations,
        "covered_token_ids": list(g.covered_token_ids),
        "_concept_id": g.concept_counter,
        "_relation_id": g.relation_counter,
    }
    out.update(g.extra)
    return out


def _graph_from_dict(obj, path: str) -> Graph:
    if not isinstance(obj, dict):
        raise FormatError(f"{path}: expected an object")
    tid = _expect(obj, "tid", str, path)
    annotator = _expect(obj, "annotator", str, path)
    last_saved = _expect(obj, "last_saved", str, path)
    tokens = _expect_list(obj, "tokens", str, path)
    covered = _expect_list(obj, "covered_token_ids", int, path)
    concept_counter = _expect(obj, "_concept_id", int, path)
    relation_counter = _expect(obj, "_relation_id", int, path)

    raw_concepts = _expect(obj, "concepts", dict, path)
    concepts: dict[str, Concept] = {}
    for cid, entry in raw_concepts.items():
        cpath = f"{path}.concepts.{cid}"
        if not isinstance(entry, dict):
            raise FormatError(f"{cpath}: expected an object")
        concepts[cid] = Concept(
            name=_expect(entry, "name", str, cpath),
            token_ids=_expect_list(entry, "token_ids", int, cpath),
            attribute=_expect(entry, "attribute", bool, cpath),
            first_token_id=_expect(entry, "first_token_id", int, cpath),
            extra={k: v for k, v in entry.items() if k not in CONCEPT_KEYS},
        )

    raw_relations = _expect(obj, "relations", dict, path)
    relations: dict[str, Relation] = {}
    for rid, entry in raw_relations.items():
        rpath = f"{path}.relations.{rid}"
        if not isinstance(entry, dict):
            raise FormatError(f"{rpath}: expected an object")
        relations[rid] = Relation(
            parent_id=_expect(entry, "parent_id", str, rpath),
            child_id=_expect(entry, "child_id", str, rpath),
            label=_expect(entry, "label", str, rpath),
            referent=_expect(entry, "referent", bool, rpath),
            extra={k: v for k, v in entry.items() if k not in RELATION_KEYS},
        )

    return Graph(
        tid=tid, annotator=annotator, last_saved=last_saved, tokens=tokens,
        concepts=concepts, relations=relations, covered_token_ids=covered,
        concept_counter=concept_counter, relation_counter=relation_counter,
        extra={k: v for k, v in obj.items() if k not in GRAPH_KEYS},
    )


def _expect(obj: dict, key: str, typ, path: str):
    if key not in obj:
        raise FormatError(f"{path}: missing key {key!r}")
    value = obj[key]
    if typ is int and isinstance(value, bool):
        raise FormatError(f"{path}.{key}: expected {typ.__name__}")
    if typ is not bool and isinstance(value, bool) and typ is int:
        raise FormatError(f"{path}.{key}: expected {typ.__name__}")
    if not isinstance(value, typ):
        raise FormatError(f"{path}.{key}: expected {typ.__name__}")
    return value


def _expect_list(obj: dict, key: str, item_type, path: str) -> list:
    value = _expect(obj, key, list, path)
    for j, item in enumerate(value):
        if not isinstance(item, item_type) or (item_type is int and isinstance(item, bool)):
            raise FormatError(f"{path}.{key}[{j}]: expected {item_type.__name__}")
    return list(value)
