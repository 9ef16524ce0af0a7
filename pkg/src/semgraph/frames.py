"""Annotation-scheme resources: concept and relation inventories.

A scheme ships as a directory holding concepts.json and relations.json,
each a flat object mapping a name to a one-line description (for
predicate senses, the description is the argument structure).  Two
schemes are bundled under semgraph/resources/: "amr" (a curated subset
of standard concepts and frequent PropBank frames) and "wiser"
(frameless).  Custom directories with the same two files work as-is.

Inventories are advisory.  Nothing stops an annotator from creating a
concept that is not listed here; the search and description facilities
exist to speed up the common case, not to police the vocabulary.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from importlib import resources as _il_resources
from pathlib import Path

DEFAULT_SCHEME = "wiser"

_SENSE = re.compile(r"-\d+$")


class ResourceError(Exception):
    """Resource files missing or malformed."""


@dataclass(frozen=True)
class ResourceSet:
    """Immutable inventories for one annotation scheme."""

    scheme: str
    concepts: dict[str, str] = field(default_factory=dict)
    relations: dict[str, str] = field(default_factory=dict)


def builtin_schemes() -> list[str]:
    root = _il_resources.files("semgraph") / "resources"
    return sorted(p.name for p in root.iterdir() if (p / "concepts.json").is_file())


def load_resources(scheme: str = DEFAULT_SCHEME,
                   path: str | Path | None = None) -> ResourceSet:
    """Load a scheme's inventories.

    An explicit directory wins over the scheme name: the set is named
    after the directory and the bundled files are not consulted.
    """
    if path is not None:
        base = Path(path)
        if not base.is_dir():
            raise ResourceError(f"resource directory not found: {base}")
        return ResourceSet(scheme=base.name or str(base),
                           concepts=_read(base / "concepts.json"),
                           relations=_read(base / "relations.json"))
    if not scheme:
        raise ResourceError("scheme must be nonempty")
    root = _il_resources.files("semgraph") / "resources" / scheme
    if not (root / "concepts.json").is_file():
        raise ResourceError(
            f"unknown scheme {scheme!r}; bundled: {', '.join(builtin_schemes())}")
    return ResourceSet(scheme=scheme,
                       concepts=_read(root / "concepts.json"),
                       relations=_read(root / "relations.json"))


def _read(path) -> dict[str, str]:
    try:
        text = path.read_text(encoding="utf-8")
    except (FileNotFoundError, NotADirectoryError):
        raise ResourceError(f"missing resource file: {path}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ResourceError(f"{path}: not valid JSON ({e})") from None
    if not isinstance(data, dict) or not all(
            isinstance(k, str) and isinstance(v, str) for k, v in data.items()):
        raise ResourceError(f"{path}: expected an object of name -> description")
    return data


def search_concepts(rs: ResourceSet, query: str, limit: int = 50) -> list[tuple[str, str]]:
    return _search(rs.concepts, query, limit)


def search_relations(rs: ResourceSet, query: str, limit: int = 50) -> list[tuple[str, str]]:
    return _search(rs.relations, query, limit)


def frame_description(rs: ResourceSet, name: str) -> str | None:
    """Exact lookup of a concept's argument structure / description."""
    return rs.concepts.get(name)


def _search(inventory: dict[str, str], query: str, limit: int) -> list[tuple[str, str]]:
    """Deterministic three-tier ranking: exact, then prefix, then
    substring, lexicographic within a tier, all case-insensitive.
    A trailing sense number on the query is also tried stripped, so
    "want-03" still surfaces the want sense family; those hits rank
    after every direct match.
    """
    if limit <= 0:
        raise ValueError("limit must be positive")
    q = query.strip().lower()
    if not q:
        return []
    stem = _SENSE.sub("", q)
    ranked: list[tuple[int, str]] = []
    for name in inventory:
        tier = _tier(name.lower(), q)
        if tier is None and stem != q:
            sub = _tier(name.lower(), stem)
            tier = None if sub is None else 3 + sub
        if tier is not None:
            ranked.append((tier, name))
    ranked.sort()
    return [(name, inventory[name]) for _, name in ranked[:limit]]


def _tier(name: str, q: str) -> int | None:
    if name == q:
        return 0
    if name.startswith(q):
        return 1
    if q in name:
        return 2
    return None
