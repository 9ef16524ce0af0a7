"""Penman reader and writer with token-alignment suffixes.

A document is a sequence of blank-line-separated blocks; each block is
zero or more "# ::key value" metadata lines followed by one
parenthesized expression (or by nothing, for a sentence that has no
annotation yet).  Concept names and constants may carry an alignment
suffix "~i,j" with 0-based token indices into the "# ::snt" line;
"~e.N" suffixes found in the wild are accepted on input and converted
when they fit the token count, but never written.

Multi-rooted graphs cannot be expressed as one expression, so the
writer wraps them under a synthetic "(m / multi-sentence :snt1 ...)"
root which the reader strips again.  To keep the conversion lossless, a
graph whose real root would be mistaken for that wrapper (an unaligned,
unreferenced multi-sentence node with only :sntN children) is wrapped
one level deeper; the reader always unwraps exactly one level.
"""

from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field

from .graph import Batch, Graph, GraphError

log = logging.getLogger(__name__)

_ALIGN = re.compile(r"~(?:(?P<isi>e\.)?)(?P<ids>\d+(?:,\d+)*)$")
_VAR = re.compile(r"^[A-Za-z][A-Za-z0-9]*$")
_SNT_LABEL = re.compile(r"^snt\d+$")
_QUOTED = re.compile(r'^"(?:[^"\\]|\\.)*"$')
# a bare (unquoted) name or constant must not contain structural characters
_BARE_SAFE = re.compile(r'^[^\s()"/:~]+$')

KNOWN_META = ("id", "annotator", "save-date", "snt")

WRAPPER_NAME = "multi-sentence"


class PenmanError(Exception):
    """Parse or serialization failure, with line/column when parsing."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        if line is not None:
            message = f"line {line}, column {col}: {message}"
        super().__init__(message)
        self.line = line
        self.col = col


@dataclass
class PenmanEntry:
    """One block of a document: its metadata, raw body text, and graph."""

    metadata: dict[str, str]
    body: str
    graph: Graph


# ----------------------------------------------------------------------
# reading

@dataclass
class _Token:
    kind: str      # "(", ")", "/", "label", "symbol", "string"
    text: str
    align: list[int]
    isi: bool
    line: int
    col: int


@dataclass
class _Node:
    var: str
    name: str
    align: list[int]
    isi: bool
    line: int
    col: int
    children: list[tuple[str, object, int, int]] = field(default_factory=list)


@dataclass
class _Leaf:
    text: str
    quoted: bool
    align: list[int]
    isi: bool
    line: int
    col: int


def parse_penman(text: str, source_name: str = "penman") -> Batch:
    """Parse a Penman document into a batch of graphs."""
    return Batch(source_name=source_name,
                 graphs=[e.graph for e in parse_document(text, source_name)])


def parse_document(text: str, source_name: str = "penman") -> list[PenmanEntry]:
    base = source_name.rsplit("/", 1)[-1]
    base = base.rsplit(".", 1)[0] if "." in base else base
    entries = []
    for meta, body, start_line in _split_blocks(text):
        n = len(entries) + 1
        graph = _build_graph(meta, body, start_line,
                             default_tid=f"{base}.{n}")
        entries.append(PenmanEntry(meta, body, graph))
    return entries


def _split_blocks(text: str):
    """Yield (metadata, body, first_body_line) per block.  Blank lines
    separate blocks only while no parenthesis is open."""
    blocks: list[tuple[dict, str, int]] = []
    meta: dict[str, str] = {}
    body_lines: list[tuple[int, str]] = []
    depth = 0
    started = False

    def flush():
        nonlocal meta, body_lines, started, depth
        if meta or body_lines:
            first = body_lines[0][0] if body_lines else 1
            blocks.append((meta, "\n".join(s for _, s in body_lines), first))
        meta, body_lines, started, depth = {}, [], False, 0

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line.strip() and depth == 0:
            flush()
            continue
        if line.startswith("# ::") and depth == 0:
            if started:
                flush()     # a new metadata group starts the next block
            rest = line[len("# ::"):]
            key, _, value = rest.partition(" ")
            meta[key] = value
            continue
        if line.lstrip().startswith("#") and depth == 0 and not started:
            continue        # plain comment line
        started = True
        body_lines.append((lineno, line))
        depth += _paren_delta(line)
        if depth < 0:
            raise PenmanError("unbalanced parentheses", lineno, 1)
        if depth == 0:
            flush()
    if depth != 0:
        raise PenmanError("unbalanced parentheses at end of input",
                          len(text.splitlines()) or 1, 1)
    flush()
    return blocks


def _paren_delta(line: str) -> int:
    depth = 0
    in_string = False
    i = 0
    while i < len(line):
        ch = line[i]
        if in_string:
            if ch == "\\":
                i += 1
            elif ch == '"':
                in_string = False
        elif ch == '"':
            in_string = True
        elif ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        i += 1
    return depth


def _tokenize(body: str, start_line: int) -> list[_Token]:
    tokens: list[_Token] = []
    for offset, line in enumerate(body.splitlines()):
        lineno = start_line + offset
        i = 0
        while i < len(line):
            ch = line[i]
            if ch in " \t":
                i += 1
                continue
            col = i + 1
            if ch in "()/":
                tokens.append(_Token(ch, ch, [], False, lineno, col))
                i += 1
                continue
            if ch == '"':
                j = i + 1
                while j < len(line):
                    if line[j] == "\\":
                        j += 2
                        continue
                    if line[j] == '"':
                        break
                    j += 1
                if j >= len(line):
                    raise PenmanError("unterminated string", lineno, col)
                text = line[i:j + 1]
                i = j + 1
                align, isi, i = _trailing_alignment(line, i)
                tokens.append(_Token("string", text, align, isi, lineno, col))
                continue
            if ch == ":":
                j = i + 1
                while j < len(line) and line[j] not in ' \t()"/':
                    j += 1
                label = line[i + 1:j]
                if not label:
                    raise PenmanError("empty relation label", lineno, col)
                tokens.append(_Token("label", label, [], False, lineno, col))
                i = j
                continue
            j = i
            while j < len(line) and line[j] not in ' \t():"/':
                j += 1
            word = line[i:j]
            align: list[int] = []
            isi = False
            m = _ALIGN.search(word)
            if m:
                word = word[:m.start()]
                align = [int(x) for x in m.group("ids").split(",")]
                isi = bool(m.group("isi"))
            if not word:
                raise PenmanError("dangling alignment suffix", lineno, col)
            tokens.append(_Token("symbol", word, align, isi, lineno, col))
            i = j
    return tokens


def _trailing_alignment(line: str, i: int) -> tuple[list[int], bool, int]:
    """Consume an alignment suffix directly after a closing quote."""
    if i < len(line) and line[i] == "~":
        j = i
        while j < len(line) and line[j] not in ' \t()"':
            j += 1
        m = _ALIGN.search(line[i:j])
        if m and m.start() == 0:
            return ([int(x) for x in m.group("ids").split(",")],
                    bool(m.group("isi")), j)
    return [], False, i


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self) -> _Token | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def take(self) -> _Token:
        tok = self.peek()
        if tok is None:
            last = self.tokens[-1] if self.tokens else None
            raise PenmanError("unexpected end of expression",
                              last.line if last else 1, last.col if last else 1)
        self.pos += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.take()
        if tok.kind != kind:
            raise PenmanError(f"expected {kind!r}, found {tok.text!r}",
                              tok.line, tok.col)
        return tok

    def parse_node(self) -> _Node:
        opening = self.expect("(")
        var_tok = self.take()
        if var_tok.kind != "symbol" or not _VAR.match(var_tok.text):
            raise PenmanError(f"expected a variable, found {var_tok.text!r}",
                              var_tok.line, var_tok.col)
        if var_tok.align:
            raise PenmanError("alignment belongs on the concept name, not the variable",
                              var_tok.line, var_tok.col)
        self.expect("/")
        name_tok = self.take()
        if name_tok.kind not in ("symbol", "string"):
            raise PenmanError(f"expected a concept name, found {name_tok.text!r}",
                              name_tok.line, name_tok.col)
        node = _Node(var_tok.text, name_tok.text, name_tok.align, name_tok.isi,
                     opening.line, opening.col)
        while True:
            tok = self.take()
            if tok.kind == ")":
                return node
            if tok.kind != "label":
                raise PenmanError(f"expected a relation or ')', found {tok.text!r}",
                                  tok.line, tok.col)
            target_tok = self.peek()
            if target_tok is None:
                raise PenmanError("relation without a target", tok.line, tok.col)
            if target_tok.kind == "(":
                target: object = self.parse_node()
            elif target_tok.kind in ("symbol", "string"):
                self.take()
                target = _Leaf(target_tok.text, target_tok.kind == "string",
                               target_tok.align, target_tok.isi,
                               target_tok.line, target_tok.col)
            else:
                raise PenmanError(f"bad relation target {target_tok.text!r}",
                                  target_tok.line, target_tok.col)
            node.children.append((tok.text, target, tok.line, tok.col))


def _collect_defs(node: _Node, defs: dict[str, _Node]):
    if node.var in defs:
        raise PenmanError(f"duplicate definition of variable {node.var!r}",
                          node.line, node.col)
    defs[node.var] = node
    for _, target, _, _ in node.children:
        if isinstance(target, _Node):
            _collect_defs(target, defs)


def _refs_to(node: _Node, var: str, defs: dict[str, _Node]) -> bool:
    for _, target, _, _ in node.children:
        if isinstance(target, _Node):
            if _refs_to(target, var, defs):
                return True
        elif isinstance(target, _Leaf):
            if not target.quoted and target.text == var:
                return True
    return False


def _build_graph(meta: dict[str, str], body: str, start_line: int,
                 default_tid: str) -> Graph:
    tokens = meta.get("snt", "").split()
    g = Graph(tid=meta.get("id", default_tid),
              annotator=meta.get("annotator", ""),
              last_saved=meta.get("save-date", ""),
              tokens=tokens)
    g.meta = {k: v for k, v in meta.items() if k not in KNOWN_META}
    if not body.strip():
        return g

    stream = _tokenize(body, start_line)
    parser = _Parser(stream)
    root = parser.parse_node()
    trailing = parser.peek()
    if trailing is not None:
        raise PenmanError(f"unexpected {trailing.text!r} after the expression",
                          trailing.line, trailing.col)

    defs: dict[str, _Node] = {}
    _collect_defs(root, defs)

    builder = _Builder(g, defs)
    parts = ([target for _, target, _, _ in root.children]
             if _is_wrapper(root, defs) else [root])
    for target in parts:
        builder.declare(target)
    for target in parts:
        builder.wire(target)
    builder.warn_dropped()
    return g


def _is_wrapper(root: _Node, defs: dict[str, _Node]) -> bool:
    if root.name != WRAPPER_NAME or root.align or not root.children:
        return False
    for label, target, _, _ in root.children:
        if not _SNT_LABEL.match(label):
            return False
        if isinstance(target, _Leaf) and not target.quoted and target.text in defs:
            return False        # a bare variable reference, not a definition
    return not _refs_to(root, root.var, defs)


class _Builder:
    """Materializes an AST into graph operations.  Concept ids follow the
    reading order of defining mentions — a "(v / name" block or a constant
    occurrence; a bare forward reference never allocates the id, so
    re-parsing serializer output reproduces the original root order.
    Relation ids follow reading order."""

    def __init__(self, g: Graph, defs: dict[str, _Node]):
        self.g = g
        self.defs = defs
        self.cids: dict[str, str] = {}
        self.leaf_cids: dict[int, str] = {}
        self.dropped = 0

    def declare(self, target):
        if isinstance(target, _Node):
            self.cids[target.var] = self.g.add_concept(target.name, [],
                                                       attribute=False)
            for _, child, _, _ in target.children:
                if isinstance(child, _Node) or child.quoted or \
                        child.text not in self.defs:
                    self.declare(child)
        else:
            self.leaf_cids[id(target)] = self.g.add_concept(
                target.text, self.alignment(target.align, target.isi),
                attribute=True)

    def wire(self, target):
        if isinstance(target, _Node):
            self.visit(target)

    def visit(self, node: _Node) -> str:
        cid = self.cids[node.var]
        ids = self.alignment(node.align, node.isi)
        if ids:
            self.g.align(cid, ids)
        for label, target, line, col in node.children:
            try:
                if isinstance(target, _Node):
                    self.g.add_relation(cid, self.cids[target.var], label)
                    self.visit(target)
                elif not target.quoted and target.text in self.defs:
                    child = self.cids[target.text]
                    self.g.add_relation(cid, child, label, referent=True)
                    ref_ids = self.alignment(target.align, target.isi)
                    if ref_ids:
                        self.g.align(child, ref_ids)
                else:
                    self.g.add_relation(cid, self.leaf_cids[id(target)], label)
            except GraphError as e:
                raise PenmanError(str(e), line, col) from None
        return cid

    def alignment(self, ids: list[int], isi: bool) -> list[int]:
        if not ids:
            return []
        if isi:                      # "~e.N" counts tokens from 1
            ids = [i - 1 for i in ids]
        keep = [i for i in ids if 0 <= i < len(self.g.tokens)]
        self.dropped += len(ids) - len(keep)
        return keep

    def warn_dropped(self):
        if self.dropped:
            reason = ("no ::snt token line" if not self.g.tokens
                      else "indices outside the token range")
            log.warning("%s: dropped %d alignment indices (%s)",
                        self.g.tid, self.dropped, reason)


# ----------------------------------------------------------------------
# writing

def serialize_batch(batch: Batch) -> str:
    """Whole-file form: blocks separated by blank lines, trailing newline."""
    return "\n\n".join(serialize_penman(g) for g in batch.graphs) + "\n"


def serialize_penman(g: Graph) -> str:
    """One graph as a metadata block plus an indented expression.

    Tree children are laid out one relation per line, indented to the
    column just after the parent's variable, the way annotators usually
    format these by hand.  Variables take the first letter of the
    concept name ("x" when there is none), numbered 2, 3, ... on reuse
    in order of first appearance.
    """
    violations = g.validate()
    if violations:
        raise PenmanError(f"{g.tid}: " + "; ".join(str(v) for v in violations))
    _check_serializable(g)

    lines = []
    if g.tid:
        lines.append(f"# ::id {g.tid}")
    if g.annotator:
        lines.append(f"# ::annotator {g.annotator}")
    if g.last_saved:
        lines.append(f"# ::save-date {g.last_saved}")
    if g.tokens:
        lines.append("# ::snt " + " ".join(g.tokens))
    for key, value in g.meta.items():
        lines.append(f"# ::{key} {value}")

    roots = g.roots()
    if roots:
        body = _render_body(g, roots)
        lines.append(body)
    return "\n".join(lines)


def _check_serializable(g: Graph) -> None:
    for cid, c in g.concepts.items():
        if _QUOTED.match(c.name):
            continue
        if not _BARE_SAFE.match(c.name):
            raise PenmanError(
                f"{cid}: name {c.name!r} cannot be written bare; "
                "quote it or rename it")


def variable_map(g: Graph) -> dict[str, str]:
    """Variable name -> concept id, exactly as serialize_penman prints
    them.  Lets a text view attach concept ids to the variables of the
    serialized form without re-deriving the naming scheme.  The synthetic
    wrapper variable of a multi-rooted graph is not a concept and is
    omitted; attribute concepts have no variable."""
    roots = g.roots()
    if not roots:
        return {}
    names = _assign_variables(g, roots, _wrap_decision(g, roots))
    return {var: cid for cid, var in names.items() if cid != "__wrapper__"}


def _wrap_decision(g: Graph, roots: list[str]) -> bool:
    return (len(roots) != 1
            or g.concepts[roots[0]].attribute
            or _looks_like_wrapper(g, roots[0]))


def _render_body(g: Graph, roots: list[str]) -> str:
    wrap = _wrap_decision(g, roots)
    variables = _assign_variables(g, roots, wrap)
    if not wrap:
        return _render_node(g, roots[0], 0, variables)
    wvar = variables["__wrapper__"]
    parts = [f"({wvar} / {WRAPPER_NAME}"]
    indent = " " * (len(wvar) + 2)
    for k, root in enumerate(roots, start=1):
        label = f":snt{k} "
        target = _render_target(g, root, len(indent) + len(label), variables,
                                referent=False)
        parts.append(f"\n{indent}{label}{target}")
    return "".join(parts) + ")"


def _looks_like_wrapper(g: Graph, root: str) -> bool:
    c = g.concepts[root]
    if c.name != WRAPPER_NAME or c.token_ids:
        return False
    out = [r for r in g.relations.values() if r.parent_id == root]
    if not out or any(r.referent or not _SNT_LABEL.match(r.label) for r in out):
        return False
    return not any(r.child_id == root for r in g.relations.values())


def _first_mention_order(g: Graph, roots: list[str]) -> list[str]:
    order: list[str] = []
    seen: set[str] = set()

    def mention(cid: str):
        if cid not in seen:
            seen.add(cid)
            order.append(cid)

    def visit(cid: str):
        mention(cid)
        for rid, child in g.ordered_children(cid):
            rel = g.relations[rid]
            if rel.referent or g.concepts[child].attribute:
                mention(child)
            else:
                visit(child)

    for root in roots:
        if g.concepts[root].attribute:
            mention(root)
        else:
            visit(root)
    return order


def _assign_variables(g: Graph, roots: list[str], wrap: bool) -> dict[str, str]:
    # bare constants share the namespace with variables in the text, so
    # a variable must never collide with an attribute's surface form
    taken = {c.name for c in g.concepts.values() if c.attribute}
    variables: dict[str, str] = {}

    def assign(name: str, key: str):
        ch = name[0].lower()
        base = ch if ch.isalpha() and ch.isascii() else "x"
        candidate = base
        n = 1
        while candidate in taken:
            n += 1
            candidate = f"{base}{n}"
        taken.add(candidate)
        variables[key] = candidate

    if wrap:
        assign(WRAPPER_NAME, "__wrapper__")
    for cid in _first_mention_order(g, roots):
        if not g.concepts[cid].attribute:
            assign(g.concepts[cid].name, cid)
    return variables


def _suffix(token_ids: list[int]) -> str:
    return "~" + ",".join(str(i) for i in token_ids) if token_ids else ""


def _render_node(g: Graph, cid: str, col: int, variables: dict[str, str]) -> str:
    c = g.concepts[cid]
    var = variables[cid]
    parts = [f"({var} / {c.name}{_suffix(c.token_ids)}"]
    indent = " " * (col + len(var) + 2)
    for rid, child in g.ordered_children(cid):
        rel = g.relations[rid]
        label = f":{rel.label} "
        target = _render_target(g, child, len(indent) + len(label), variables,
                                referent=rel.referent)
        parts.append(f"\n{indent}{label}{target}")
    return "".join(parts) + ")"


def _render_target(g: Graph, cid: str, col: int, variables: dict[str, str],
                   referent: bool) -> str:
    c = g.concepts[cid]
    if referent:
        return variables[cid]
    if c.attribute:
        return f"{c.name}{_suffix(c.token_ids)}"
    return _render_node(g, cid, col, variables)
