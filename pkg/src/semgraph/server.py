"""HTTP annotation service: one annotator, one open batch per process.

The session owns a Batch plus a claim file "<base>.<ANNOTATOR>.json"
next to the source.  Opening any source whose claim file already
exists loads the claim file instead — an annotator's own work always
wins over the raw corpus.  Every successful mutation is written
straight back to the claim file, so killing the process never loses
more than nothing: a restart recovers the exact pre-kill state.

Errors map onto status codes in three bands: 404 for unknown
sentence/node ids, 409 for mutations the graph model refuses, 400 for
request bodies or files that cannot be understood in the first place.
"""

from __future__ import annotations

import re
from pathlib import Path

from fastapi import FastAPI, HTTPException, Query, Request
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles
from pydantic import BaseModel, Field

from . import frames, jsonio, penman
from .frames import ResourceSet
from .graph import Batch, Graph, GraphError, MissingIdError

# label families that are enumerable, not listed exhaustively in inventories
_OPEN_FAMILIES = re.compile(r"^(snt|op)\d+$")

OPEN_EXTENSIONS = (".txt", ".penman", ".json")


class Session:
    """All server state: annotator identity, resources, the open batch."""

    def __init__(self, annotator: str, resources: ResourceSet):
        self.annotator = annotator
        self.resources = resources
        self.batch: Batch | None = None
        self.source: Path | None = None
        self.claim_path: Path | None = None
        self.cursor = 0
        self.dirty = False
        self.autosave_error: str | None = None

    # -- lifecycle ----------------------------------------------------

    def open(self, path: str | Path) -> None:
        src = Path(path)
        if not src.is_file():
            raise FileNotFoundError(f"no such file: {src}")
        if src.suffix not in OPEN_EXTENSIONS:
            raise ValueError(
                f"cannot open {src.name}: expected one of {', '.join(OPEN_EXTENSIONS)}")
        claim = self._claim_for(src)
        if claim.is_file():                      # claimed work wins
            batch = jsonio.read_json(claim.read_text(encoding="utf-8"),
                                     source_name=claim.name)
        else:
            text = src.read_text(encoding="utf-8")
            if src.suffix == ".txt":
                batch = jsonio.read_plain_text(src.name, text,
                                               annotator=self.annotator)
            elif src.suffix == ".penman":
                batch = penman.parse_penman(text, source_name=src.name)
            else:
                batch = jsonio.read_json(text, source_name=src.name)
        for g in batch.graphs:
            if not g.annotator:
                g.annotator = self.annotator
        self.batch = batch
        self.source = src
        self.claim_path = claim
        self.cursor = 0
        self.dirty = False

    def _claim_for(self, src: Path) -> Path:
        base = src.stem
        if base.endswith(f".{self.annotator}"):   # opening a claim file itself
            base = base[: -len(self.annotator) - 1]
        return src.with_name(f"{base}.{self.annotator}.json")

    # -- access -------------------------------------------------------

    def graph(self, index: int) -> Graph:
        if self.batch is None:
            raise HTTPException(409, "no batch is open; POST /open first")
        if not 0 <= index < len(self.batch.graphs):
            raise HTTPException(404, f"no sentence {index}; "
                                     f"batch has {len(self.batch.graphs)}")
        return self.batch.graphs[index]

    # -- persistence --------------------------------------------------

    def save(self, stamp_all: bool = True) -> Path:
        if self.batch is None or self.claim_path is None:
            raise HTTPException(409, "no batch is open; POST /open first")
        if stamp_all:
            now = jsonio.timestamp()
            for g in self.batch.graphs:
                g.last_saved = now
        self.claim_path.write_bytes(jsonio.write_json(self.batch))
        self.dirty = False
        return self.claim_path

    def autosave(self, g: Graph) -> list[str]:
        """Persist after a mutation; disk trouble becomes a warning on
        this response (and the next) instead of losing the edit."""
        g.last_saved = jsonio.timestamp()
        self.dirty = True
        warnings = []
        if self.autosave_error:
            warnings.append(f"previous autosave failed: {self.autosave_error}")
        try:
            self.save(stamp_all=False)
            self.autosave_error = None
        except OSError as e:
            self.autosave_error = str(e)
            warnings.append(f"autosave failed: {e}")
        return warnings

    # -- advisory inventory checks -------------------------------------

    def concept_warnings(self, g: Graph, cid: str) -> list[str]:
        c = g.concepts[cid]
        if c.attribute or c.name in self.resources.concepts:
            return []
        return [f"concept {c.name!r} is not in the "
                f"{self.resources.scheme} inventory"]

    def relation_warnings(self, g: Graph, rid: str) -> list[str]:
        label = g.relations[rid].label
        base = label[:-3] if label.endswith("-of") else label
        known = (label in self.resources.relations
                 or base in self.resources.relations
                 or _OPEN_FAMILIES.match(base))
        if known:
            return []
        return [f"relation label {label!r} is not in the "
                f"{self.resources.scheme} inventory"]

    def graph_warnings(self, g: Graph) -> list[str]:
        out = []
        for cid in g.concepts:
            out.extend(self.concept_warnings(g, cid))
        for rid in g.relations:
            out.extend(self.relation_warnings(g, rid))
        return out


# ----------------------------------------------------------------------
# request bodies

class OpenIn(BaseModel):
    path: str


class CursorIn(BaseModel):
    index: int


class ConceptIn(BaseModel):
    name: str
    token_ids: list[int] = Field(default_factory=list)


class ConceptPatch(BaseModel):
    name: str


class RelationIn(BaseModel):
    parent_id: str
    child_id: str
    label: str
    referent: bool = False
    inverse: bool = False


class RelationPatch(BaseModel):
    label: str


class AlignIn(BaseModel):
    concept_id: str
    token_ids: list[int]
    remove: bool = False


# ----------------------------------------------------------------------

def create_app(annotator: str, resources: ResourceSet | None = None,
               open_path: str | Path | None = None,
               static_dir: str | Path | None = None) -> FastAPI:
    session = Session(annotator, resources or frames.load_resources())
    app = FastAPI(title="semgraph annotation server")
    app.state.session = session

    @app.exception_handler(MissingIdError)
    async def missing_id(request: Request, exc: MissingIdError):
        return JSONResponse(status_code=404, content={"detail": str(exc)})

    @app.exception_handler(GraphError)
    async def graph_error(request: Request, exc: GraphError):
        return JSONResponse(status_code=409, content={"detail": str(exc)})

    @app.exception_handler(RequestValidationError)
    async def bad_body(request: Request, exc: RequestValidationError):
        return JSONResponse(status_code=400, content={"detail": exc.errors()})

    def sentence_payload(index: int, g: Graph, warnings: list[str],
                         **extra) -> dict:
        violations = g.validate()
        if violations:                   # mutations above should make this unreachable
            raise HTTPException(500, "; ".join(str(v) for v in violations))
        body = {
            "index": index,
            "graph": jsonio.graph_to_dict(g),
            "penman": penman.serialize_penman(g),
            "variables": penman.variable_map(g),
            "warnings": warnings,
        }
        body.update(extra)
        return body

    # -- lifecycle ------------------------------------------------------

    @app.post("/open")
    def open_batch(body: OpenIn):
        try:
            session.open(body.path)
        except FileNotFoundError as e:
            raise HTTPException(404, str(e)) from None
        except ValueError as e:          # unsupported extension
            raise HTTPException(400, str(e)) from None
        except (jsonio.FormatError, penman.PenmanError, UnicodeDecodeError) as e:
            raise HTTPException(400, f"{Path(body.path).name}: {e}") from None
        return batch_summary()

    @app.get("/meta")
    def meta():
        return {
            "annotator": session.annotator,
            "scheme": session.resources.scheme,
            "source": str(session.source) if session.source else None,
            "claim": str(session.claim_path) if session.claim_path else None,
            "cursor": session.cursor,
            "dirty": session.dirty,
            "sentences": len(session.batch.graphs) if session.batch else 0,
        }

    @app.get("/batch")
    def batch_summary():
        if session.batch is None:
            raise HTTPException(409, "no batch is open; POST /open first")
        return {
            "source": str(session.source),
            "claim": str(session.claim_path),
            "sentences": [
                {"index": i, "tid": g.tid, "tokens": len(g.tokens),
                 "concepts": len(g.concepts), "relations": len(g.relations),
                 "last_saved": g.last_saved}
                for i, g in enumerate(session.batch.graphs)
            ],
        }

    # -- navigation -----------------------------------------------------

    @app.get("/cursor")
    def get_cursor():
        return {"cursor": session.cursor}

    @app.post("/cursor")
    def set_cursor(body: CursorIn):
        session.graph(body.index)        # range check, 404 outside
        session.cursor = body.index
        return {"cursor": session.cursor}

    # -- reading --------------------------------------------------------

    @app.get("/sentence/{index}")
    def get_sentence(index: int):
        g = session.graph(index)
        return sentence_payload(index, g, session.graph_warnings(g),
                                tokens=g.tokens, tid=g.tid)

    @app.get("/search")
    def search(q: str = "", kind: str = Query("concepts"),
               limit: int = Query(50, gt=0)):
        if kind not in ("concepts", "relations"):
            raise HTTPException(400, "kind must be 'concepts' or 'relations'")
        fn = (frames.search_concepts if kind == "concepts"
              else frames.search_relations)
        hits = fn(session.resources, q, limit)
        return {"query": q, "kind": kind,
                "hits": [{"name": n, "description": d} for n, d in hits]}

    @app.get("/frame/{name}")
    def frame(name: str):
        return {"name": name,
                "description": frames.frame_description(session.resources, name)}

    # -- mutations ------------------------------------------------------

    @app.post("/sentence/{index}/concept")
    def add_concept(index: int, body: ConceptIn):
        g = session.graph(index)
        cid = g.add_concept(body.name, body.token_ids, attribute=False)
        warnings = session.concept_warnings(g, cid) + session.autosave(g)
        return sentence_payload(
            index, g, warnings, id=cid,
            description=frames.frame_description(session.resources, body.name))

    @app.post("/sentence/{index}/attribute")
    def add_attribute(index: int, body: ConceptIn):
        g = session.graph(index)
        cid = g.add_concept(body.name, body.token_ids, attribute=True)
        return sentence_payload(index, g, session.autosave(g), id=cid)

    @app.post("/sentence/{index}/relation")
    def add_relation(index: int, body: RelationIn):
        g = session.graph(index)
        rid = g.add_relation(body.parent_id, body.child_id, body.label,
                             referent=body.referent, inverse=body.inverse)
        rel = g.relations[rid]
        warnings = session.relation_warnings(g, rid) + session.autosave(g)
        return sentence_payload(index, g, warnings, id=rid,
                                label=rel.label, referent=rel.referent)

    @app.patch("/sentence/{index}/concept/{cid}")
    def rename_concept(index: int, cid: str, body: ConceptPatch):
        g = session.graph(index)
        g.update_concept(cid, body.name)
        warnings = session.concept_warnings(g, cid) + session.autosave(g)
        return sentence_payload(
            index, g, warnings, id=cid,
            description=frames.frame_description(session.resources, body.name))

    @app.delete("/sentence/{index}/concept/{cid}")
    def delete_concept(index: int, cid: str):
        g = session.graph(index)
        g.delete_concept(cid)
        return sentence_payload(index, g, session.autosave(g), id=cid)

    @app.patch("/sentence/{index}/relation/{rid}")
    def relabel_relation(index: int, rid: str, body: RelationPatch):
        g = session.graph(index)
        g.update_relation(rid, body.label)
        warnings = session.relation_warnings(g, rid) + session.autosave(g)
        return sentence_payload(index, g, warnings, id=rid)

    @app.delete("/sentence/{index}/relation/{rid}")
    def delete_relation(index: int, rid: str):
        g = session.graph(index)
        g.delete_relation(rid)
        return sentence_payload(index, g, session.autosave(g), id=rid)

    @app.post("/sentence/{index}/align")
    def align(index: int, body: AlignIn):
        g = session.graph(index)
        if body.remove:
            g.unalign(body.concept_id, body.token_ids)
        else:
            g.align(body.concept_id, body.token_ids)
        return sentence_payload(index, g, session.autosave(g),
                                id=body.concept_id)

    # -- persistence / export --------------------------------------------

    @app.post("/save")
    def save():
        path = session.save(stamp_all=True)
        return {"saved": str(path),
                "sentences": len(session.batch.graphs)}

    @app.get("/export/penman")
    def export_penman():
        if session.batch is None:
            raise HTTPException(409, "no batch is open; POST /open first")
        return PlainTextResponse(penman.serialize_batch(session.batch))

    # -- static UI --------------------------------------------------------

    ui = Path(static_dir) if static_dir else Path(__file__).parent / "static"
    if ui.is_dir():
        app.mount("/", StaticFiles(directory=ui, html=True), name="ui")

    if open_path is not None:
        session.open(open_path)
    return app
