"""HTTP API over a registry: lookup, search, conversion, review queue.

JSON-first, with content negotiation to TEI-XML, N-Triples and Turtle via
``?format=``. Errors are JSON ``{code, message}`` with conventional status
codes. Mutations are serialized by the registry's writer lock.
"""

from __future__ import annotations

from fastapi import FastAPI, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, PlainTextResponse, RedirectResponse, Response
from pydantic import BaseModel

from .linkage import (
    LinkageError,
    MatchCandidate,
    MatchDecision,
    Verdict,
    apply_decisions,
    effective_decisions,
)
from .model import record_to_dict
from .rdf import NamespaceTable, record_to_triples, serialize_graph
from .registry import Registry, RegistryError
from .taxonomy import SubjectNotFound, Taxonomy, default_taxonomy
from .tei import serialize_work_record
from .uris import UriKind, parse_entity_uri


class MintRequest(BaseModel):
    kind: str = "work"


class DecisionRequest(BaseModel):
    candidate_id: str
    verdict: str
    editor: str
    timestamp: str = ""


_STATUS_BY_CODE = {
    "NOT_FOUND": 404,
    "DECISION_CONFLICT": 409,
    "INVALID": 400,
    "BAD_KIND": 400,
    "READ_ONLY": 403,
    "UNKNOWN_CANDIDATE": 400,
}


def _error(code: str, message: str, status: int | None = None) -> JSONResponse:
    return JSONResponse(
        status_code=status or _STATUS_BY_CODE.get(code, 400),
        content={"code": code, "message": message},
    )


def _page(items: list, limit: int, offset: int) -> dict:
    return {"total": len(items), "limit": limit, "offset": offset,
            "items": items[offset:offset + limit]}


def create_app(
    registry: Registry,
    namespaces: NamespaceTable | None = None,
    taxonomy: Taxonomy | None = None,
) -> FastAPI:
    ns = namespaces or NamespaceTable.default()
    tax = taxonomy or default_taxonomy()
    app = FastAPI(title="work registry", version="0.1.0")
    # the data is open-access; let browser frontends on other origins read it
    app.add_middleware(CORSMiddleware, allow_origins=["*"], allow_methods=["*"],
                       allow_headers=["*"])

    @app.exception_handler(RegistryError)
    async def registry_error(_: Request, exc: RegistryError):
        return _error(exc.code, str(exc))

    @app.exception_handler(LinkageError)
    async def linkage_error(_: Request, exc: LinkageError):
        return _error(exc.code, str(exc))

    @app.get("/api/work/{work_id}")
    def get_work(work_id: int, format: str | None = Query(default=None)):
        record = registry.get_by_id(work_id)
        if format in (None, "json"):
            return record_to_dict(record)
        if format == "tei":
            return Response(serialize_work_record(record), media_type="application/tei+xml")
        if format == "nt":
            text = serialize_graph(record_to_triples(record, ns), "ntriples")
            return PlainTextResponse(text, media_type="application/n-triples")
        if format == "ttl":
            text = serialize_graph(record_to_triples(record, ns), "turtle", ns)
            return PlainTextResponse(text, media_type="text/turtle")
        return _error("BAD_FORMAT", f"unknown format {format!r}")

    @app.get("/api/search")
    def search(title: str = Query(default=""), lang: str | None = None,
               limit: int = 50, offset: int = 0):
        hits = [
            {"uri": uri.render(), "headword": headword, "score": score}
            for uri, headword, score in registry.search_titles(title, lang)
        ]
        return _page(hits, limit, offset)

    @app.get("/api/idno/{scheme}/{value}")
    def idno_lookup(scheme: str, value: str):
        uri = registry.get_by_idno(scheme, value)
        return RedirectResponse(url=f"/api/work/{uri.id}", status_code=303)

    @app.post("/api/mint")
    def mint(body: MintRequest):
        try:
            kind = UriKind(body.kind)
        except ValueError:
            return _error("BAD_KIND", f"unknown entity kind {body.kind!r}")
        uri = registry.mint_uri(kind)
        return {"uri": uri.render()}

    # -- review queue -------------------------------------------------------

    def _context(item_id: str, stubs_by_id: dict) -> dict:
        stub = stubs_by_id.get(item_id)
        if stub is not None:
            return {
                "kind": "stub",
                "titles": [{"lang": lang, "text": text} for lang, text in stub.titles],
                "authors": ([{"uri": stub.author_uri.render() if stub.author_uri else None,
                              "name": stub.author_name}]
                            if (stub.author_uri or stub.author_name) else []),
                "incipit": {"lang": stub.incipit[0], "text": stub.incipit[1]}
                if stub.incipit else None,
                "source_ms": {
                    "uri": stub.source_ms.uri.render(),
                    "locus_from": stub.source_ms.locus_from,
                    "locus_to": stub.source_ms.locus_to,
                } if stub.source_ms else None,
                "provenance": stub.provenance,
            }
        try:
            record = registry.get_record(parse_entity_uri(item_id))
        except Exception:
            return {"kind": "unknown", "titles": [], "authors": [], "incipit": None}
        incipit = None
        for note in record.notes:
            if note.note_type.value == "incipit" and note.segments:
                incipit = {"lang": note.segments[0][0], "text": note.segments[0][1]}
                break
        return {
            "kind": "work",
            "titles": [{"lang": t.lang, "text": t.plain_text} for t in record.titles],
            "authors": [{"uri": a.person_uri.render(), "name": a.name} for a in record.authors],
            "incipit": incipit,
            "source_ms": None,
            "provenance": record.uri.render(),
        }

    def _queue_item(c: MatchCandidate, per_editor: dict[str, MatchDecision],
                    stubs_by_id: dict) -> dict:
        latest = None
        if per_editor:
            latest = max(
                (d for d in per_editor.values()), key=lambda d: (d.timestamp,)
            )
        return {
            "candidate_id": c.candidate_id,
            "left": c.left,
            "right": c.right,
            "score": c.score,
            "features": c.feature_map(),
            "band": c.band.value if c.band else None,
            "decision": {
                "verdict": latest.verdict.value, "editor": latest.editor,
                "timestamp": latest.timestamp,
            } if latest else None,
            "left_context": _context(c.left, stubs_by_id),
            "right_context": _context(c.right, stubs_by_id),
        }

    @app.get("/api/review/queue")
    def review_queue(band: str | None = None, editor: str | None = None,
                     min_score: float | None = None, limit: int = 50, offset: int = 0):
        candidates = registry.read_candidates()
        effective = effective_decisions(registry.read_decisions())
        stubs_by_id = {s.stub_id: s for s in registry.read_stubs()}
        items = []
        for c in sorted(candidates, key=lambda c: (-(c.score or 0.0), c.candidate_id)):
            if band and (c.band is None or c.band.value != band):
                continue
            if min_score is not None and (c.score or 0.0) < min_score:
                continue
            per_editor = effective.get(c.candidate_id, {})
            if editor and editor not in per_editor:
                continue
            items.append(_queue_item(c, per_editor, stubs_by_id))
        return _page(items, limit, offset)

    @app.post("/api/review/decision")
    def post_decision(body: DecisionRequest):
        try:
            verdict = Verdict(body.verdict)
        except ValueError:
            return _error("BAD_VERDICT", f"verdict must be accept or reject, got {body.verdict!r}")
        if not body.editor:
            return _error("BAD_EDITOR", "editor must be non-empty")
        candidates = {c.candidate_id for c in registry.read_candidates()}
        if body.candidate_id not in candidates:
            return _error("NOT_FOUND", f"unknown candidate {body.candidate_id!r}", 404)
        decision = MatchDecision(body.candidate_id, verdict, body.editor, body.timestamp)
        status = registry.append_decision(decision)
        return {"status": status, "candidate_id": body.candidate_id,
                "verdict": verdict.value, "editor": body.editor}

    @app.get("/api/review/clusters")
    def review_clusters(limit: int = 200, offset: int = 0):
        candidates = registry.read_candidates()
        clusters = apply_decisions(candidates, registry.read_decisions())
        payload = [{"cluster_id": cl.cluster_id, "members": list(cl.members)} for cl in clusters]
        return _page(payload, limit, offset)

    # -- taxonomy -------------------------------------------------------------

    @app.get("/api/taxonomy")
    def taxonomy_index(limit: int = 100, offset: int = 0):
        nodes = [
            {"code": n.code, "label": n.label, "parent": n.parent, "children": list(n.children)}
            for n in tax
        ]
        return _page(nodes, limit, offset)

    @app.get("/api/taxonomy/{code}")
    def taxonomy_node(code: str):
        try:
            node = tax.lookup(code)
        except SubjectNotFound as exc:
            return _error("NOT_FOUND", str(exc), 404)
        return {"code": node.code, "label": node.label, "parent": node.parent,
                "children": list(node.children)}

    return app
