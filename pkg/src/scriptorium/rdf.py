"""Crosswalk from work records to RDF triples, with N-Triples and Turtle output.

Relation assertions already carry triple structure (subjects, CURIE
predicate, objects); this module grounds document-local pointers as fragment
IRIs on the work URI, adds the identity/title/authorship/concordance triples,
and serializes the result. Witness-level detail (creators, cited ranges) is
deliberately not emitted: it lives at the pointed-to record.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace

from .model import ChangeEntry, IdnoEntry, RelationTriple, WorkRecord
from .uris import EntityUri, LocalPointer, Reference, resolve_pointer

#: prefix -> IRI base. dct is Dublin Core Terms; syriaca has no published
#: binding, so a project-local schema base is used (override via config).
DEFAULT_BINDINGS = {
    "rdf": "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
    "lawd": "http://lawd.info/ontology/",
    "bf": "http://bibframe.org/vocab/",
    "dct": "http://purl.org/dc/terms/",
    "syriaca": "http://syriaca.org/schema#",
    "frbr": "http://purl.org/vocab/frbr/core#",
    "rdac": "http://rdaregistry.info/Elements/c/",
    "rdam": "http://www.rdaregistry.info/Elements/m/",
    "rdaw": "http://rdaregistry.info/Elements/w/",
    "rdrel": "http://RDVocab.info/RDARelationshipsWEMI/",
    "schema": "http://schema.org/",
}

REQUIRED_PREFIXES = ("lawd", "bf", "dct", "syriaca", "rdf")

_CURIE_RE = re.compile(r"^(?P<prefix>[A-Za-z][\w.-]*):(?P<local>\S+)$")
_SAFE_LOCAL_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_-]*$")

RDF_TYPE = DEFAULT_BINDINGS["rdf"] + "type"


class CrosswalkError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


@dataclass(frozen=True)
class NamespaceTable:
    bindings: tuple[tuple[str, str], ...]

    def __post_init__(self):
        object.__setattr__(self, "bindings", tuple(self.bindings))
        bound = {p for p, _ in self.bindings}
        missing = [p for p in REQUIRED_PREFIXES if p not in bound]
        if missing:
            raise CrosswalkError("NS_INCOMPLETE", f"namespace table lacks required prefixes: {missing}")

    @classmethod
    def default(cls) -> "NamespaceTable":
        return cls(tuple(DEFAULT_BINDINGS.items()))

    @classmethod
    def from_mapping(cls, mapping: dict[str, str], extend_default: bool = True) -> "NamespaceTable":
        base = dict(DEFAULT_BINDINGS) if extend_default else {}
        base.update(mapping)
        return cls(tuple(base.items()))

    def as_dict(self) -> dict[str, str]:
        return dict(self.bindings)

    def lookup(self, prefix: str) -> str | None:
        for p, base in self.bindings:
            if p == prefix:
                return base
        return None

    def is_bound(self, curie: str) -> bool:
        m = _CURIE_RE.match(curie)
        return bool(m) and self.lookup(m.group("prefix")) is not None


DEFAULT_NAMESPACES = NamespaceTable.default()


def expand_curie(curie: str, ns: NamespaceTable = DEFAULT_NAMESPACES) -> str:
    """Expand ``prefix:local`` against the table; unbound prefixes are errors."""
    m = _CURIE_RE.match(curie)
    if not m:
        raise CrosswalkError("BAD_CURIE", f"not a CURIE: {curie!r}")
    base = ns.lookup(m.group("prefix"))
    if base is None:
        raise CrosswalkError("UNBOUND_PREFIX", f"unbound prefix {m.group('prefix')!r} in {curie!r}")
    return base + m.group("local")


@dataclass(frozen=True)
class Literal:
    lexical: str
    lang: str | None = None


@dataclass(frozen=True)
class Triple:
    subject: str            # absolute IRI
    predicate: str          # absolute IRI
    obj: str | Literal      # absolute IRI or literal


def _ground(ref: Reference, record: WorkRecord) -> str:
    if isinstance(ref, LocalPointer):
        if ref.target_id not in record.witness_ids():
            raise CrosswalkError(
                "UNRESOLVED_POINTER",
                f"pointer #{ref.target_id} does not resolve to a witness of {record.uri}",
            )
        return resolve_pointer(record.uri.without_fragment(), ref)
    return ref.render()


def relations_to_triples(record: WorkRecord, ns: NamespaceTable = DEFAULT_NAMESPACES) -> list[Triple]:
    """Expand every relation to its subjects x objects cross product.

    Output order is document order, subjects-major within a relation.
    """
    out: list[Triple] = []
    for rel in record.relations:
        pred = expand_curie(rel.predicate, ns)
        for subj in rel.subjects:
            s = _ground(subj, record)
            for obj in rel.objects:
                out.append(Triple(s, pred, _ground(obj, record)))
    return out


def record_to_triples(record: WorkRecord, ns: NamespaceTable = DEFAULT_NAMESPACES) -> list[Triple]:
    """Identity, titles, authorship, headwords and concordances, then relations."""
    work = record.uri.render()
    out = [Triple(work, expand_curie("rdf:type", ns), expand_curie("lawd:ConceptualWork", ns))]
    dct_title = expand_curie("dct:title", ns)
    for title in record.titles:
        out.append(Triple(work, dct_title, Literal(title.plain_text, title.lang or None)))
    dct_creator = expand_curie("dct:creator", ns)
    for author in record.authors:
        out.append(Triple(work, dct_creator, author.person_uri.render()))
    headword = expand_curie("syriaca:headword", ns)
    for title in record.titles:
        if title.is_headword:
            out.append(Triple(work, headword, Literal(title.plain_text, title.lang or None)))
    for idno in record.idnos:
        if idno.scheme == "URI":
            continue
        out.append(Triple(work, expand_curie(f"syriaca:idno-{idno.scheme}", ns), Literal(idno.value)))
    out.extend(relations_to_triples(record, ns))
    return out


def _nt_escape(text: str) -> str:
    out = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)


def _nt_term(term: str | Literal) -> str:
    if isinstance(term, Literal):
        body = f'"{_nt_escape(term.lexical)}"'
        return f"{body}@{term.lang}" if term.lang else body
    return f"<{term}>"


def _turtle_term(term: str | Literal, ns: NamespaceTable) -> str:
    if isinstance(term, Literal):
        return _nt_term(term)
    for prefix, base in ns.bindings:
        if term.startswith(base):
            local = term[len(base):]
            if _SAFE_LOCAL_RE.match(local):
                return f"{prefix}:{local}"
    return f"<{term}>"


def serialize_ntriples(triples: list[Triple]) -> str:
    lines = [f"{_nt_term(t.subject)} {_nt_term(t.predicate)} {_nt_term(t.obj)} ." for t in triples]
    return "\n".join(lines) + ("\n" if lines else "")


def serialize_turtle(triples: list[Triple], ns: NamespaceTable = DEFAULT_NAMESPACES) -> str:
    lines = [f"@prefix {p}: <{base}> ." for p, base in sorted(ns.bindings)]
    lines.append("")
    # group by subject in first-appearance order
    groups: dict[str, list[Triple]] = {}
    for t in triples:
        groups.setdefault(t.subject, []).append(t)
    for subject, group in groups.items():
        subj = _turtle_term(subject, ns)
        for i, t in enumerate(group):
            pred = "a" if t.predicate == RDF_TYPE else _turtle_term(t.predicate, ns)
            obj = _turtle_term(t.obj, ns)
            lead = subj if i == 0 else "    "
            tail = " ." if i == len(group) - 1 else " ;"
            lines.append(f"{lead} {pred} {obj}{tail}")
    return "\n".join(lines) + "\n"


def serialize_graph(triples: list[Triple], format: str, ns: NamespaceTable = DEFAULT_NAMESPACES) -> str:
    if format == "ntriples":
        return serialize_ntriples(triples)
    if format == "turtle":
        return serialize_turtle(triples, ns)
    raise CrosswalkError("BAD_FORMAT", f"unknown graph format {format!r}")


# -- intermediate-work expansion ---------------------------------------------
#
# A relation like {work --syriaca:hasEmbodiedVersion--> #witness} implies an
# intermediate work standing between the two. Expansion makes that work
# explicit: the witnesses move to a freshly minted record that embodies the
# new work, and the source record keeps a work-to-work hasVersion (or
# hasRecension) link to it.

EMBODIED_TO_WORK_PREDICATE = {
    "syriaca:hasEmbodiedVersion": "syriaca:hasVersion",
    "syriaca:hasEmbodiedRecension": "syriaca:hasRecension",
}


def expand_embodied_relation(
    record: WorkRecord,
    relation_local_id: str,
    new_uri: EntityUri,
    existing_uris: set[EntityUri] | None = None,
) -> tuple[WorkRecord, WorkRecord]:
    """Split an embodied-version/recension relation out into its own work record.

    Returns (updated original, new record). The new record receives the
    witnesses the relation pointed at, plus a witnesses-embody-work relation;
    the original replaces the embodied relation with the corresponding
    work-to-work predicate aimed at ``new_uri``. Nothing else may reference
    the moved witnesses.
    """
    rel = next((r for r in record.relations if r.local_id == relation_local_id), None)
    if rel is None:
        raise CrosswalkError("EXPAND_SHAPE", f"no relation with id {relation_local_id!r}")
    work_predicate = EMBODIED_TO_WORK_PREDICATE.get(rel.predicate)
    if work_predicate is None:
        raise CrosswalkError(
            "EXPAND_PREDICATE",
            f"relation {relation_local_id!r} has predicate {rel.predicate!r}, not an embodied-class predicate",
        )
    if new_uri.fragment is not None or new_uri == record.uri or (existing_uris and new_uri in existing_uris):
        raise CrosswalkError("EXPAND_COLLISION", f"{new_uri} is not a fresh work URI")
    if not all(isinstance(o, LocalPointer) for o in rel.objects):
        raise CrosswalkError("EXPAND_SHAPE", f"relation {relation_local_id!r} must point at local witnesses")
    moved_ids = {o.target_id for o in rel.objects}
    missing = moved_ids - record.witness_ids()
    if missing:
        raise CrosswalkError("EXPAND_SHAPE", f"unresolved witness pointers: {sorted(missing)}")

    # the witnesses must not be referenced from anywhere else in the record;
    # the expanded relation's own sources stay behind on the updated record,
    # so they count as "elsewhere" too
    for other in record.relations:
        refs: list[Reference | LocalPointer] = list(other.sources)
        if other is not rel:
            refs += list(other.subjects) + list(other.objects)
        for ref in refs:
            if isinstance(ref, LocalPointer) and ref.target_id in moved_ids:
                raise CrosswalkError(
                    "EXPAND_REFS", f"witness #{ref.target_id} is still referenced elsewhere in the record"
                )
    other_sources: list[tuple[LocalPointer, ...]] = [t.sources for t in record.titles]
    other_sources += [a.sources for a in record.authors]
    other_sources += [n.sources for n in record.notes]
    if record.text_lang:
        other_sources.append(record.text_lang.sources)
    for sources in other_sources:
        for ptr in sources:
            if ptr.target_id in moved_ids:
                raise CrosswalkError("EXPAND_REFS", f"witness #{ptr.target_id} is cited as a source")

    moved = tuple(w for w in record.witnesses if w.local_id in moved_ids)
    kept = tuple(w for w in record.witnesses if w.local_id not in moved_ids)

    updated = replace(
        record,
        witnesses=kept,
        relations=tuple(
            replace(r, predicate=work_predicate, objects=(new_uri,)) if r is rel else r
            for r in record.relations
        ),
    )
    new_record = WorkRecord(
        uri=new_uri,
        idnos=(IdnoEntry("URI", new_uri.render()),),
        witnesses=moved,
        relations=(
            RelationTriple(
                subjects=tuple(LocalPointer(w.local_id) for w in moved),
                predicate="lawd:embodies",
                objects=(new_uri,),
                rel_type=rel.rel_type,
            ),
        ),
        change_log=(ChangeEntry("registry", "", f"Split out of {record.uri.render()}"),),
    )
    return updated, new_record
