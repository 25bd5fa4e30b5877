"""Domain types for work records.

A work record is the hub entity of the authority file: one abstract work,
its titles in several languages, author references, identifying notes,
concordance identifiers, the manuscripts and publications that embody it
(witnesses), and relation assertions to other entities. All types here are
immutable values; anything sequence-like is stored as a tuple so records can
be compared, hashed and shared across threads safely.
"""

from __future__ import annotations

import re
import xml.etree.ElementTree as ET
from dataclasses import dataclass, field
from enum import Enum

from .uris import EntityUri, LocalPointer, Reference

KNOWN_TITLE_TAGS = frozenset({"headword", "anglicized"})

_WS_RE = re.compile(r"\s+")


def normalize_ws(text: str) -> str:
    """Collapse whitespace runs to single spaces and strip the ends."""
    return _WS_RE.sub(" ", text).strip()


def escape_inline_text(text: str) -> str:
    """Escape plain text for storage in an inline-XML field (title text)."""
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def strip_inline_markup(text: str) -> str:
    """Plain-text view of a string that may carry inline XML spans.

    Title text can embed foreign-language spans as literal XML (e.g.
    ``<foreign xml:lang="syr">...</foreign> on the Angel``); this strips the
    tags, resolves character entities, and returns the whitespace-normalized
    character content.
    """
    if "<" not in text and "&" not in text:
        return normalize_ws(text)
    try:
        el = ET.fromstring(f"<x>{text}</x>")
    except ET.ParseError:
        return normalize_ws(text)
    return normalize_ws("".join(el.itertext()))


def _tuple(value) -> tuple:
    return tuple(value) if not isinstance(value, tuple) else value


@dataclass(frozen=True)
class TitleEntry:
    local_id: str                       # xml:id within the record
    lang: str                           # BCP-47-style tag
    text: str                           # may embed inline XML spans
    sources: tuple[LocalPointer, ...] = ()
    tags: frozenset[str] = frozenset()  # "headword", "anglicized", unknown tokens verbatim

    def __post_init__(self):
        object.__setattr__(self, "sources", _tuple(self.sources))
        object.__setattr__(self, "tags", frozenset(self.tags))

    @property
    def plain_text(self) -> str:
        return strip_inline_markup(self.text)

    @property
    def is_headword(self) -> bool:
        return "headword" in self.tags


class NoteType(str, Enum):
    ABSTRACT = "abstract"
    PROLOGUE = "prologue"
    INCIPIT = "incipit"
    EXPLICIT = "explicit"
    DISAMBIGUATION = "disambiguation"


# note types whose content is an excerpt from the work itself
EXCERPT_NOTE_TYPES = frozenset({NoteType.PROLOGUE, NoteType.INCIPIT, NoteType.EXPLICIT})


@dataclass(frozen=True)
class NotePart:
    note_type: NoteType
    segments: tuple[tuple[str | None, str], ...]  # (lang, text); lang may be None only for a lone segment
    sources: tuple[LocalPointer, ...] = ()
    quoted: bool = False

    def __post_init__(self):
        object.__setattr__(self, "segments", tuple((l, t) for l, t in self.segments))
        object.__setattr__(self, "sources", _tuple(self.sources))

    @property
    def primary_text(self) -> str:
        return self.segments[0][1] if self.segments else ""


@dataclass(frozen=True)
class IdnoEntry:
    scheme: str  # "URI", "BHS", "BHO", shelfmark schemes, ...
    value: str


@dataclass(frozen=True)
class CitedRange:
    unit: str       # "volume", "pp", ...
    from_: str
    to: str
    display: str


@dataclass(frozen=True)
class Locus:
    from_: str
    to: str | None = None
    part_uri: EntityUri | None = None  # fragment URI of the manuscript section


@dataclass(frozen=True)
class PersonName:
    forename: str = ""
    surname: str = ""


@dataclass(frozen=True)
class MsIdentifier:
    uri: EntityUri
    country: str | None = None
    settlement: str | None = None
    collection: str | None = None
    collection_lang: str | None = None
    alt_idnos: tuple[IdnoEntry, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "alt_idnos", _tuple(self.alt_idnos))


@dataclass(frozen=True)
class BiblWitness:
    """A manuscript or publication embodying the work, referenced by pointer.

    Full bibliographic detail lives at the pointed-to record; a witness keeps
    only what is needed to read the work record on its own: creators, a short
    title, the cited range (publications) or the locus within the manuscript.
    """

    local_id: str
    witness_class: str  # CURIE, e.g. "lawd:Edition", "lawd:WrittenWork"
    creators: tuple[PersonName, ...] = ()
    title: tuple[str | None, str] | None = None  # (lang, text)
    record_ptr: EntityUri | None = None          # kind bibl or manuscript
    cited_ranges: tuple[CitedRange, ...] = ()
    ms_identifier: MsIdentifier | None = None
    locus: Locus | None = None
    text_lang: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "creators", _tuple(self.creators))
        object.__setattr__(self, "cited_ranges", _tuple(self.cited_ranges))
        if self.title is not None:
            object.__setattr__(self, "title", (self.title[0], self.title[1]))

    @property
    def is_manuscript(self) -> bool:
        return self.witness_class == "lawd:WrittenWork" and self.ms_identifier is not None


@dataclass(frozen=True)
class RelationTriple:
    """One relation assertion: subjects x objects under a CURIE predicate."""

    subjects: tuple[Reference, ...]
    predicate: str  # CURIE; prefix must be bound in the namespace table
    objects: tuple[Reference, ...]
    rel_type: str | None = None   # "editions", "mss", "ancientVersion", ...
    sources: tuple[LocalPointer, ...] = ()
    local_id: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "subjects", _tuple(self.subjects))
        object.__setattr__(self, "objects", _tuple(self.objects))
        object.__setattr__(self, "sources", _tuple(self.sources))


@dataclass(frozen=True)
class AuthorRef:
    person_uri: EntityUri
    name: str = ""
    sources: tuple[LocalPointer, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sources", _tuple(self.sources))


@dataclass(frozen=True)
class TextLang:
    main: str
    sources: tuple[LocalPointer, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "sources", _tuple(self.sources))


@dataclass(frozen=True)
class ChangeEntry:
    who: str
    when: str  # kept verbatim (ISO date string)
    what: str


@dataclass(frozen=True)
class WorkRecord:
    uri: EntityUri
    authors: tuple[AuthorRef, ...] = ()
    titles: tuple[TitleEntry, ...] = ()
    text_lang: TextLang | None = None
    notes: tuple[NotePart, ...] = ()
    idnos: tuple[IdnoEntry, ...] = ()
    witnesses: tuple[BiblWitness, ...] = ()
    relations: tuple[RelationTriple, ...] = ()
    subjects: tuple[str, ...] = ()        # taxonomy codes
    change_log: tuple[ChangeEntry, ...] = ()
    extras: tuple[str, ...] = ()          # unknown child elements, canonical XML, re-emitted verbatim

    def __post_init__(self):
        for name in ("authors", "titles", "notes", "idnos", "witnesses",
                     "relations", "subjects", "change_log", "extras"):
            object.__setattr__(self, name, _tuple(getattr(self, name)))

    def witness_ids(self) -> frozenset[str]:
        return frozenset(w.local_id for w in self.witnesses)

    def witness(self, local_id: str) -> BiblWitness | None:
        for w in self.witnesses:
            if w.local_id == local_id:
                return w
        return None


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


@dataclass(frozen=True)
class ReportItem:
    severity: Severity
    code: str
    path: str
    message: str


@dataclass(frozen=True)
class ValidationReport:
    items: tuple[ReportItem, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "items", _tuple(self.items))

    @property
    def ok(self) -> bool:
        """A record is valid iff the report carries no error."""
        return all(i.severity is not Severity.ERROR for i in self.items)

    @property
    def errors(self) -> tuple[ReportItem, ...]:
        return tuple(i for i in self.items if i.severity is Severity.ERROR)

    @property
    def warnings(self) -> tuple[ReportItem, ...]:
        return tuple(i for i in self.items if i.severity is Severity.WARNING)

    def merged(self, other: "ValidationReport") -> "ValidationReport":
        items = sorted(self.items + other.items, key=lambda i: (i.path, i.code))
        return ValidationReport(tuple(items))

    def to_dicts(self) -> list[dict]:
        return [
            {"severity": i.severity.value, "code": i.code, "path": i.path, "message": i.message}
            for i in self.items
        ]


def _reference_str(ref: Reference) -> str:
    return ref.render()


def record_to_dict(record: WorkRecord) -> dict:
    """JSON-friendly view of a record, used by the HTTP API and `convert --to json`.

    Field order and list order mirror the model, so serialization is
    deterministic given the record.
    """
    d: dict = {"uri": record.uri.render()}
    d["authors"] = [
        {"uri": a.person_uri.render(), "name": a.name, "sources": [s.render() for s in a.sources]}
        for a in record.authors
    ]
    d["titles"] = [
        {
            "id": t.local_id,
            "lang": t.lang,
            "text": t.text,
            "plain_text": t.plain_text,
            "sources": [s.render() for s in t.sources],
            "tags": sorted(t.tags),
        }
        for t in record.titles
    ]
    d["text_lang"] = (
        {"main": record.text_lang.main, "sources": [s.render() for s in record.text_lang.sources]}
        if record.text_lang
        else None
    )
    d["notes"] = [
        {
            "type": n.note_type.value,
            "segments": [{"lang": lang, "text": text} for lang, text in n.segments],
            "sources": [s.render() for s in n.sources],
            "quoted": n.quoted,
        }
        for n in record.notes
    ]
    d["idnos"] = [{"scheme": i.scheme, "value": i.value} for i in record.idnos]
    d["witnesses"] = []
    for w in record.witnesses:
        wd: dict = {
            "id": w.local_id,
            "class": w.witness_class,
            "creators": [{"forename": c.forename, "surname": c.surname} for c in w.creators],
            "title": {"lang": w.title[0], "text": w.title[1]} if w.title else None,
            "record_ptr": w.record_ptr.render() if w.record_ptr else None,
            "cited_ranges": [
                {"unit": r.unit, "from": r.from_, "to": r.to, "display": r.display}
                for r in w.cited_ranges
            ],
            "text_lang": w.text_lang,
        }
        if w.ms_identifier:
            m = w.ms_identifier
            wd["ms_identifier"] = {
                "uri": m.uri.render(),
                "country": m.country,
                "settlement": m.settlement,
                "collection": m.collection,
                "collection_lang": m.collection_lang,
                "alt_idnos": [{"scheme": i.scheme, "value": i.value} for i in m.alt_idnos],
            }
        else:
            wd["ms_identifier"] = None
        if w.locus:
            wd["locus"] = {
                "from": w.locus.from_,
                "to": w.locus.to,
                "part_uri": w.locus.part_uri.render() if w.locus.part_uri else None,
            }
        else:
            wd["locus"] = None
        d["witnesses"].append(wd)
    d["relations"] = [
        {
            "id": r.local_id,
            "type": r.rel_type,
            "subjects": [_reference_str(s) for s in r.subjects],
            "predicate": r.predicate,
            "objects": [_reference_str(o) for o in r.objects],
            "sources": [s.render() for s in r.sources],
        }
        for r in record.relations
    ]
    d["subjects"] = list(record.subjects)
    d["change_log"] = [{"who": c.who, "when": c.when, "what": c.what} for c in record.change_log]
    return d
