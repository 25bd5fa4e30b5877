"""TEI document I/O: one work record per document.

Parsing accepts documents with or without the TEI namespace and is forgiving
about element order and whitespace. Serialization is the opposite: a single
canonical form (fixed element order, fixed attribute order, two-space
indent, UTF-8) so that equal records produce byte-identical files and diffs
under version control stay minimal. ``parse(serialize(r)) == r`` holds for
every valid record.

Unknown elements inside the work bibl are preserved as canonicalized raw XML
and re-emitted at the end of the bibl, so documents written by a newer
schema survive a rewrite cycle.
"""

from __future__ import annotations

import io
import xml.etree.ElementTree as ET
from dataclasses import dataclass

from .model import (
    AuthorRef,
    BiblWitness,
    ChangeEntry,
    CitedRange,
    IdnoEntry,
    Locus,
    MsIdentifier,
    NotePart,
    NoteType,
    PersonName,
    RelationTriple,
    TextLang,
    TitleEntry,
    ValidationReport,
    WorkRecord,
    normalize_ws,
)
from .uris import EntityUri, UriError, parse_entity_uri, parse_pointer, parse_reference
from .validate import validate_record

TEI_NS = "http://www.tei-c.org/ns/1.0"
XML_NS = "http://www.w3.org/XML/1998/namespace"
XML_ID = f"{{{XML_NS}}}id"
XML_LANG = f"{{{XML_NS}}}lang"

_TAG_TOKEN_MAP = {"#syriaca-headword": "headword", "#syriaca-anglicized": "anglicized"}
_TAG_TOKEN_UNMAP = {v: k for k, v in _TAG_TOKEN_MAP.items()}

NOTE_TYPES = {t.value for t in NoteType}


class TeiParseError(Exception):
    """Parse failure with a stable code; XML_SYNTAX errors carry line/column."""

    def __init__(self, code: str, message: str, line: int | None = None, column: int | None = None):
        super().__init__(message)
        self.code = code
        self.line = line
        self.column = column


class InvalidRecord(ValueError):
    """Raised when asked to serialize a record whose validation report has errors."""

    def __init__(self, report: ValidationReport):
        super().__init__(f"record has {len(report.errors)} validation error(s)")
        self.report = report


def _local(tag: str) -> str:
    return tag.rsplit("}", 1)[-1]


def _attr(el: ET.Element, name: str) -> str | None:
    if name == "xml:id":
        return el.get(XML_ID)
    if name == "xml:lang":
        return el.get(XML_LANG)
    return el.get(name)


def _split_attr(el: ET.Element, name: str) -> list[str]:
    value = _attr(el, name)
    return value.split() if value else []


def _text(el: ET.Element) -> str:
    return normalize_ws("".join(el.itertext()))


# -- escaping and canonical raw XML -------------------------------------------

def _esc_text(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")


def _esc_attr(text: str) -> str:
    return _esc_text(text).replace('"', "&quot;")


def _canonical_attr_name(name: str) -> str:
    if name == XML_ID:
        return "xml:id"
    if name == XML_LANG:
        return "xml:lang"
    if name.startswith("{"):
        return _local(name)  # foreign-namespace attributes keep their local name
    return name


def _inline_xml(el: ET.Element) -> str:
    """Canonical single-string form of an element's mixed content."""
    parts = [_esc_text(el.text or "")]
    for child in el:
        parts.append(_element_xml(child, inline=True))
        parts.append(_esc_text(child.tail or ""))
    return "".join(parts)


def _element_xml(el: ET.Element, inline: bool = False) -> str:
    attrs = sorted((_canonical_attr_name(k), v) for k, v in el.attrib.items())
    rendered = "".join(f' {k}="{_esc_attr(v)}"' for k, v in attrs)
    body = _inline_xml(el)
    if not body:
        return f"<{_local(el.tag)}{rendered}/>"
    return f"<{_local(el.tag)}{rendered}>{body}</{_local(el.tag)}>"


def _mixed_content(el: ET.Element) -> str:
    """Title-style content: inline markup kept, whitespace runs collapsed."""
    return normalize_ws(_inline_xml(el))


# -- parsing -------------------------------------------------------------------

@dataclass
class TeiDocument:
    """Split view of a parsed document: header extracts plus the work bibl."""

    change_log: tuple[ChangeEntry, ...]
    body_bibl: ET.Element


def split_document(doc: str | bytes) -> TeiDocument:
    """Parse XML text and locate the single work-level bibl element."""
    try:
        root = ET.fromstring(doc)
    except ET.ParseError as exc:
        line, col = exc.position if exc.position else (None, None)
        raise TeiParseError("XML_SYNTAX", f"not well-formed XML: {exc}", line, col) from exc

    changes: list[ChangeEntry] = []
    bibls: list[ET.Element] = []
    if _local(root.tag) == "bibl":
        bibls = [root]
    else:
        for el in root.iter():
            if _local(el.tag) == "change":
                changes.append(ChangeEntry(el.get("who", ""), el.get("when", ""), _text(el)))
            elif _local(el.tag) == "body":
                bibls = [child for child in el if _local(child.tag) == "bibl"]
    if len(bibls) != 1:
        raise TeiParseError(
            "MODEL_CARDINALITY",
            f"document must contain exactly one work bibl in the body, found {len(bibls)}",
        )
    return TeiDocument(tuple(changes), bibls[0])


def _parse_reference_attr(el: ET.Element, name: str, context: str):
    refs = []
    for token in _split_attr(el, name):
        try:
            refs.append(parse_reference(token))
        except UriError as exc:
            raise TeiParseError("MODEL_REF", f"{context}: bad reference {token!r}: {exc}") from exc
    return tuple(refs)


def _parse_sources(el: ET.Element, context: str):
    out = []
    for token in _split_attr(el, "source"):
        try:
            out.append(parse_pointer(token))
        except UriError as exc:
            raise TeiParseError("MODEL_REF", f"{context}: bad source pointer {token!r}: {exc}") from exc
    return tuple(out)


def _parse_entity_attr(el: ET.Element, name: str, context: str) -> EntityUri:
    value = _attr(el, name) or ""
    try:
        return parse_entity_uri(value)
    except UriError as exc:
        raise TeiParseError("MODEL_REF", f"{context}: bad entity URI {value!r}: {exc}") from exc


def _parse_title_tags(el: ET.Element) -> frozenset[str]:
    return frozenset(_TAG_TOKEN_MAP.get(tok, tok) for tok in _split_attr(el, "syriaca-tags"))


def _parse_note(el: ET.Element, context: str) -> NotePart:
    note_type = NoteType(el.get("type", ""))
    content = el
    quoted = False
    children = list(el)
    if len(children) == 1 and _local(children[0].tag) == "quote" and not normalize_ws(el.text or ""):
        quoted = True
        content = children[0]
    segs = [c for c in content if _local(c.tag) == "seg"]
    if segs:
        segments = tuple((_attr(s, "xml:lang"), _text(s)) for s in segs)
    else:
        segments = ((_attr(content, "xml:lang"), _text(content)),)
    return NotePart(note_type, segments, sources=_parse_sources(el, context), quoted=quoted)


def _parse_witness(el: ET.Element, index: int) -> BiblWitness:
    local_id = _attr(el, "xml:id") or f"bib-{index}"
    context = f"bibl {local_id}"
    creators: list[PersonName] = []
    title: tuple[str | None, str] | None = None
    record_ptr: EntityUri | None = None
    cited_ranges: list[CitedRange] = []
    ms_identifier: MsIdentifier | None = None
    locus: Locus | None = None
    text_lang: str | None = None

    for child in el:
        tag = _local(child.tag)
        if tag == "author":
            forename = surname = ""
            for part in child:
                if _local(part.tag) == "forename":
                    forename = _text(part)
                elif _local(part.tag) == "surname":
                    surname = _text(part)
            creators.append(PersonName(forename, surname))
        elif tag == "title":
            title = (_attr(child, "xml:lang"), _mixed_content(child))
        elif tag == "textLang":
            text_lang = child.get("mainLang")
        elif tag == "ptr":
            record_ptr = _parse_entity_attr(child, "target", context)
        elif tag == "citedRange":
            cited_ranges.append(
                CitedRange(child.get("unit", ""), child.get("from", ""), child.get("to", ""), _text(child))
            )
        elif tag == "msIdentifier":
            country = settlement = collection = collection_lang = None
            ms_uri: EntityUri | None = None
            alt: list[IdnoEntry] = []
            for part in child:
                ptag = _local(part.tag)
                if ptag == "country":
                    country = _text(part)
                elif ptag == "settlement":
                    settlement = _text(part)
                elif ptag == "collection":
                    collection = _text(part)
                    collection_lang = _attr(part, "xml:lang")
                elif ptag == "idno" and part.get("type") == "URI":
                    try:
                        ms_uri = parse_entity_uri(_text(part))
                    except UriError as exc:
                        raise TeiParseError("MODEL_REF", f"{context}: bad msIdentifier URI: {exc}") from exc
                elif ptag == "altIdentifier":
                    for idno in part:
                        if _local(idno.tag) == "idno":
                            alt.append(IdnoEntry(idno.get("type", ""), _text(idno)))
            if ms_uri is None:
                raise TeiParseError("MODEL_REF", f"{context}: msIdentifier carries no URI idno")
            ms_identifier = MsIdentifier(ms_uri, country, settlement, collection, collection_lang, tuple(alt))
        elif tag == "biblScope":
            from_ = to = None
            part_uri: EntityUri | None = None
            for part in child:
                ptag = _local(part.tag)
                if ptag == "locus":
                    from_ = part.get("from", "")
                    to = part.get("to")
                elif ptag == "idno" and part.get("type") == "URI":
                    try:
                        part_uri = parse_entity_uri(_text(part))
                    except UriError as exc:
                        raise TeiParseError("MODEL_REF", f"{context}: bad locus URI: {exc}") from exc
            if from_ is not None:
                locus = Locus(from_, to, part_uri)

    return BiblWitness(
        local_id=local_id,
        witness_class=el.get("type", ""),
        creators=tuple(creators),
        title=title,
        record_ptr=record_ptr,
        cited_ranges=tuple(cited_ranges),
        ms_identifier=ms_identifier,
        locus=locus,
        text_lang=text_lang,
    )


def parse_work_record(doc: str | bytes) -> WorkRecord:
    """Parse a TEI work document into a WorkRecord.

    Raises TeiParseError for malformed XML (with line/column), for a missing
    or duplicated work bibl (MODEL_CARDINALITY), for a missing URI idno
    (MODEL_NO_URI), and for unparseable entity references (MODEL_REF).
    Invariant violations beyond structure are not raised here; run
    validate_record on the result.
    """
    tei = split_document(doc)
    bibl = tei.body_bibl

    authors: list[AuthorRef] = []
    titles: list[TitleEntry] = []
    text_lang: TextLang | None = None
    notes: list[NotePart] = []
    idnos: list[IdnoEntry] = []
    witnesses: list[BiblWitness] = []
    relations: list[RelationTriple] = []
    subjects: list[str] = []
    extras: list[str] = []

    title_index = 0
    witness_index = 0
    for child in bibl:
        tag = _local(child.tag)
        if tag == "author":
            ref = _attr(child, "ref")
            if not ref:
                raise TeiParseError("MODEL_REF", "work author carries no ref attribute")
            try:
                person = parse_entity_uri(ref)
            except UriError as exc:
                raise TeiParseError("MODEL_REF", f"bad author ref {ref!r}: {exc}") from exc
            authors.append(AuthorRef(person, _text(child), _parse_sources(child, "author")))
        elif tag == "title":
            title_index += 1
            titles.append(
                TitleEntry(
                    local_id=_attr(child, "xml:id") or f"title-{title_index}",
                    lang=_attr(child, "xml:lang") or "",
                    text=_mixed_content(child),
                    sources=_parse_sources(child, "title"),
                    tags=_parse_title_tags(child),
                )
            )
        elif tag == "textLang":
            text_lang = TextLang(child.get("mainLang", ""), _parse_sources(child, "textLang"))
        elif tag == "note":
            note_type = child.get("type", "")
            if note_type == "subject":
                subjects.append(_text(child))
            elif note_type in NOTE_TYPES:
                notes.append(_parse_note(child, f"note[{len(notes)}]"))
            else:
                extras.append(_element_xml(child))
        elif tag == "idno":
            idnos.append(IdnoEntry(child.get("type", ""), _text(child)))
        elif tag == "bibl":
            witness_index += 1
            witnesses.append(_parse_witness(child, witness_index))
        elif tag == "listRelation":
            for rel in child:
                if _local(rel.tag) != "relation":
                    continue
                predicate = rel.get("ref", "")
                relations.append(
                    RelationTriple(
                        subjects=_parse_reference_attr(rel, "active", "relation"),
                        predicate=predicate,
                        objects=_parse_reference_attr(rel, "passive", "relation"),
                        rel_type=rel.get("type"),
                        sources=_parse_sources(rel, "relation"),
                        local_id=_attr(rel, "xml:id"),
                    )
                )
        else:
            extras.append(_element_xml(child))

    uri_values = [i.value for i in idnos if i.scheme == "URI"]
    if not uri_values:
        raise TeiParseError("MODEL_NO_URI", "work record declares no URI idno")
    try:
        uri = parse_entity_uri(uri_values[0])
    except UriError as exc:
        raise TeiParseError("MODEL_NO_URI", f"URI idno {uri_values[0]!r} is not a work URI: {exc}") from exc

    xml_id = _attr(bibl, "xml:id") or ""
    suffix = xml_id.rsplit("-", 1)[-1] if "-" in xml_id else xml_id
    if not suffix.isdigit() or int(suffix) != uri.id:
        raise TeiParseError(
            "MODEL_ID_MISMATCH",
            f"work bibl xml:id {xml_id!r} does not match URI idno {uri.render()!r}",
        )

    return WorkRecord(
        uri=uri,
        authors=tuple(authors),
        titles=tuple(titles),
        text_lang=text_lang,
        notes=tuple(notes),
        idnos=tuple(idnos),
        witnesses=tuple(witnesses),
        relations=tuple(relations),
        subjects=tuple(subjects),
        change_log=tei.change_log,
        extras=tuple(extras),
    )


# -- canonical serialization ---------------------------------------------------

class _Writer:
    def __init__(self) -> None:
        self.out = io.StringIO()
        self.depth = 0

    def line(self, text: str) -> None:
        self.out.write("  " * self.depth + text + "\n")

    def open(self, tag: str, attrs: list[tuple[str, str | None]] | None = None) -> None:
        self.line(f"<{tag}{_render_attrs(attrs)}>")
        self.depth += 1

    def close(self, tag: str) -> None:
        self.depth -= 1
        self.line(f"</{tag}>")

    def leaf(self, tag: str, attrs: list[tuple[str, str | None]] | None = None,
             text: str | None = None, raw: str | None = None) -> None:
        body = raw if raw is not None else (_esc_text(text) if text else "")
        if body:
            self.line(f"<{tag}{_render_attrs(attrs)}>{body}</{tag}>")
        else:
            self.line(f"<{tag}{_render_attrs(attrs)}/>")

    def getvalue(self) -> str:
        return self.out.getvalue()


def _render_attrs(attrs: list[tuple[str, str | None]] | None) -> str:
    if not attrs:
        return ""
    return "".join(f' {k}="{_esc_attr(v)}"' for k, v in attrs if v is not None)


def _sources_attr(sources) -> str | None:
    return " ".join(p.render() for p in sources) if sources else None


def _tags_attr(tags: frozenset[str]) -> str | None:
    if not tags:
        return None
    order = {"headword": "0", "anglicized": "1"}
    tokens = sorted(tags, key=lambda t: (order.get(t, "2"), t))
    return " ".join(_TAG_TOKEN_UNMAP.get(t, t) for t in tokens)


def _locus_display(locus: Locus) -> str:
    if locus.to and locus.to != locus.from_:
        return f"{locus.from_}-{locus.to}"
    return locus.from_


def _write_witness(w: BiblWitness, out: _Writer) -> None:
    out.open("bibl", [("type", w.witness_class or None), ("xml:id", w.local_id)])
    for creator in w.creators:
        if not creator.forename and not creator.surname:
            out.leaf("author")
            continue
        out.open("author")
        if creator.forename:
            out.leaf("forename", text=creator.forename)
        if creator.surname:
            out.leaf("surname", text=creator.surname)
        out.close("author")
    if w.title is not None:
        out.leaf("title", [("level", "m"), ("xml:lang", w.title[0])], raw=w.title[1])
    if w.text_lang is not None:
        out.leaf("textLang", [("mainLang", w.text_lang)])
    if w.record_ptr is not None:
        out.leaf("ptr", [("target", w.record_ptr.render())])
    for r in w.cited_ranges:
        out.leaf("citedRange",
                 [("unit", r.unit or None), ("from", r.from_ or None), ("to", r.to or None)],
                 text=r.display)
    if w.ms_identifier is not None:
        m = w.ms_identifier
        out.open("msIdentifier")
        if m.country is not None:
            out.leaf("country", text=m.country)
        if m.settlement is not None:
            out.leaf("settlement", text=m.settlement)
        if m.collection is not None:
            out.leaf("collection", [("xml:lang", m.collection_lang)], text=m.collection)
        out.leaf("idno", [("type", "URI")], text=m.uri.render())
        if m.alt_idnos:
            out.open("altIdentifier")
            for idno in m.alt_idnos:
                out.leaf("idno", [("type", idno.scheme)], text=idno.value)
            out.close("altIdentifier")
        out.close("msIdentifier")
    if w.locus is not None:
        out.open("biblScope")
        out.leaf("locus", [("from", w.locus.from_), ("to", w.locus.to)], text=_locus_display(w.locus))
        if w.locus.part_uri is not None:
            out.leaf("idno", [("type", "URI")], text=w.locus.part_uri.render())
        out.close("biblScope")
    out.close("bibl")


def _write_note(note: NotePart, out: _Writer) -> None:
    attrs = [("type", note.note_type.value), ("source", _sources_attr(note.sources))]
    single_plain = len(note.segments) == 1 and note.segments[0][0] is None
    if single_plain and not note.quoted:
        out.leaf("note", attrs, text=note.segments[0][1])
        return
    out.open("note", attrs)
    if note.quoted:
        if single_plain:
            out.leaf("quote", text=note.segments[0][1])
        else:
            out.open("quote")
            for lang, text in note.segments:
                out.leaf("seg", [("xml:lang", lang)], text=text)
            out.close("quote")
    else:
        for lang, text in note.segments:
            out.leaf("seg", [("xml:lang", lang)], text=text)
    out.close("note")


def serialize_work_record(record: WorkRecord) -> str:
    """Canonical TEI document for a record; refuses records with errors."""
    report = validate_record(record)
    if not report.ok:
        raise InvalidRecord(report)

    out = _Writer()
    out.line('<?xml version="1.0" encoding="UTF-8"?>')
    out.open("TEI", [("xmlns", TEI_NS)])
    out.open("teiHeader")
    out.open("fileDesc")
    out.open("titleStmt")
    out.leaf("title", text=f"Work record {record.uri.render()}")
    out.close("titleStmt")
    out.open("publicationStmt")
    out.leaf("p", text="One TEI document per work; maintained in the work registry.")
    out.close("publicationStmt")
    out.open("sourceDesc")
    out.leaf("p", text="Born digital.")
    out.close("sourceDesc")
    out.close("fileDesc")
    if record.change_log:
        out.open("revisionDesc")
        for change in record.change_log:
            out.leaf("change", [("who", change.who), ("when", change.when)], text=change.what)
        out.close("revisionDesc")
    out.close("teiHeader")
    out.open("text")
    out.open("body")
    out.open("bibl", [("xml:id", f"work-{record.uri.id}")])

    for author in record.authors:
        out.leaf("author",
                 [("ref", author.person_uri.render()), ("source", _sources_attr(author.sources))],
                 text=author.name)
    for title in record.titles:
        out.leaf("title",
                 [("xml:id", title.local_id), ("xml:lang", title.lang or None),
                  ("source", _sources_attr(title.sources)), ("syriaca-tags", _tags_attr(title.tags))],
                 raw=title.text)
    if record.text_lang is not None:
        out.leaf("textLang",
                 [("mainLang", record.text_lang.main),
                  ("source", _sources_attr(record.text_lang.sources))])
    for note in record.notes:
        _write_note(note, out)
    for code in record.subjects:
        out.leaf("note", [("type", "subject")], text=code)
    for idno in record.idnos:
        out.leaf("idno", [("type", idno.scheme)], text=idno.value)
    for witness in record.witnesses:
        _write_witness(witness, out)
    if record.relations:
        out.open("listRelation")
        for rel in record.relations:
            out.leaf("relation", [
                ("xml:id", rel.local_id),
                ("type", rel.rel_type),
                ("active", " ".join(s.render() for s in rel.subjects)),
                ("ref", rel.predicate),
                ("passive", " ".join(o.render() for o in rel.objects)),
                ("source", _sources_attr(rel.sources)),
            ])
        out.close("listRelation")
    for extra in record.extras:
        out.line(extra)

    out.close("bibl")
    out.close("body")
    out.close("text")
    out.close("TEI")
    return out.getvalue()


def record_filename(record: WorkRecord) -> str:
    return f"{record.uri.id}.xml"
