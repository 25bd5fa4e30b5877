"""Record-level invariant checks and language-tag policy.

Violations are report items, never exceptions: the validator always returns
a full, deterministically ordered report so batch runs and the HTTP API can
surface every problem at once. The Syriac macrolanguage policy lives here
too: "syc" is accepted but warned about, and canonicalized to "syr" only on
explicit request.
"""

from __future__ import annotations

from .model import (
    EXCERPT_NOTE_TYPES,
    KNOWN_TITLE_TAGS,
    ReportItem,
    Severity,
    TitleEntry,
    ValidationReport,
    WorkRecord,
    normalize_ws,
)
from .rdf import DEFAULT_NAMESPACES, NamespaceTable
from .uris import LocalPointer, UriError, UriKind, parse_entity_uri


def normalize_lang(tag: str) -> tuple[str, bool]:
    """Case-normalize a BCP-47-style tag; map the "syc" primary subtag to "syr".

    Returns (normalized tag, warned). ``warned`` is True exactly when the
    macrolanguage substitution fired. Script subtags keep their title case,
    region subtags go upper, everything else lower.
    """
    if not tag:
        raise ValueError("empty language tag")
    parts = tag.split("-")
    normalized = []
    for i, part in enumerate(parts):
        if i == 0:
            normalized.append(part.lower())
        elif len(part) == 4 and part.isalpha():
            normalized.append(part.title())
        elif len(part) == 2 and part.isalpha():
            normalized.append(part.upper())
        else:
            normalized.append(part.lower())
    warned = normalized[0] == "syc"
    if warned:
        normalized[0] = "syr"
    return "-".join(normalized), warned


def _casefold_tag(tag: str) -> str:
    """Case normalization only, without the macrolanguage substitution."""
    if not tag:
        return tag
    parts = tag.split("-")
    out = [parts[0].lower()]
    for part in parts[1:]:
        if len(part) == 4 and part.isalpha():
            out.append(part.title())
        elif len(part) == 2 and part.isalpha():
            out.append(part.upper())
        else:
            out.append(part.lower())
    return "-".join(out)


def _is_syc(tag: str | None) -> bool:
    return bool(tag) and tag.split("-")[0].lower() == "syc"


def canonical_headword(record: WorkRecord, lang: str) -> TitleEntry | None:
    """The unique headword-tagged title for a language, if one exists."""
    wanted = _casefold_tag(lang)
    for title in record.titles:
        if title.is_headword and _casefold_tag(title.lang) == wanted:
            return title
    return None


def _int_or_none(text: str | None) -> int | None:
    if text is None:
        return None
    try:
        return int(text)
    except ValueError:
        return None


class _Collector:
    def __init__(self) -> None:
        self.items: list[ReportItem] = []

    def error(self, code: str, path: str, message: str) -> None:
        self.items.append(ReportItem(Severity.ERROR, code, path, message))

    def warn(self, code: str, path: str, message: str) -> None:
        self.items.append(ReportItem(Severity.WARNING, code, path, message))

    def report(self) -> ValidationReport:
        return ValidationReport(tuple(sorted(self.items, key=lambda i: (i.path, i.code))))


def validate_record(record: WorkRecord, ns: NamespaceTable = DEFAULT_NAMESPACES) -> ValidationReport:
    """Check every record-level invariant; pure, deterministic, never raises."""
    c = _Collector()
    witness_ids = record.witness_ids()

    def check_sources(sources: tuple[LocalPointer, ...], path: str) -> None:
        for i, ptr in enumerate(sources):
            if ptr.target_id not in witness_ids:
                c.error("PTR_UNRESOLVED", f"{path}.sources[{i}]",
                        f"source pointer #{ptr.target_id} does not match any witness")

    def check_lang(tag: str | None, path: str) -> None:
        if _is_syc(tag):
            c.warn("LANG_SYC", path,
                   f'language tag "{tag}" uses the Classical Syriac code; prefer the macrolanguage "syr"')

    # titles: at most one headword per (case-normalized) language tag
    headword_langs: dict[str, list[int]] = {}
    for i, title in enumerate(record.titles):
        path = f"titles[{i}]"
        if not title.lang:
            c.error("TITLE_LANG", path, "title carries no language tag")
        else:
            check_lang(title.lang, f"{path}.lang")
        if not normalize_ws(title.plain_text):
            c.error("TITLE_EMPTY", path, "title text is empty")
        if title.is_headword and title.lang:
            headword_langs.setdefault(_casefold_tag(title.lang), []).append(i)
        for tag in title.tags:
            if tag not in KNOWN_TITLE_TAGS:
                c.warn("TAG_UNKNOWN", f"{path}.tags", f"unknown title tag {tag!r} preserved verbatim")
        check_sources(title.sources, path)
    for lang, indexes in sorted(headword_langs.items()):
        if len(indexes) > 1:
            c.error("HEADWORD_DUP", "titles",
                    f'{len(indexes)} titles tagged headword for language "{lang}" (titles {indexes})')

    for i, author in enumerate(record.authors):
        path = f"authors[{i}]"
        if author.person_uri.kind is not UriKind.PERSON:
            c.error("REF_KIND", path, f"author reference {author.person_uri} is not a person URI")
        check_sources(author.sources, path)

    if record.text_lang is not None:
        check_lang(record.text_lang.main, "text_lang.main")
        check_sources(record.text_lang.sources, "text_lang")

    for i, note in enumerate(record.notes):
        path = f"notes[{i}]"
        if note.note_type in EXCERPT_NOTE_TYPES and not note.quoted:
            c.error("NOTE_QUOTE", path,
                    f"{note.note_type.value} note must wrap its excerpt as a quotation")
        if len(note.segments) > 1:
            for j, (lang, _) in enumerate(note.segments):
                if not lang:
                    c.error("NOTE_SEG_LANG", f"{path}.segments[{j}]",
                            "multilingual note segment carries no language tag")
        for j, (lang, _) in enumerate(note.segments):
            check_lang(lang, f"{path}.segments[{j}].lang")
        check_sources(note.sources, path)

    # idnos: exactly one URI idno, equal to the record URI
    uri_idnos = [i for i, idno in enumerate(record.idnos) if idno.scheme == "URI"]
    if len(uri_idnos) != 1:
        c.error("IDNO_URI", "idnos", f"record must carry exactly one URI idno, found {len(uri_idnos)}")
    else:
        value = record.idnos[uri_idnos[0]].value
        try:
            parsed = parse_entity_uri(value)
        except UriError:
            c.error("IDNO_URI", f"idnos[{uri_idnos[0]}]", f"URI idno {value!r} is not an entity URI")
        else:
            if parsed.kind is not UriKind.WORK:
                c.error("IDNO_URI", f"idnos[{uri_idnos[0]}]", f"URI idno {value!r} is not a work URI")
            elif parsed != record.uri:
                c.error("IDNO_URI", f"idnos[{uri_idnos[0]}]",
                        f"URI idno {value!r} does not match record URI {record.uri}")

    seen_ids: set[str] = set()
    for i, w in enumerate(record.witnesses):
        path = f"witnesses[{i}]"
        if w.local_id in seen_ids:
            c.error("WITNESS_ID_DUP", path, f"duplicate witness id {w.local_id!r}")
        seen_ids.add(w.local_id)
        if w.record_ptr is not None and w.record_ptr.kind not in (UriKind.BIBL, UriKind.MANUSCRIPT):
            c.error("REF_KIND", f"{path}.record_ptr",
                    f"witness pointer {w.record_ptr} must be a bibl or manuscript URI")
        if w.ms_identifier is not None and w.ms_identifier.uri.kind is not UriKind.MANUSCRIPT:
            c.error("REF_KIND", f"{path}.ms_identifier", f"{w.ms_identifier.uri} is not a manuscript URI")
        if w.is_manuscript and w.locus is None:
            c.error("WITNESS_SHAPE", path, "manuscript witness carries no locus")
        if w.witness_class != "lawd:WrittenWork" and not w.cited_ranges:
            c.error("WITNESS_SHAPE", path, "publication witness carries no citedRange")
        for j, r in enumerate(w.cited_ranges):
            f, t = _int_or_none(r.from_), _int_or_none(r.to)
            if f is not None and t is not None and f > t:
                c.error("RANGE_REVERSED", f"{path}.cited_ranges[{j}]",
                        f"citedRange {r.unit} runs {r.from_}-{r.to}")
        if w.locus is not None:
            f, t = _int_or_none(w.locus.from_), _int_or_none(w.locus.to)
            if f is not None and t is not None and f > t:
                c.error("RANGE_REVERSED", f"{path}.locus",
                        f"locus runs {w.locus.from_}-{w.locus.to}")
            if w.locus.part_uri is not None and w.locus.part_uri.fragment is None:
                c.error("REF_KIND", f"{path}.locus",
                        f"locus part URI {w.locus.part_uri} carries no fragment")
        if w.title is not None:
            check_lang(w.title[0], f"{path}.title.lang")
        check_lang(w.text_lang, f"{path}.text_lang")

    for i, rel in enumerate(record.relations):
        path = f"relations[{i}]"
        if not ns.is_bound(rel.predicate):
            c.error("PRED_UNBOUND", path, f"predicate {rel.predicate!r} has no bound prefix")
        if not rel.subjects:
            c.error("REL_EMPTY", path, "relation has no subjects")
        if not rel.objects:
            c.error("REL_EMPTY", path, "relation has no objects")
        for role, refs in (("subjects", rel.subjects), ("objects", rel.objects)):
            for j, ref in enumerate(refs):
                if isinstance(ref, LocalPointer) and ref.target_id not in witness_ids:
                    c.error("PTR_UNRESOLVED", f"{path}.{role}[{j}]",
                            f"relation pointer #{ref.target_id} does not match any witness")
        check_sources(rel.sources, path)

    return c.report()
