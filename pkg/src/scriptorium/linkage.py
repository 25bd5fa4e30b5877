"""Catalogue ingestion and editor-in-the-loop record linkage.

Work stubs extracted from manuscript catalogues are blocked into candidate
pairs, scored on title/author/incipit similarity, banded against thresholds,
and merged into new work records once editors have ruled on them. Absent
evidence never counts against a pair: the score is a weighted average over
the features both sides actually have.
"""

from __future__ import annotations

import hashlib
import json
import unicodedata
import xml.etree.ElementTree as ET
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Iterable, Sequence

from .model import (
    AuthorRef,
    BiblWitness,
    ChangeEntry,
    IdnoEntry,
    Locus,
    MsIdentifier,
    NotePart,
    NoteType,
    RelationTriple,
    TitleEntry,
    WorkRecord,
    escape_inline_text,
    normalize_ws,
)
from .uris import EntityUri, LocalPointer, UriError, UriKind, parse_entity_uri
from .validate import validate_record

DEFAULT_WEIGHTS = {"title": 0.5, "author": 0.3, "incipit": 0.2}


class LinkageError(ValueError):
    def __init__(self, code: str, message: str):
        super().__init__(message)
        self.code = code


class MergeConflict(LinkageError):
    def __init__(self, scheme: str, values: list[str]):
        super().__init__("MERGE_CONFLICT", f"conflicting {scheme} identifiers: {sorted(values)}")
        self.scheme = scheme
        self.values = sorted(values)


# -- stubs ----------------------------------------------------------------------

@dataclass(frozen=True)
class SourceMs:
    uri: EntityUri
    locus_from: str | None = None
    locus_to: str | None = None


@dataclass(frozen=True)
class WorkStub:
    stub_id: str
    titles: tuple[tuple[str | None, str], ...] = ()
    author_uri: EntityUri | None = None
    author_name: str | None = None
    incipit: tuple[str | None, str] | None = None
    source_ms: SourceMs | None = None
    provenance: str = ""

    def __post_init__(self):
        object.__setattr__(self, "titles", tuple((l, t) for l, t in self.titles))
        if not self.titles and self.incipit is None:
            raise LinkageError("STUB_EMPTY", f"stub {self.stub_id!r} has neither title nor incipit")


@dataclass(frozen=True)
class IngestResult:
    stubs: tuple[WorkStub, ...]
    warnings: tuple[str, ...]


def ingest_catalogue_entries(doc: str | bytes) -> IngestResult:
    """Extract one stub per catalogue item.

    The input is the msItem-like catalogue subset: a root element with an
    xml:id and optional <citation>, containing <msDesc> sections whose
    <msIdentifier> may declare the manuscript URI, each holding <msItem>
    entries with title / author / incipit / locus children. Items with
    neither a title nor an incipit are skipped with a warning.
    """
    xml_id = "{http://www.w3.org/XML/1998/namespace}id"
    root = ET.fromstring(doc)
    doc_id = root.get(xml_id) or "catalogue"
    citation = None
    for child in root:
        if child.tag.rsplit("}", 1)[-1] == "citation":
            citation = normalize_ws("".join(child.itertext()))
    provenance = citation or doc_id

    def local(el):
        return el.tag.rsplit("}", 1)[-1]

    stubs: list[WorkStub] = []
    warnings: list[str] = []
    index = 0
    for ms_desc in (el for el in root.iter() if local(el) == "msDesc"):
        ms_uri: EntityUri | None = None
        for ident in (el for el in ms_desc.iter() if local(el) == "msIdentifier"):
            for idno in ident:
                if local(idno) == "idno" and idno.get("type") == "URI":
                    try:
                        ms_uri = parse_entity_uri(normalize_ws("".join(idno.itertext())))
                    except UriError:
                        warnings.append(f"{doc_id}: unparseable manuscript URI in msIdentifier")
        for item in (el for el in ms_desc.iter() if local(el) == "msItem"):
            index += 1
            stub_id = f"{doc_id}-{index}"
            titles: list[tuple[str | None, str]] = []
            author_uri: EntityUri | None = None
            author_name: str | None = None
            incipit: tuple[str | None, str] | None = None
            locus_from = locus_to = None
            for child in item:
                tag = local(child)
                text = normalize_ws("".join(child.itertext()))
                lang = child.get(f"{{{'http://www.w3.org/XML/1998/namespace'}}}lang")
                if tag == "title" and text:
                    titles.append((lang, text))
                elif tag == "author":
                    ref = child.get("ref")
                    if ref:
                        try:
                            author_uri = parse_entity_uri(ref)
                        except UriError:
                            warnings.append(f"{stub_id}: foreign author ref {ref!r} kept as name only")
                    author_name = text or author_name
                elif tag == "incipit" and text:
                    incipit = (lang, text)
                elif tag == "locus":
                    locus_from = child.get("from")
                    locus_to = child.get("to")
                    if locus_from is None and text and "-" in text:
                        locus_from, _, locus_to = text.partition("-")
            if not titles and incipit is None:
                warnings.append(f"{stub_id}: skipped, no title and no incipit")
                continue
            source_ms = SourceMs(ms_uri, locus_from, locus_to) if ms_uri else None
            stubs.append(
                WorkStub(stub_id, tuple(titles), author_uri, author_name, incipit, source_ms, provenance)
            )
    return IngestResult(tuple(stubs), tuple(warnings))


# -- normalization and similarity ------------------------------------------------

def normalize_title(text: str, lang: str | None = None) -> tuple[str, ...]:
    """Canonical token sequence: NFC, casefold, strip marks and punctuation.

    Combining marks (diacritics, vowel points) are removed after canonical
    decomposition; punctuation becomes a token boundary. The language tag is
    accepted for symmetry but does not change the pipeline.
    """
    text = unicodedata.normalize("NFC", text).casefold()
    decomposed = unicodedata.normalize("NFD", text)
    kept: list[str] = []
    for ch in decomposed:
        cat = unicodedata.category(ch)
        if cat == "Mn":
            continue
        if cat.startswith("P"):
            kept.append(" ")
            continue
        kept.append(ch)
    return tuple("".join(kept).split())


def jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a or not b:
        return 0.0
    return len(a & b) / len(a | b)


def levenshtein(a: str, b: str) -> int:
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        cur = [i]
        for j, cb in enumerate(b, start=1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return prev[-1]


# -- candidates -------------------------------------------------------------------

class Band(str, Enum):
    AUTO = "auto"
    REVIEW = "review"
    REJECT = "reject"


class Verdict(str, Enum):
    ACCEPT = "accept"
    REJECT = "reject"


@dataclass(frozen=True)
class Thresholds:
    auto: float = 0.85
    review: float = 0.55

    def __post_init__(self):
        if not self.auto > self.review:
            raise LinkageError("BAD_THRESHOLDS", f"auto ({self.auto}) must exceed review ({self.review})")


@dataclass(frozen=True)
class BlockingConfig:
    min_title_token_len: int = 4
    incipit_prefix_tokens: int = 5


@dataclass(frozen=True)
class LinkItem:
    """Scoring view of a stub or an existing work record."""

    item_id: str
    title_tokens: tuple[frozenset[str], ...] = ()
    author_uris: frozenset[str] = frozenset()
    incipit_tokens: tuple[str, ...] | None = None

    @classmethod
    def from_stub(cls, stub: WorkStub) -> "LinkItem":
        tokens = tuple(
            frozenset(t) for t in (normalize_title(text, lang) for lang, text in stub.titles) if t
        )
        authors = frozenset({stub.author_uri.render()}) if stub.author_uri else frozenset()
        incipit = None
        if stub.incipit is not None:
            toks = normalize_title(stub.incipit[1], stub.incipit[0])
            incipit = toks if toks else None
        return cls(stub.stub_id, tokens, authors, incipit)

    @classmethod
    def from_record(cls, record: WorkRecord) -> "LinkItem":
        tokens = tuple(
            frozenset(t) for t in (normalize_title(t.plain_text, t.lang) for t in record.titles) if t
        )
        authors = frozenset(a.person_uri.render() for a in record.authors)
        incipit = None
        for note in record.notes:
            if note.note_type is NoteType.INCIPIT and note.segments:
                toks = normalize_title(note.segments[0][1], note.segments[0][0])
                if toks:
                    incipit = toks
                break
        return cls(record.uri.render(), tokens, authors, incipit)


@dataclass(frozen=True)
class MatchCandidate:
    candidate_id: str
    left: str
    right: str
    score: float | None = None
    features: tuple[tuple[str, float], ...] = ()
    band: Band | None = None

    def feature_map(self) -> dict[str, float]:
        return dict(self.features)


@dataclass(frozen=True)
class MatchDecision:
    candidate_id: str
    verdict: Verdict
    editor: str
    timestamp: str  # ISO-8601 instant


def candidate_id_for(left: str, right: str) -> str:
    a, b = sorted((left, right))
    digest = hashlib.sha1(f"{a}\x1f{b}".encode("utf-8")).hexdigest()
    return f"c{digest[:12]}"


def candidate_pairs(items: Sequence[LinkItem], blocking: BlockingConfig = BlockingConfig()) -> list[MatchCandidate]:
    """Emit each unordered pair sharing a block key, exactly once.

    Block keys: a shared author URI, a shared title token of the configured
    minimum length, or an identical incipit prefix.
    """
    blocks: dict[tuple[str, object], list[int]] = {}
    for idx, item in enumerate(items):
        for uri in item.author_uris:
            blocks.setdefault(("author", uri), []).append(idx)
        seen_tokens: set[str] = set()
        for tokens in item.title_tokens:
            for token in tokens:
                if len(token) >= blocking.min_title_token_len and token not in seen_tokens:
                    seen_tokens.add(token)
                    blocks.setdefault(("token", token), []).append(idx)
        if item.incipit_tokens:
            prefix = tuple(item.incipit_tokens[: blocking.incipit_prefix_tokens])
            blocks.setdefault(("incipit", prefix), []).append(idx)

    paired: set[tuple[str, str]] = set()
    for members in blocks.values():
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                a, b = items[members[i]], items[members[j]]
                if a.item_id == b.item_id:
                    continue
                key = tuple(sorted((a.item_id, b.item_id)))
                paired.add(key)  # type: ignore[arg-type]
    out = [
        MatchCandidate(candidate_id_for(left, right), left, right)
        for left, right in sorted(paired)
    ]
    return out


def score_pair(
    a: LinkItem, b: LinkItem, weights: dict[str, float] | None = None
) -> tuple[float, dict[str, float]]:
    """Weighted average over the features present on both sides.

    title_sim: best Jaccard over title pairs; author_match: 1/0 on URI
    agreement, absent when either side lacks an author; incipit_sim:
    1 - normalized edit distance of the normalized incipits.
    """
    w = dict(DEFAULT_WEIGHTS)
    if weights:
        w.update(weights)
    features: dict[str, float] = {}
    if a.title_tokens and b.title_tokens:
        features["title_sim"] = max(jaccard(x, y) for x in a.title_tokens for y in b.title_tokens)
    if a.author_uris and b.author_uris:
        features["author_match"] = 1.0 if a.author_uris & b.author_uris else 0.0
    if a.incipit_tokens is not None and b.incipit_tokens is not None:
        s1, s2 = " ".join(a.incipit_tokens), " ".join(b.incipit_tokens)
        longest = max(len(s1), len(s2))
        features["incipit_sim"] = 1.0 if longest == 0 else 1.0 - levenshtein(s1, s2) / longest
    if not features:
        raise LinkageError("NO_FEATURES", f"no comparable features between {a.item_id} and {b.item_id}")
    key_for = {"title_sim": "title", "author_match": "author", "incipit_sim": "incipit"}
    total_w = sum(w[key_for[name]] for name in features)
    score = sum(w[key_for[name]] * value for name, value in features.items()) / total_w
    return score, features


def classify_candidate(score: float, thresholds: Thresholds = Thresholds()) -> Band:
    if score >= thresholds.auto:
        return Band.AUTO
    if score >= thresholds.review:
        return Band.REVIEW
    return Band.REJECT


def generate_candidates(
    items: Sequence[LinkItem],
    weights: dict[str, float] | None = None,
    thresholds: Thresholds = Thresholds(),
    blocking: BlockingConfig = BlockingConfig(),
) -> list[MatchCandidate]:
    """Blocking, scoring and banding in one deterministic pass."""
    by_id = {item.item_id: item for item in items}
    out: list[MatchCandidate] = []
    for cand in candidate_pairs(items, blocking):
        score, features = score_pair(by_id[cand.left], by_id[cand.right], weights)
        out.append(
            MatchCandidate(
                cand.candidate_id,
                cand.left,
                cand.right,
                score=score,
                features=tuple(sorted(features.items())),
                band=classify_candidate(score, thresholds),
            )
        )
    return out


# -- decisions and clustering ------------------------------------------------------

class _UnionFind:
    def __init__(self, ids: Iterable[str]):
        self.parent = {i: i for i in ids}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # deterministic: smaller id becomes the root
            if rb < ra:
                ra, rb = rb, ra
            self.parent[rb] = ra


@dataclass(frozen=True)
class Cluster:
    cluster_id: str  # lexicographically smallest member id
    members: tuple[str, ...]


def _decision_sort_key(decision: MatchDecision, index: int):
    try:
        ts = datetime.fromisoformat(decision.timestamp.replace("Z", "+00:00"))
        ts = ts.replace(tzinfo=None)
    except ValueError:
        ts = datetime.min
    return (ts, index)


def effective_decisions(decisions: Sequence[MatchDecision]) -> dict[str, dict[str, MatchDecision]]:
    """candidate_id -> editor -> that editor's latest decision."""
    latest: dict[str, dict[str, tuple[tuple, MatchDecision]]] = {}
    for index, d in enumerate(decisions):
        key = _decision_sort_key(d, index)
        per_editor = latest.setdefault(d.candidate_id, {})
        if d.editor not in per_editor or key > per_editor[d.editor][0]:
            per_editor[d.editor] = (key, d)
    return {cid: {ed: kd[1] for ed, kd in per.items()} for cid, per in latest.items()}


def apply_decisions(
    candidates: Sequence[MatchCandidate],
    decisions: Sequence[MatchDecision],
    extra_items: Iterable[str] = (),
) -> list[Cluster]:
    """Partition items: accepted pairs merge, unrejected auto pairs merge.

    Any editor's latest reject vetoes a merge, auto band included. Unknown
    candidate ids in the decision log are an error.
    """
    known = {c.candidate_id for c in candidates}
    unknown = sorted({d.candidate_id for d in decisions} - known)
    if unknown:
        raise LinkageError("UNKNOWN_CANDIDATE", f"decisions reference unknown candidates: {unknown}")

    ids: set[str] = set(extra_items)
    for c in candidates:
        ids.update((c.left, c.right))
    uf = _UnionFind(sorted(ids))

    effective = effective_decisions(decisions)
    for c in candidates:
        per_editor = effective.get(c.candidate_id, {})
        vetoed = any(d.verdict is Verdict.REJECT for d in per_editor.values())
        accepted = any(d.verdict is Verdict.ACCEPT for d in per_editor.values())
        if vetoed:
            continue
        if accepted or c.band is Band.AUTO:
            uf.union(c.left, c.right)

    groups: dict[str, list[str]] = {}
    for item in sorted(ids):
        groups.setdefault(uf.find(item), []).append(item)
    return [Cluster(root, tuple(sorted(members))) for root, members in sorted(groups.items())]


# -- merging ------------------------------------------------------------------------

def _witness_identity(w: BiblWitness) -> tuple:
    return (
        w.witness_class,
        w.record_ptr.render() if w.record_ptr else None,
        w.ms_identifier.uri.render() if w.ms_identifier else None,
        (w.locus.from_, w.locus.to) if w.locus else None,
        tuple((r.unit, r.from_, r.to) for r in w.cited_ranges),
    )


def merge_cluster(members: Sequence[WorkStub | WorkRecord], minted: EntityUri) -> WorkRecord:
    """Merge a decided cluster into one record under a freshly minted URI.

    Titles deduplicate on (lang, normalized text); witnesses deduplicate on
    their identity key; stub manuscript sources become written-work witnesses
    with an embodies relation. Headword tags are dropped: designating a
    headword is an editorial act. Conflicting concordance identifiers abort
    the merge.
    """
    if minted.kind is not UriKind.WORK or minted.fragment is not None:
        raise LinkageError("BAD_MINT", f"{minted} is not a plain work URI")

    titles: list[TitleEntry] = []
    title_keys: set[tuple] = set()
    authors: list[AuthorRef] = []
    author_keys: set[str] = set()
    notes: list[NotePart] = []
    note_keys: set[tuple] = set()
    idno_values: dict[str, dict[str, None]] = {}
    witnesses: list[BiblWitness] = []
    witness_keys: dict[tuple, str] = {}
    relations: list[RelationTriple] = []
    subjects: list[str] = []
    text_lang = None
    used_ids: set[str] = set()
    ms_counter = 0

    def fresh_id(base: str) -> str:
        candidate = base
        n = 1
        while candidate in used_ids:
            n += 1
            candidate = f"{base}-{n}"
        used_ids.add(candidate)
        return candidate

    def add_title(lang: str | None, text: str, entry: TitleEntry | None = None) -> None:
        plain = entry.plain_text if entry else text
        key = (lang or "", " ".join(normalize_title(plain, lang)))
        if key in title_keys:
            return
        title_keys.add(key)
        local_id = fresh_id(f"title-{len(titles) + 1}")
        if entry is not None:
            titles.append(
                TitleEntry(local_id, entry.lang, entry.text, sources=(),
                           tags=frozenset(t for t in entry.tags if t != "headword"))
            )
        else:
            titles.append(TitleEntry(local_id, lang or "", escape_inline_text(text)))

    def add_note(note: NotePart) -> None:
        key = (note.note_type, note.segments, note.quoted)
        if key not in note_keys:
            note_keys.add(key)
            notes.append(NotePart(note.note_type, note.segments, sources=(), quoted=note.quoted))

    def add_ms_witness(uri: EntityUri, locus_from: str | None, locus_to: str | None) -> None:
        nonlocal ms_counter
        if locus_from is not None:
            w = BiblWitness(
                local_id="pending",
                witness_class="lawd:WrittenWork",
                ms_identifier=MsIdentifier(uri.without_fragment()),
                locus=Locus(locus_from, locus_to),
            )
        else:
            w = BiblWitness(local_id="pending", witness_class="lawd:WrittenWork",
                            record_ptr=uri.without_fragment())
        key = _witness_identity(w)
        if key in witness_keys:
            return
        ms_counter += 1
        local_id = fresh_id(f"ms-{ms_counter}")
        w = BiblWitness(local_id, w.witness_class, ms_identifier=w.ms_identifier,
                        locus=w.locus, record_ptr=w.record_ptr)
        witness_keys[key] = local_id
        witnesses.append(w)
        relations.append(
            RelationTriple(subjects=(LocalPointer(local_id),), predicate="lawd:embodies",
                           objects=(minted,), rel_type="mss")
        )

    for member in members:
        if isinstance(member, WorkStub):
            for lang, text in member.titles:
                add_title(lang, text)
            if member.author_uri is not None and member.author_uri.render() not in author_keys:
                author_keys.add(member.author_uri.render())
                authors.append(AuthorRef(member.author_uri, member.author_name or ""))
            if member.incipit is not None:
                add_note(NotePart(NoteType.INCIPIT, (member.incipit,), quoted=True))
            if member.source_ms is not None:
                add_ms_witness(member.source_ms.uri, member.source_ms.locus_from, member.source_ms.locus_to)
        else:
            for entry in member.titles:
                add_title(entry.lang, entry.plain_text, entry)
            for author in member.authors:
                if author.person_uri.render() not in author_keys:
                    author_keys.add(author.person_uri.render())
                    authors.append(AuthorRef(author.person_uri, author.name))
            for note in member.notes:
                add_note(note)
            for idno in member.idnos:
                if idno.scheme == "URI":
                    continue
                idno_values.setdefault(idno.scheme, {})[idno.value] = None
            id_map: dict[str, str] = {}
            for w in member.witnesses:
                key = _witness_identity(w)
                if key in witness_keys:
                    id_map[w.local_id] = witness_keys[key]
                    continue
                local_id = fresh_id(w.local_id)
                id_map[w.local_id] = local_id
                witness_keys[key] = local_id
                witnesses.append(
                    BiblWitness(local_id, w.witness_class, w.creators, w.title, w.record_ptr,
                                w.cited_ranges, w.ms_identifier, w.locus, w.text_lang)
                )
            for rel in member.relations:
                relations.append(
                    RelationTriple(
                        subjects=tuple(
                            LocalPointer(id_map.get(r.target_id, r.target_id))
                            if isinstance(r, LocalPointer) else r
                            for r in rel.subjects
                        ),
                        predicate=rel.predicate,
                        objects=tuple(
                            LocalPointer(id_map.get(r.target_id, r.target_id))
                            if isinstance(r, LocalPointer) else r
                            for r in rel.objects
                        ),
                        rel_type=rel.rel_type,
                        sources=(),
                        local_id=None,
                    )
                )
            for code in member.subjects:
                if code not in subjects:
                    subjects.append(code)
            if text_lang is None and member.text_lang is not None:
                text_lang = member.text_lang

    for scheme, values in idno_values.items():
        if len(values) > 1:
            raise MergeConflict(scheme, list(values))

    idnos = [IdnoEntry("URI", minted.render())]
    idnos += [IdnoEntry(scheme, next(iter(values))) for scheme, values in idno_values.items()]

    record = WorkRecord(
        uri=minted,
        authors=tuple(authors),
        titles=tuple(titles),
        text_lang=text_lang,
        notes=tuple(notes),
        idnos=tuple(idnos),
        witnesses=tuple(witnesses),
        relations=tuple(relations),
        subjects=tuple(subjects),
        change_log=(ChangeEntry("linkage", "", f"Merged from {len(members)} catalogue item(s)"),),
    )
    report = validate_record(record)
    if not report.ok:
        raise LinkageError(
            "INVALID_MERGE",
            "merged record fails validation: " + "; ".join(i.code for i in report.errors),
        )
    return record


# -- JSONL formats --------------------------------------------------------------------

def candidate_to_dict(c: MatchCandidate) -> dict:
    return {
        "candidate_id": c.candidate_id,
        "left": c.left,
        "right": c.right,
        "score": c.score,
        "features": c.feature_map(),
        "band": c.band.value if c.band else None,
    }


def candidate_from_dict(d: dict) -> MatchCandidate:
    return MatchCandidate(
        candidate_id=d["candidate_id"],
        left=d["left"],
        right=d["right"],
        score=d.get("score"),
        features=tuple(sorted((d.get("features") or {}).items())),
        band=Band(d["band"]) if d.get("band") else None,
    )


def decision_to_dict(d: MatchDecision) -> dict:
    return {"candidate_id": d.candidate_id, "verdict": d.verdict.value,
            "editor": d.editor, "timestamp": d.timestamp}


def decision_from_dict(d: dict) -> MatchDecision:
    return MatchDecision(d["candidate_id"], Verdict(d["verdict"]), d["editor"], d.get("timestamp", ""))


def stub_to_dict(s: WorkStub) -> dict:
    return {
        "stub_id": s.stub_id,
        "titles": [[lang, text] for lang, text in s.titles],
        "author_uri": s.author_uri.render() if s.author_uri else None,
        "author_name": s.author_name,
        "incipit": list(s.incipit) if s.incipit else None,
        "source_ms": {
            "uri": s.source_ms.uri.render(),
            "locus_from": s.source_ms.locus_from,
            "locus_to": s.source_ms.locus_to,
        } if s.source_ms else None,
        "provenance": s.provenance,
    }


def stub_from_dict(d: dict) -> WorkStub:
    source = d.get("source_ms")
    return WorkStub(
        stub_id=d["stub_id"],
        titles=tuple((lang, text) for lang, text in d.get("titles", [])),
        author_uri=parse_entity_uri(d["author_uri"]) if d.get("author_uri") else None,
        author_name=d.get("author_name"),
        incipit=tuple(d["incipit"]) if d.get("incipit") else None,
        source_ms=SourceMs(parse_entity_uri(source["uri"]), source.get("locus_from"),
                           source.get("locus_to")) if source else None,
        provenance=d.get("provenance", ""),
    )


def write_jsonl(path: str | Path, dicts: Iterable[dict]) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for d in dicts:
            fh.write(json.dumps(d, ensure_ascii=False, sort_keys=True) + "\n")


def read_jsonl(path: str | Path) -> list[dict]:
    out = []
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.strip()
            if line:
                out.append(json.loads(line))
    return out
