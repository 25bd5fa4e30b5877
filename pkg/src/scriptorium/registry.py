"""File-backed work registry: one TEI document per URI, derived indexes.

The registry root holds ``works/{id}.xml`` plus a persisted id-allocation
file and the linkage byproducts (stubs, candidates, decisions) the review
queue is served from. All indexes are derived purely from the files and are
rebuilt on open; mutations funnel through a single lock and land atomically
(write to temp, rename), so readers always see a consistent state.
"""

from __future__ import annotations

import json
import os
import tempfile
import threading
from dataclasses import dataclass
from pathlib import Path

from .linkage import (
    MatchCandidate,
    MatchDecision,
    WorkStub,
    candidate_from_dict,
    candidate_to_dict,
    decision_from_dict,
    decision_to_dict,
    normalize_title,
    read_jsonl,
    stub_from_dict,
    stub_to_dict,
    write_jsonl,
)
from .model import ValidationReport, WorkRecord
from .tei import parse_work_record, serialize_work_record
from .uris import EntityUri, UriKind
from .validate import canonical_headword, validate_record

#: work-to-work predicates and their declared inverses (both directions)
INVERSE_PREDICATES = {
    "syriaca:hasVersion": "syriaca:versionOf",
    "syriaca:versionOf": "syriaca:hasVersion",
    "syriaca:hasRecension": "syriaca:recensionOf",
    "syriaca:recensionOf": "syriaca:hasRecension",
}

#: predicates whose assertion belongs in the derived work's record: the
#: object of ``parent --hasVersion--> derived`` is the derived work
DERIVED_SIDE_PREDICATES = frozenset({"syriaca:hasVersion", "syriaca:hasRecension"})


class RegistryError(Exception):
    def __init__(self, code: str, message: str, report: ValidationReport | None = None):
        super().__init__(message)
        self.code = code
        self.report = report


@dataclass(frozen=True)
class LintViolation:
    code: str           # DUP_RELATION or DERIVED_SIDE
    predicate: str
    uris: tuple[str, ...]
    message: str


def _atomic_write(path: Path, data: str) -> None:
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


class Registry:
    def __init__(self, root: str | Path, create: bool = False, read_only: bool = False):
        self.root = Path(root)
        self.works_dir = self.root / "works"
        self.linkage_dir = self.root / "linkage"
        self.counters_path = self.root / "counters.json"
        self.read_only = read_only
        self._lock = threading.RLock()
        if create:
            self.works_dir.mkdir(parents=True, exist_ok=True)
            self.linkage_dir.mkdir(parents=True, exist_ok=True)
        if not self.works_dir.is_dir():
            raise RegistryError("BAD_ROOT", f"{self.root} is not a registry root (no works/ directory)")
        self._records: dict[EntityUri, WorkRecord] = {}
        self._files: dict[EntityUri, Path] = {}
        self._by_idno: dict[tuple[str, str], EntityUri] = {}
        self._title_tokens: dict[str, set[EntityUri]] = {}
        self._titles: dict[EntityUri, list[tuple[str, frozenset[str]]]] = {}
        self._next_id: dict[str, int] = {}
        self._load()

    # -- loading and indexes ----------------------------------------------

    def _load(self) -> None:
        counters: dict[str, int] = {}
        if self.counters_path.exists():
            counters = json.loads(self.counters_path.read_text("utf-8"))
        self._next_id = {kind.value: int(counters.get(kind.value, 1)) for kind in UriKind
                         if kind is not UriKind.FOREIGN}
        for path in sorted(self.works_dir.glob("*.xml")):
            record = parse_work_record(path.read_text("utf-8"))
            if f"{record.uri.id}.xml" != path.name:
                raise RegistryError(
                    "BAD_FILENAME", f"{path.name} holds {record.uri}, breaking the uri-file bijection"
                )
            self._index(record, path)

    def _index(self, record: WorkRecord, path: Path) -> None:
        uri = record.uri
        self._records[uri] = record
        self._files[uri] = path
        for idno in record.idnos:
            if idno.scheme != "URI":
                self._by_idno[(idno.scheme, idno.value)] = uri
        entries = []
        for title in record.titles:
            tokens = frozenset(normalize_title(title.plain_text, title.lang))
            entries.append((title.lang, tokens))
            for token in tokens:
                self._title_tokens.setdefault(token, set()).add(uri)
        self._titles[uri] = entries
        next_work = self._next_id.get("work", 1)
        if uri.id >= next_work:
            self._next_id["work"] = uri.id + 1

    def _unindex(self, uri: EntityUri) -> None:
        record = self._records.pop(uri, None)
        self._files.pop(uri, None)
        self._titles.pop(uri, None)
        if record is not None:
            for idno in record.idnos:
                if idno.scheme != "URI":
                    self._by_idno.pop((idno.scheme, idno.value), None)
        for uris in self._title_tokens.values():
            uris.discard(uri)

    def index_snapshot(self) -> dict:
        """Deterministic view of the derived indexes, for rebuild comparisons."""
        return {
            "uris": sorted(u.render() for u in self._records),
            "idnos": {f"{s}|{v}": u.render() for (s, v), u in sorted(self._by_idno.items())},
            "tokens": {t: sorted(u.render() for u in us)
                       for t, us in sorted(self._title_tokens.items()) if us},
            "next_id": dict(sorted(self._next_id.items())),
        }

    def uris(self) -> list[EntityUri]:
        return sorted(self._records)

    def records(self) -> list[WorkRecord]:
        return [self._records[u] for u in self.uris()]

    # -- mutations ----------------------------------------------------------

    def _persist_counters(self) -> None:
        _atomic_write(self.counters_path, json.dumps(self._next_id, indent=0, sort_keys=True))

    def mint_uri(self, kind: UriKind | str) -> EntityUri:
        """Allocate the next id for a kind; ids strictly increase, never reused."""
        if self.read_only:
            raise RegistryError("READ_ONLY", "registry opened read-only")
        kind = UriKind(kind)
        if kind is UriKind.FOREIGN:
            raise RegistryError("BAD_KIND", "cannot mint a foreign URI")
        with self._lock:
            allocated = self._next_id[kind.value]
            self._next_id[kind.value] = allocated + 1
            self._persist_counters()
            return EntityUri(kind, allocated)

    def put_record(self, record: WorkRecord) -> ValidationReport:
        """Validate, write atomically, and index; rejects records with errors."""
        if self.read_only:
            raise RegistryError("READ_ONLY", "registry opened read-only")
        if record.uri.kind is not UriKind.WORK or record.uri.fragment is not None:
            raise RegistryError("BAD_KIND", f"registry stores work records, not {record.uri}")
        report = validate_record(record)
        if not report.ok:
            raise RegistryError("INVALID", f"record {record.uri} fails validation", report)
        text = serialize_work_record(record)
        with self._lock:
            path = self.works_dir / f"{record.uri.id}.xml"
            _atomic_write(path, text)
            self._unindex(record.uri)
            self._index(record, path)
            self._persist_counters()
        return report

    # -- lookups --------------------------------------------------------------

    def get_record(self, uri: EntityUri) -> WorkRecord:
        record = self._records.get(uri.without_fragment())
        if record is None:
            raise RegistryError("NOT_FOUND", f"no record for {uri}")
        return record

    def get_by_id(self, work_id: int) -> WorkRecord:
        return self.get_record(EntityUri(UriKind.WORK, work_id))

    def get_by_idno(self, scheme: str, value: str) -> EntityUri:
        uri = self._by_idno.get((scheme, value))
        if uri is None:
            raise RegistryError("NOT_FOUND", f"no record with idno {scheme} {value!r}")
        return uri

    def search_titles(self, query: str, lang: str | None = None) -> list[tuple[EntityUri, str, float]]:
        """Token-overlap ranking over the title index; ties break by ascending id."""
        tokens = frozenset(t for t in normalize_title(query) if len(t) >= 2)
        if not tokens:
            return []
        candidates: set[EntityUri] = set()
        for token in tokens:
            candidates |= self._title_tokens.get(token, set())
        hits: list[tuple[EntityUri, str, float]] = []
        for uri in candidates:
            best = 0.0
            for title_lang, title_tokens in self._titles.get(uri, []):
                if lang and title_lang != lang:
                    continue
                if not title_tokens:
                    continue
                overlap = len(tokens & title_tokens) / len(tokens | title_tokens)
                best = max(best, overlap)
            if best > 0:
                hits.append((uri, self._display_title(uri, lang), best))
        hits.sort(key=lambda h: (-h[2], h[0].id))
        return hits

    def _display_title(self, uri: EntityUri, lang: str | None) -> str:
        record = self._records[uri]
        if lang:
            head = canonical_headword(record, lang)
            if head:
                return head.plain_text
        head = canonical_headword(record, "en")
        if head:
            return head.plain_text
        for title in record.titles:
            if title.is_headword:
                return title.plain_text
        return record.titles[0].plain_text if record.titles else uri.render()

    # -- corpus lint ------------------------------------------------------------

    def lint_corpus_directionality(self) -> list[LintViolation]:
        """Flag pairwise relationships asserted on both sides, and derivation
        relations stored on the parent instead of the derived record."""
        return lint_directionality(self.records())

    # -- linkage artifacts --------------------------------------------------------

    @property
    def candidates_path(self) -> Path:
        return self.linkage_dir / "candidates.jsonl"

    @property
    def decisions_path(self) -> Path:
        return self.linkage_dir / "decisions.jsonl"

    @property
    def stubs_path(self) -> Path:
        return self.linkage_dir / "stubs.jsonl"

    def read_candidates(self) -> list[MatchCandidate]:
        if not self.candidates_path.exists():
            return []
        return [candidate_from_dict(d) for d in read_jsonl(self.candidates_path)]

    def read_decisions(self) -> list[MatchDecision]:
        if not self.decisions_path.exists():
            return []
        return [decision_from_dict(d) for d in read_jsonl(self.decisions_path)]

    def read_stubs(self) -> list[WorkStub]:
        if not self.stubs_path.exists():
            return []
        return [stub_from_dict(d) for d in read_jsonl(self.stubs_path)]

    def write_candidates(self, candidates: list[MatchCandidate]) -> None:
        self.linkage_dir.mkdir(parents=True, exist_ok=True)
        write_jsonl(self.candidates_path, (candidate_to_dict(c) for c in candidates))

    def write_stubs(self, stubs: list[WorkStub]) -> None:
        self.linkage_dir.mkdir(parents=True, exist_ok=True)
        write_jsonl(self.stubs_path, (stub_to_dict(s) for s in stubs))

    def append_decision(self, decision: MatchDecision) -> str:
        """Append to the decisions log. Returns "recorded" or "unchanged".

        A repeat of the same editor's standing verdict is idempotent; a
        conflicting verdict from the same editor is refused (the log is the
        audit trail, not a scratchpad).
        """
        if self.read_only:
            raise RegistryError("READ_ONLY", "registry opened read-only")
        with self._lock:
            for existing in self.read_decisions():
                if (existing.candidate_id == decision.candidate_id
                        and existing.editor == decision.editor):
                    if existing.verdict is decision.verdict:
                        return "unchanged"
                    raise RegistryError(
                        "DECISION_CONFLICT",
                        f"editor {decision.editor!r} already ruled "
                        f"{existing.verdict.value!r} on {decision.candidate_id}",
                    )
            self.linkage_dir.mkdir(parents=True, exist_ok=True)
            with open(self.decisions_path, "a", encoding="utf-8") as fh:
                fh.write(json.dumps(decision_to_dict(decision), ensure_ascii=False, sort_keys=True) + "\n")
            return "recorded"


def _work_work_assertions(record: WorkRecord):
    """(subject work, predicate, object work) triples asserted by this record."""
    for rel in record.relations:
        for subj in rel.subjects:
            if not isinstance(subj, EntityUri) or subj.kind is not UriKind.WORK or subj.fragment:
                continue
            for obj in rel.objects:
                if not isinstance(obj, EntityUri) or obj.kind is not UriKind.WORK or obj.fragment:
                    continue
                if subj == obj:
                    continue
                yield subj, rel.predicate, obj


def lint_directionality(records: list[WorkRecord]) -> list[LintViolation]:
    assertions: list[tuple[EntityUri, EntityUri, str, EntityUri]] = []
    for record in records:
        for subj, predicate, obj in _work_work_assertions(record):
            assertions.append((record.uri, subj, predicate, obj))

    violations: list[LintViolation] = []
    # double-sided storage: the same pairwise relationship (same predicate or
    # its declared inverse) asserted in both members' records
    by_pair: dict[tuple[str, str, str], set[str]] = {}
    for holder, subj, predicate, obj in assertions:
        low, high = sorted((subj.render(), obj.render()))
        pred_class = min(predicate, INVERSE_PREDICATES.get(predicate, predicate))
        key = (low, high, pred_class)
        if holder.render() in (low, high):
            by_pair.setdefault(key, set()).add(holder.render())
    for (low, high, pred_class), holders in sorted(by_pair.items()):
        if len(holders) > 1:
            violations.append(
                LintViolation(
                    "DUP_RELATION", pred_class, (low, high),
                    f"relationship {pred_class} between {low} and {high} is stored in both records",
                )
            )
    # derivation relations belong in the derived record (the object side)
    for holder, subj, predicate, obj in assertions:
        if predicate in DERIVED_SIDE_PREDICATES and holder != obj:
            violations.append(
                LintViolation(
                    "DERIVED_SIDE", predicate, (subj.render(), obj.render()),
                    f"{predicate} for derived work {obj} is stored on {holder}, "
                    f"not on the derived record",
                )
            )
    violations.sort(key=lambda v: (v.code, v.uris, v.predicate))
    return violations
