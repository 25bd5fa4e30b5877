"""Hierarchical subject vocabulary with stable dotted codes.

The tree ships as a delimited data file so the scheme can be revised without
touching code; codes stay stable against label edits. Depth is at most two:
numbered top-level entries, lettered subentries.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from pathlib import Path

from .model import ReportItem, Severity, ValidationReport, WorkRecord


class SubjectNotFound(KeyError):
    def __init__(self, code: str):
        super().__init__(code)
        self.code = code

    def __str__(self) -> str:
        return f"unknown subject code {self.code!r}"


@dataclass(frozen=True)
class SubjectNode:
    code: str
    label: str
    parent: str | None
    children: tuple[str, ...]


class Taxonomy:
    def __init__(self, rows: list[tuple[str, str | None, str]]):
        nodes: dict[str, dict] = {}
        order: list[str] = []
        for code, parent, label in rows:
            if code in nodes:
                raise ValueError(f"duplicate subject code {code!r}")
            nodes[code] = {"label": label, "parent": parent, "children": []}
            order.append(code)
        for code in order:
            parent = nodes[code]["parent"]
            if parent is not None:
                if parent not in nodes:
                    raise ValueError(f"subject {code!r} names unknown parent {parent!r}")
                if nodes[parent]["parent"] is not None:
                    raise ValueError(f"subject {code!r} nests deeper than two levels")
                nodes[parent]["children"].append(code)
        self._nodes = {
            code: SubjectNode(code, n["label"], n["parent"], tuple(n["children"]))
            for code, n in nodes.items()
        }
        self._order = tuple(order)

    def lookup(self, code: str) -> SubjectNode:
        try:
            return self._nodes[code]
        except KeyError:
            raise SubjectNotFound(code) from None

    def children(self, code: str) -> list[SubjectNode]:
        return [self._nodes[c] for c in self.lookup(code).children]

    def roots(self) -> list[SubjectNode]:
        return [self._nodes[c] for c in self._order if self._nodes[c].parent is None]

    def __contains__(self, code: str) -> bool:
        return code in self._nodes

    def __iter__(self):
        return (self._nodes[c] for c in self._order)

    def __len__(self) -> int:
        return len(self._nodes)

    def to_rows(self) -> list[tuple[str, str | None, str]]:
        return [(n.code, n.parent, n.label) for n in self]


def _parse_rows(text: str) -> list[tuple[str, str | None, str]]:
    rows = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise ValueError(f"taxonomy line {lineno}: expected 3 tab-separated fields")
        code, parent, label = (p.strip() for p in parts)
        rows.append((code, parent or None, label))
    return rows


def load_taxonomy(path: str | Path | None = None) -> Taxonomy:
    """Load the subject tree from a data file (the packaged one by default)."""
    if path is None:
        text = resources.files("scriptorium.data").joinpath("taxonomy.tsv").read_text("utf-8")
    else:
        text = Path(path).read_text("utf-8")
    return Taxonomy(_parse_rows(text))


_default: Taxonomy | None = None


def default_taxonomy() -> Taxonomy:
    global _default
    if _default is None:
        _default = load_taxonomy()
    return _default


def lookup_subject(code: str, taxonomy: Taxonomy | None = None) -> SubjectNode:
    return (taxonomy or default_taxonomy()).lookup(code)


def children(code: str, taxonomy: Taxonomy | None = None) -> list[SubjectNode]:
    return (taxonomy or default_taxonomy()).children(code)


def validate_subject_codes(record: WorkRecord, taxonomy: Taxonomy | None = None) -> ValidationReport:
    """One error per unknown code; an empty subject list is fine."""
    tax = taxonomy or default_taxonomy()
    items = []
    for i, code in enumerate(record.subjects):
        if code not in tax:
            items.append(ReportItem(Severity.ERROR, "SUBJ_UNKNOWN", f"subjects[{i}]",
                                    f"unknown subject code {code!r}"))
    return ValidationReport(tuple(sorted(items, key=lambda i: (i.path, i.code))))
