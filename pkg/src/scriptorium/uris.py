"""Entity URIs of the syriaca.org numeric scheme, plus document-local pointers.

Every first-class entity (work, manuscript, publication, person, place) is
identified by a URI of the form ``http://syriaca.org/{kind}/{id}``, optionally
carrying a ``#fragment`` that addresses a part of the record (a witness, a
manuscript section, ...). Anything outside that authority is "foreign" and is
kept as an opaque string by callers.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from enum import Enum
from urllib.parse import urlsplit


AUTHORITY = "http://syriaca.org"

_FRAGMENT_RE = re.compile(r"^[^#\s]+$")
_URI_RE = re.compile(r"^http://syriaca\.org/(?P<kind>[a-z]+)/(?P<id>\d+)(#(?P<frag>.*))?$")


class UriKind(str, Enum):
    WORK = "work"
    MANUSCRIPT = "manuscript"
    BIBL = "bibl"
    PERSON = "person"
    PLACE = "place"
    FOREIGN = "foreign"


ENTITY_KINDS = (UriKind.WORK, UriKind.MANUSCRIPT, UriKind.BIBL, UriKind.PERSON, UriKind.PLACE)


class UriError(ValueError):
    """Raised for strings that cannot be treated as URIs at all."""


@dataclass(frozen=True, order=True)
class EntityUri:
    """A syriaca.org entity identifier: kind + numeric id + optional fragment."""

    kind: UriKind
    id: int
    fragment: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ENTITY_KINDS:
            raise UriError(f"not an entity kind: {self.kind}")
        if self.id < 0:
            raise UriError(f"entity id must be non-negative, got {self.id}")
        if self.fragment is not None and not _FRAGMENT_RE.match(self.fragment):
            raise UriError(f"bad fragment: {self.fragment!r}")

    def render(self) -> str:
        base = f"{AUTHORITY}/{self.kind.value}/{self.id}"
        return f"{base}#{self.fragment}" if self.fragment is not None else base

    def without_fragment(self) -> "EntityUri":
        return EntityUri(self.kind, self.id) if self.fragment else self

    def with_fragment(self, fragment: str) -> "EntityUri":
        return EntityUri(self.kind, self.id, fragment)

    def __str__(self) -> str:
        return self.render()


def parse_entity_uri(text: str) -> EntityUri:
    """Parse a syriaca.org entity URI, raising UriError on anything else."""
    m = _URI_RE.match(text)
    if not m:
        raise UriError(f"not a syriaca.org entity URI: {text!r}")
    kind_text = m.group("kind")
    try:
        kind = UriKind(kind_text)
    except ValueError:
        raise UriError(f"unknown entity kind {kind_text!r} in {text!r}") from None
    if kind is UriKind.FOREIGN:
        raise UriError(f"unknown entity kind {kind_text!r} in {text!r}")
    frag = m.group("frag")
    if frag is not None and not _FRAGMENT_RE.match(frag):
        raise UriError(f"bad fragment in {text!r}")
    return EntityUri(kind, int(m.group("id")), frag)


def uri_kind(text: str) -> UriKind:
    """Classify a URI string by its path segment under the syriaca.org authority.

    URIs under other authorities, and syriaca.org paths that do not follow the
    ``/{kind}/{digits}`` pattern, classify as FOREIGN. A string that is not a
    URI at all (no scheme or no host) raises UriError.
    """
    parts = urlsplit(text)
    if not parts.scheme or not parts.netloc:
        raise UriError(f"malformed URI: {text!r}")
    if parts.netloc != "syriaca.org":
        return UriKind.FOREIGN
    try:
        return parse_entity_uri(text).kind
    except UriError:
        return UriKind.FOREIGN


@dataclass(frozen=True)
class LocalPointer:
    """A ``#xyz`` pointer to an element inside the same document."""

    target_id: str

    def __post_init__(self) -> None:
        if not self.target_id or re.search(r"\s", self.target_id) or "#" in self.target_id:
            raise UriError(f"bad local pointer target: {self.target_id!r}")

    def render(self) -> str:
        return f"#{self.target_id}"

    def __str__(self) -> str:
        return self.render()


def parse_pointer(text: str) -> LocalPointer:
    """Parse a local pointer of the form ``#id`` (the leading ``#`` is required)."""
    if not text.startswith("#"):
        raise UriError(f"local pointer must start with '#': {text!r}")
    return LocalPointer(text[1:])


# A reference as it appears in relation subjects/objects and similar slots:
# either document-local or an absolute entity URI.
Reference = LocalPointer | EntityUri


def parse_reference(text: str) -> Reference:
    if text.startswith("#"):
        return parse_pointer(text)
    return parse_entity_uri(text)


def resolve_pointer(base: EntityUri, ptr: LocalPointer) -> str:
    """Ground a document-local pointer as an absolute IRI on the record's URI.

    The base must be a work URI without a fragment; the result is
    ``{base}#{target}``.
    """
    if base.kind is not UriKind.WORK:
        raise UriError(f"pointer base must be a work URI, got {base}")
    if base.fragment is not None:
        raise UriError(f"pointer base must not carry a fragment: {base}")
    return f"{base.render()}#{ptr.target_id}"
