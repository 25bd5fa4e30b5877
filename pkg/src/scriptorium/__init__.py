"""Authority-file toolkit for literary work records.

Parses and canonically serializes TEI work documents, crosswalks them to
RDF, ingests manuscript-catalogue entries, runs editor-in-the-loop record
linkage, and serves the resulting registry over HTTP.
"""

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
    Severity,
    TextLang,
    TitleEntry,
    ValidationReport,
    WorkRecord,
)
from .rdf import (
    DEFAULT_NAMESPACES,
    Literal,
    NamespaceTable,
    Triple,
    expand_curie,
    expand_embodied_relation,
    record_to_triples,
    relations_to_triples,
    serialize_graph,
)
from .registry import Registry, RegistryError
from .taxonomy import children, load_taxonomy, lookup_subject, validate_subject_codes
from .tei import InvalidRecord, TeiParseError, parse_work_record, serialize_work_record
from .uris import EntityUri, LocalPointer, UriKind, parse_entity_uri, resolve_pointer, uri_kind
from .validate import canonical_headword, normalize_lang, validate_record

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
