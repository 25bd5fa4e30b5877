"""Command-line entry point for batch use and CI.

Exit codes: 0 clean, 1 validation/lint findings, 2 usage or I/O errors.
Commands never mutate their input files and are idempotent on unchanged
inputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigError, load_settings
from .linkage import (
    LinkItem,
    LinkageError,
    MergeConflict,
    apply_decisions,
    candidate_from_dict,
    candidate_to_dict,
    decision_from_dict,
    generate_candidates,
    ingest_catalogue_entries,
    merge_cluster,
    read_jsonl,
    stub_from_dict,
    stub_to_dict,
    write_jsonl,
)
from .model import Severity, record_to_dict
from .rdf import record_to_triples, serialize_graph
from .registry import Registry, RegistryError, lint_directionality
from .taxonomy import validate_subject_codes
from .tei import InvalidRecord, TeiParseError, parse_work_record, serialize_work_record
from .uris import UriKind
from .validate import validate_record

OK, FINDINGS, USAGE = 0, 1, 2


def _collect_xml(paths: list[str]) -> list[Path]:
    out: list[Path] = []
    for raw in paths:
        p = Path(raw)
        if p.is_dir():
            out.extend(sorted(p.glob("*.xml")))
        elif p.exists():
            out.append(p)
        else:
            raise FileNotFoundError(raw)
    return out


def _load_records(files: list[Path]):
    """Parse each file; yields (path, record-or-None, error-message-or-None)."""
    for path in files:
        try:
            yield path, parse_work_record(path.read_text("utf-8")), None
        except TeiParseError as exc:
            where = f":{exc.line}:{exc.column}" if exc.line else ""
            yield path, None, f"{exc.code}{where}: {exc}"


def cmd_validate(args) -> int:
    try:
        files = _collect_xml(args.paths)
    except FileNotFoundError as exc:
        print(f"error: no such path: {exc}", file=sys.stderr)
        return USAGE
    worst = OK
    json_out = []
    for path, record, parse_error in _load_records(files):
        if parse_error is not None:
            worst = max(worst, FINDINGS)
            if args.json:
                json_out.append({"file": str(path), "parse_error": parse_error, "items": []})
            else:
                print(f"{path}: error {parse_error}")
            continue
        report = validate_record(record).merged(validate_subject_codes(record))
        has_error = bool(report.errors) or (args.strict and bool(report.warnings))
        if has_error:
            worst = max(worst, FINDINGS)
        if args.json:
            json_out.append({"file": str(path), "parse_error": None, "items": report.to_dicts()})
            continue
        if not report.items:
            print(f"{path}: OK")
        for item in report.items:
            severity = item.severity.value
            if args.strict and item.severity is Severity.WARNING:
                severity = "error(strict)"
            print(f"{path}: {severity} {item.code} at {item.path}: {item.message}")
    if args.json:
        print(json.dumps(json_out, indent=2, ensure_ascii=False))
    return worst


def cmd_convert(args) -> int:
    try:
        files = _collect_xml(args.paths)
        settings = load_settings(args.config)
    except (FileNotFoundError, ConfigError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    records = []
    for path, record, parse_error in _load_records(files):
        if parse_error is not None:
            print(f"{path}: error {parse_error}", file=sys.stderr)
            return FINDINGS
        report = validate_record(record, settings.namespaces)
        if not report.ok:
            for item in report.errors:
                print(f"{path}: error {item.code} at {item.path}: {item.message}", file=sys.stderr)
            return FINDINGS
        records.append((path, record))

    def rendered(record) -> str:
        if args.to == "json":
            return json.dumps(record_to_dict(record), indent=2, ensure_ascii=False, sort_keys=True) + "\n"
        fmt = "ntriples" if args.to == "nt" else "turtle"
        return serialize_graph(record_to_triples(record, settings.namespaces), fmt, settings.namespaces)

    if args.merge:
        if args.to == "json":
            body = json.dumps([record_to_dict(r) for _, r in records],
                              indent=2, ensure_ascii=False, sort_keys=True) + "\n"
        else:
            triples = []
            for _, record in records:
                triples.extend(record_to_triples(record, settings.namespaces))
            fmt = "ntriples" if args.to == "nt" else "turtle"
            body = serialize_graph(triples, fmt, settings.namespaces)
        Path(args.merge).write_text(body, encoding="utf-8")
        return OK
    if args.out:
        out_dir = Path(args.out)
        out_dir.mkdir(parents=True, exist_ok=True)
        for path, record in records:
            (out_dir / f"{path.stem}.{args.to}").write_text(rendered(record), encoding="utf-8")
        return OK
    for _, record in records:
        sys.stdout.write(rendered(record))
    return OK


def _open_corpus(root: str):
    """A registry root or a bare directory of work documents."""
    p = Path(root)
    if (p / "works").is_dir():
        return Registry(p).records()
    records = []
    for path in sorted(p.glob("*.xml")):
        records.append(parse_work_record(path.read_text("utf-8")))
    return records


def cmd_lint_corpus(args) -> int:
    try:
        records = _open_corpus(args.root)
    except (RegistryError, TeiParseError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    violations = lint_directionality(records)
    if args.json:
        print(json.dumps([
            {"code": v.code, "predicate": v.predicate, "uris": list(v.uris), "message": v.message}
            for v in violations
        ], indent=2))
    else:
        for v in violations:
            print(f"{v.code} {v.predicate}: {v.message}")
        if not violations:
            print("corpus clean: no directionality violations")
    return FINDINGS if violations else OK


def cmd_link(args) -> int:
    try:
        settings = load_settings(args.config)
        stubs = []
        for catalogue in args.catalogue:
            result = ingest_catalogue_entries(Path(catalogue).read_text("utf-8"))
            for warning in result.warnings:
                print(f"warning: {warning}", file=sys.stderr)
            stubs.extend(result.stubs)
        records = _open_corpus(args.corpus) if args.corpus else []
    except (OSError, ConfigError, TeiParseError, RegistryError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    items = [LinkItem.from_stub(s) for s in stubs] + [LinkItem.from_record(r) for r in records]
    candidates = generate_candidates(items, settings.weights, settings.thresholds, settings.blocking)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_jsonl(args.out, (candidate_to_dict(c) for c in candidates))
    if args.stubs_out:
        Path(args.stubs_out).parent.mkdir(parents=True, exist_ok=True)
        write_jsonl(args.stubs_out, (stub_to_dict(s) for s in stubs))
    bands = {"auto": 0, "review": 0, "reject": 0}
    for c in candidates:
        if c.band:
            bands[c.band.value] += 1
    summary = {"stubs": len(stubs), "corpus_records": len(records),
               "candidates": len(candidates), "bands": bands}
    print(json.dumps(summary) if args.json
          else f"{len(stubs)} stubs, {len(records)} corpus records -> "
               f"{len(candidates)} candidates ({bands['auto']} auto, "
               f"{bands['review']} review, {bands['reject']} reject)")
    return OK


def cmd_apply_decisions(args) -> int:
    try:
        candidates = [candidate_from_dict(d) for d in read_jsonl(args.candidates)]
        decisions = [decision_from_dict(d) for d in read_jsonl(args.decisions)] \
            if args.decisions else []
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    try:
        clusters = apply_decisions(candidates, decisions)
    except LinkageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    write_jsonl(args.out, ({"cluster_id": c.cluster_id, "members": list(c.members)}
                           for c in clusters))
    merged = [c for c in clusters if len(c.members) > 1]
    print(json.dumps({"clusters": len(clusters), "merged": len(merged)}) if args.json
          else f"{len(clusters)} clusters ({len(merged)} with more than one member)")
    return OK


def cmd_merge(args) -> int:
    try:
        clusters = read_jsonl(args.clusters)
        stubs = {d["stub_id"]: stub_from_dict(d) for d in read_jsonl(args.stubs)}
        registry = Registry(args.registry)
    except (OSError, RegistryError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    worst = OK
    merged_rows = []
    for cluster in clusters:
        members = []
        skipped = False
        for member_id in cluster["members"]:
            if member_id in stubs:
                members.append(stubs[member_id])
            else:
                print(f"note: cluster {cluster['cluster_id']} touches existing record "
                      f"{member_id}; merging into canonical records is an editorial act, skipped",
                      file=sys.stderr)
                skipped = True
        if skipped or not members:
            continue
        minted = registry.mint_uri(UriKind.WORK)
        try:
            record = merge_cluster(members, minted)
        except MergeConflict as exc:
            print(f"error: cluster {cluster['cluster_id']}: {exc}", file=sys.stderr)
            worst = max(worst, FINDINGS)
            continue
        text = serialize_work_record(record)
        (out_dir / f"{minted.id}.xml").write_text(text, encoding="utf-8")
        if args.put:
            registry.put_record(record)
        if args.json:
            merged_rows.append({"cluster_id": cluster["cluster_id"], "uri": minted.render(),
                                "members": list(cluster["members"])})
        else:
            print(f"{cluster['cluster_id']} -> {minted.render()} ({len(members)} member(s))")
    if args.json:
        print(json.dumps(merged_rows, indent=2))
    return worst


def cmd_mint(args) -> int:
    try:
        registry = Registry(args.registry)
        uri = registry.mint_uri(UriKind(args.kind))
    except (RegistryError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    print(json.dumps({"uri": uri.render()}) if args.json else uri.render())
    return OK


def cmd_serve(args) -> int:
    import uvicorn

    from .service import create_app

    try:
        settings = load_settings(args.config)
        registry = Registry(args.data)
    except (RegistryError, ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE
    app = create_app(registry, settings.namespaces)
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="info")
    except (OSError, SystemExit) as exc:
        print(f"error: cannot serve on {args.host}:{args.port}: {exc}", file=sys.stderr)
        return USAGE
    return OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="scriptorium",
                                     description="Work-record toolkit: validate, convert, link, serve.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="validate work documents")
    p.add_argument("paths", nargs="+", help="TEI files or directories")
    p.add_argument("--strict", action="store_true", help="treat warnings as errors")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("convert", help="convert work documents to nt/ttl/json")
    p.add_argument("paths", nargs="+")
    p.add_argument("--to", choices=("nt", "ttl", "json"), required=True)
    p.add_argument("-o", "--out", help="output directory (one file per input)")
    p.add_argument("--merge", help="write one concatenated output file")
    p.add_argument("--config", help="key=value settings file")
    p.set_defaults(func=cmd_convert)

    p = sub.add_parser("lint-corpus", help="flag double-sided and mis-sided relationships")
    p.add_argument("root", help="registry root or directory of work documents")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_lint_corpus)

    p = sub.add_parser("link", help="ingest catalogues and emit scored candidate pairs")
    p.add_argument("--catalogue", action="append", required=True, help="catalogue XML (repeatable)")
    p.add_argument("--corpus", help="registry root or directory of existing work documents")
    p.add_argument("--out", required=True, help="candidates JSONL output")
    p.add_argument("--stubs-out", help="also write the extracted stubs as JSONL")
    p.add_argument("--config", help="key=value settings file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_link)

    p = sub.add_parser("apply-decisions", help="fold editorial decisions into clusters")
    p.add_argument("--candidates", required=True)
    p.add_argument("--decisions")
    p.add_argument("--out", required=True, help="clusters JSONL output")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_apply_decisions)

    p = sub.add_parser("merge", help="merge stub clusters into minted work records")
    p.add_argument("--clusters", required=True)
    p.add_argument("--stubs", required=True)
    p.add_argument("--registry", required=True, help="registry root (mints the new URIs)")
    p.add_argument("--out", required=True, help="directory for merged TEI documents")
    p.add_argument("--put", action="store_true", help="also store merged records in the registry")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_merge)

    p = sub.add_parser("mint", help="allocate the next URI of a kind")
    p.add_argument("--registry", required=True)
    p.add_argument("--kind", default="work",
                   choices=("work", "manuscript", "bibl", "person", "place"))
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_mint)

    p = sub.add_parser("serve", help="serve the registry HTTP API")
    p.add_argument("--data", required=True, help="registry root")
    p.add_argument("--port", type=int, default=8004)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--config", help="key=value settings file")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidRecord as exc:
        print(f"error: {exc}", file=sys.stderr)
        return FINDINGS
    except BrokenPipeError:
        return OK


if __name__ == "__main__":
    sys.exit(main())
