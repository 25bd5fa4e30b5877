#!/usr/bin/env python3
"""Build a demo registry for the review frontend: two fixture works plus
crafted stubs giving one isolated auto-band pair, one review-band pair, and
one unmatched singleton. Usage: make_demo.py DATA_DIR"""

import sys
from pathlib import Path

from scriptorium.linkage import LinkItem, SourceMs, WorkStub, generate_candidates
from scriptorium.registry import Registry
from scriptorium.tei import parse_work_record
from scriptorium.uris import EntityUri, UriKind

FIXTURES = Path(__file__).resolve().parents[2] / "tests" / "fixtures"


def main() -> int:
    data = Path(sys.argv[1])
    registry = Registry(data, create=True)
    for name in ("270.xml", "0.xml"):
        registry.put_record(parse_work_record((FIXTURES / name).read_text("utf-8")))

    stubs = [
        # identical twins: auto band, sharing nothing with anything else
        WorkStub("demo-auto-1", (("en", "Chronicle of the riverside fortress"),),
                 source_ms=SourceMs(EntityUri(UriKind.MANUSCRIPT, 31001), "1", "9"),
                 provenance="demo catalogue A"),
        WorkStub("demo-auto-2", (("en", "Chronicle of the riverside fortress"),),
                 source_ms=SourceMs(EntityUri(UriKind.MANUSCRIPT, 31002), "14", "22"),
                 provenance="demo catalogue B"),
        # partial overlap + same author: review band
        WorkStub("demo-review-1", (("en", "Letter concerning orchards vineyards"),),
                 author_uri=EntityUri(UriKind.PERSON, 2100),
                 incipit=("syr", "ܡܠܐܟܐ ܕܐܫܬܕܪ"),
                 source_ms=SourceMs(EntityUri(UriKind.MANUSCRIPT, 31003), "2", "8"),
                 provenance="demo catalogue A"),
        WorkStub("demo-review-2", (("en", "Letter concerning orchards"),),
                 author_uri=EntityUri(UriKind.PERSON, 2100),
                 source_ms=SourceMs(EntityUri(UriKind.MANUSCRIPT, 31004), "40", "55"),
                 provenance="demo catalogue B"),
        # matches nothing
        WorkStub("demo-single", (("en", "Treatise about winter stars"),),
                 provenance="demo catalogue B"),
    ]
    registry.write_stubs(stubs)
    candidates = generate_candidates([LinkItem.from_stub(s) for s in stubs])
    registry.write_candidates(candidates)
    bands = [c.band.value for c in candidates if c.band]
    print(f"demo registry at {data}: {len(stubs)} stubs, "
          f"{len(candidates)} candidates ({', '.join(sorted(bands))})")
    return 0


if __name__ == "__main__":
    sys.exit(main())
