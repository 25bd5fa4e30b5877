import itertools
import random
from concurrent.futures import ThreadPoolExecutor

import pytest

from genrecords import make_record, make_relation_corpus
from scriptorium.registry import (
    DERIVED_SIDE_PREDICATES,
    INVERSE_PREDICATES,
    Registry,
    RegistryError,
    lint_directionality,
)
from scriptorium.uris import EntityUri, UriKind


class TestMint:
    def test_fresh_registry_starts_at_one(self, registry_root):
        assert registry_root.mint_uri("work") == EntityUri(UriKind.WORK, 1)

    def test_mint_after_existing_record(self, registry_root, fixture_270):
        registry_root.put_record(fixture_270)
        minted = registry_root.mint_uri(UriKind.WORK)
        assert minted.id >= 271

    def test_sequential_mints_increase(self, registry_root):
        a = registry_root.mint_uri("work")
        b = registry_root.mint_uri("work")
        assert b.id > a.id

    def test_kinds_allocate_independently(self, registry_root):
        assert registry_root.mint_uri("manuscript").id == 1
        assert registry_root.mint_uri("work").id == 1

    def test_ids_never_reused_after_reopen(self, registry_root, tmp_path):
        registry_root.mint_uri("work")
        registry_root.mint_uri("work")
        reopened = Registry(registry_root.root)
        assert reopened.mint_uri("work").id == 3

    def test_read_only_refuses(self, registry_root, tmp_path):
        ro = Registry(registry_root.root, read_only=True)
        with pytest.raises(RegistryError) as exc:
            ro.mint_uri("work")
        assert exc.value.code == "READ_ONLY"

    def test_interleaved_mints_unique_and_increasing(self, registry_root):
        with ThreadPoolExecutor(max_workers=8) as pool:
            uris = list(pool.map(lambda _: registry_root.mint_uri("work"), range(100)))
        ids = [u.id for u in uris]
        assert len(set(ids)) == 100
        assert sorted(ids) == list(range(min(ids), min(ids) + 100))


class TestPutGet:
    def test_put_then_get_is_identity(self, registry_root, fixture_270):
        registry_root.put_record(fixture_270)
        assert registry_root.get_record(fixture_270.uri) == fixture_270

    def test_get_unknown_is_not_found(self, registry_root):
        with pytest.raises(RegistryError) as exc:
            registry_root.get_record(EntityUri(UriKind.WORK, 999999))
        assert exc.value.code == "NOT_FOUND"

    def test_concordance_lookup(self, registry_root, fixture_270):
        registry_root.put_record(fixture_270)
        assert registry_root.get_by_idno("BHS", "49") == fixture_270.uri

    def test_put_invalid_rejected(self, registry_root, fixture_270):
        from dataclasses import replace

        bad = replace(fixture_270, idnos=())
        with pytest.raises(RegistryError) as exc:
            registry_root.put_record(bad)
        assert exc.value.code == "INVALID" and exc.value.report is not None
        with pytest.raises(RegistryError):
            registry_root.get_record(bad.uri)

    def test_file_layout(self, registry_root, fixture_270):
        registry_root.put_record(fixture_270)
        assert (registry_root.works_dir / "270.xml").exists()

    def test_reopen_round_trips(self, registry_root, fixture_270, fixture_narsai):
        registry_root.put_record(fixture_270)
        registry_root.put_record(fixture_narsai)
        reopened = Registry(registry_root.root)
        assert reopened.get_record(fixture_270.uri) == fixture_270
        assert reopened.get_record(fixture_narsai.uri) == fixture_narsai

    def test_index_rebuild_matches_live(self, registry_root):
        rng = random.Random(5)
        for work_id in (3, 11, 42, 270):
            registry_root.put_record(make_record(rng, work_id))
        registry_root.mint_uri("work")
        registry_root.mint_uri("manuscript")
        live = registry_root.index_snapshot()
        rebuilt = Registry(registry_root.root).index_snapshot()
        assert rebuilt == live


class TestSearch:
    def _fill(self, registry, fixture_270, fixture_narsai):
        registry.put_record(fixture_270)
        registry.put_record(fixture_narsai)

    def test_angel_mary_finds_narsai_first(self, registry_root, fixture_270, fixture_narsai):
        self._fill(registry_root, fixture_270, fixture_narsai)
        hits = registry_root.search_titles("Angel Mary")
        assert hits, "no hits"
        assert hits[0][0] == fixture_narsai.uri
        assert hits[0][1] == "Sogitha on the Angel & Mary"

    def test_short_tokens_give_empty(self, registry_root, fixture_270, fixture_narsai):
        self._fill(registry_root, fixture_270, fixture_narsai)
        assert registry_root.search_titles("a b") == []

    def test_lang_filter(self, registry_root, fixture_270, fixture_narsai):
        self._fill(registry_root, fixture_270, fixture_narsai)
        en_hits = registry_root.search_titles("Martyrs", lang="en")
        assert [h[0] for h in en_hits] == [fixture_270.uri]
        assert registry_root.search_titles("Martyrs", lang="de") == []

    def test_equal_scores_tie_break_by_id(self, registry_root):
        rng = random.Random(1)
        base = make_record(rng, 10)
        from dataclasses import replace

        from scriptorium.model import IdnoEntry, TitleEntry

        for work_id in (20, 15):
            uri = EntityUri(UriKind.WORK, work_id)
            record = replace(
                base,
                uri=uri,
                titles=(TitleEntry("t1", "en", "Identical search title"),),
                idnos=(IdnoEntry("URI", uri.render()),),
                witnesses=base.witnesses,
            )
            registry_root.put_record(record)
        hits = registry_root.search_titles("identical search title")
        assert [h[0].id for h in hits] == [15, 20]
        assert hits[0][2] == hits[1][2]


def brute_force_lint(records):
    """All-pairs oracle: examine every unordered record pair independently."""
    by_uri = {r.uri: r for r in records}
    violations = set()

    def work_work(record):
        for rel in record.relations:
            for s in rel.subjects:
                for o in rel.objects:
                    if (isinstance(s, EntityUri) and isinstance(o, EntityUri)
                            and s.kind is UriKind.WORK and o.kind is UriKind.WORK
                            and not s.fragment and not o.fragment and s != o):
                        yield s, rel.predicate, o

    for a, b in itertools.combinations(sorted(by_uri), 2):
        for (s1, p1, o1) in work_work(by_uri[a]):
            if {s1, o1} != {a, b}:
                continue
            for (s2, p2, o2) in work_work(by_uri[b]):
                if {s2, o2} != {a, b}:
                    continue
                if p1 == p2 or INVERSE_PREDICATES.get(p1) == p2:
                    pred_class = min(p1, INVERSE_PREDICATES.get(p1, p1))
                    low, high = sorted((a.render(), b.render()))
                    violations.add(("DUP_RELATION", pred_class, (low, high)))
    for record in records:
        for s, p, o in work_work(record):
            if p in DERIVED_SIDE_PREDICATES and record.uri != o:
                violations.add(("DERIVED_SIDE", p, (s.render(), o.render())))
    return violations


class TestDirectionalityLint:
    def test_double_sided_flagged(self):
        from scriptorium.model import IdnoEntry, RelationTriple, TitleEntry, WorkRecord

        ua, ub = EntityUri(UriKind.WORK, 1), EntityUri(UriKind.WORK, 2)

        def rec(uri, rels):
            return WorkRecord(uri=uri, titles=(TitleEntry("t1", "en", "T"),),
                              idnos=(IdnoEntry("URI", uri.render()),), relations=tuple(rels))

        a = rec(ua, [RelationTriple(subjects=(ua,), predicate="syriaca:hasVersion", objects=(ub,))])
        b = rec(ub, [RelationTriple(subjects=(ub,), predicate="syriaca:hasVersion", objects=(ua,))])
        violations = lint_directionality([a, b])
        dup = [v for v in violations if v.code == "DUP_RELATION"]
        assert len(dup) == 1
        assert set(dup[0].uris) == {ua.render(), ub.render()}

    def test_single_sided_clean(self):
        from scriptorium.model import IdnoEntry, RelationTriple, TitleEntry, WorkRecord

        ua, ub = EntityUri(UriKind.WORK, 1), EntityUri(UriKind.WORK, 2)
        b = WorkRecord(uri=ub, titles=(TitleEntry("t1", "en", "T"),),
                       idnos=(IdnoEntry("URI", ub.render()),),
                       relations=(RelationTriple(subjects=(ua,), predicate="syriaca:hasVersion",
                                                 objects=(ub,)),))
        a = WorkRecord(uri=ua, titles=(TitleEntry("t1", "en", "T"),),
                       idnos=(IdnoEntry("URI", ua.render()),))
        assert lint_directionality([a, b]) == []

    def test_inverse_predicate_also_flagged(self):
        from scriptorium.model import IdnoEntry, RelationTriple, TitleEntry, WorkRecord

        ua, ub = EntityUri(UriKind.WORK, 1), EntityUri(UriKind.WORK, 2)

        def rec(uri, rels):
            return WorkRecord(uri=uri, titles=(TitleEntry("t1", "en", "T"),),
                              idnos=(IdnoEntry("URI", uri.render()),), relations=tuple(rels))

        a = rec(ua, [RelationTriple(subjects=(ua,), predicate="syriaca:hasVersion", objects=(ub,))])
        b = rec(ub, [RelationTriple(subjects=(ua,), predicate="syriaca:versionOf", objects=(ub,))])
        violations = [v for v in lint_directionality([a, b]) if v.code == "DUP_RELATION"]
        assert len(violations) == 1

    def test_matches_brute_force_on_random_corpora(self):
        rng = random.Random(19)
        for trial in range(40):
            records = make_relation_corpus(rng, rng.randint(2, 12))
            got = {(v.code, v.predicate, v.uris) for v in lint_directionality(records)}
            assert got == brute_force_lint(records), trial
