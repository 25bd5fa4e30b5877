import random

import pytest
from fastapi.testclient import TestClient

from genrecords import make_stub_corpus
from scriptorium.linkage import LinkItem, generate_candidates
from scriptorium.service import create_app
from rdfcheck import parse_ntriples, parse_turtle, normalize_lib_triples
from scriptorium.rdf import record_to_triples


@pytest.fixture()
def seeded(registry_root, fixture_270, fixture_narsai):
    registry_root.put_record(fixture_270)
    registry_root.put_record(fixture_narsai)
    rng = random.Random(8)
    stubs, _ = make_stub_corpus(rng, n_seeds=6, n_stubs=18)
    items = [LinkItem.from_stub(s) for s in stubs]
    registry_root.write_stubs(stubs)
    registry_root.write_candidates(generate_candidates(items))
    return registry_root


@pytest.fixture()
def client(seeded):
    return TestClient(create_app(seeded))


class TestWorkEndpoint:
    def test_json(self, client):
        r = client.get("/api/work/270")
        assert r.status_code == 200
        body = r.json()
        assert body["uri"] == "http://syriaca.org/work/270"
        assert {"scheme": "BHS", "value": "49"} in body["idnos"]

    def test_unknown_is_404(self, client):
        r = client.get("/api/work/424242")
        assert r.status_code == 404
        assert r.json()["code"] == "NOT_FOUND"

    def test_tei_format(self, client, fixture_270_text):
        r = client.get("/api/work/270", params={"format": "tei"})
        assert r.status_code == 200
        assert "tei+xml" in r.headers["content-type"]
        from scriptorium.tei import parse_work_record

        assert parse_work_record(r.text) == parse_work_record(fixture_270_text)

    def test_nt_format(self, client, fixture_270):
        r = client.get("/api/work/270", params={"format": "nt"})
        assert r.status_code == 200
        assert parse_ntriples(r.text) == normalize_lib_triples(record_to_triples(fixture_270))
        # type + 2 titles + 1 headword + 2 concordance idnos + 10 relation triples
        assert len(r.text.strip().splitlines()) == 16

    def test_ttl_format(self, client, fixture_270):
        r = client.get("/api/work/270", params={"format": "ttl"})
        assert r.status_code == 200
        assert parse_turtle(r.text) == normalize_lib_triples(record_to_triples(fixture_270))

    def test_bad_format(self, client):
        assert client.get("/api/work/270", params={"format": "pdf"}).status_code == 400


class TestSearchAndIdno:
    def test_search(self, client):
        r = client.get("/api/search", params={"title": "Angel Mary"})
        body = r.json()
        assert body["total"] >= 1
        assert body["items"][0]["uri"] == "http://syriaca.org/work/0"

    def test_search_paging(self, client):
        r = client.get("/api/search", params={"title": "Angel Mary", "limit": 0})
        assert r.json()["items"] == []

    def test_idno_redirect(self, client):
        r = client.get("/api/idno/BHS/49", follow_redirects=False)
        assert r.status_code == 303
        assert r.headers["location"] == "/api/work/270"
        followed = client.get("/api/idno/BHS/49")
        assert followed.json()["uri"] == "http://syriaca.org/work/270"

    def test_idno_unknown(self, client):
        assert client.get("/api/idno/BHS/9999").status_code == 404


class TestMint:
    def test_mint_work(self, client):
        r = client.post("/api/mint", json={"kind": "work"})
        assert r.status_code == 200
        assert r.json()["uri"].startswith("http://syriaca.org/work/")

    def test_mint_bad_kind(self, client):
        assert client.post("/api/mint", json={"kind": "widget"}).status_code == 400

    def test_mint_monotone(self, client):
        ids = [int(client.post("/api/mint", json={"kind": "work"}).json()["uri"].rsplit("/", 1)[1])
               for _ in range(5)]
        assert ids == sorted(ids) and len(set(ids)) == 5


class TestReview:
    def test_queue_band_filter(self, client):
        r = client.get("/api/review/queue", params={"band": "review"})
        body = r.json()
        assert all(item["band"] == "review" for item in body["items"])
        # ordered by descending score
        scores = [item["score"] for item in body["items"]]
        assert scores == sorted(scores, reverse=True)

    def test_queue_context(self, client):
        body = client.get("/api/review/queue").json()
        assert body["total"] > 0
        item = body["items"][0]
        assert item["left_context"]["kind"] == "stub"
        assert item["left_context"]["titles"]
        assert "provenance" in item["left_context"]

    def test_decision_flow(self, client):
        queue = client.get("/api/review/queue", params={"band": "review"}).json()["items"]
        target = queue[0]
        r = client.post("/api/review/decision", json={
            "candidate_id": target["candidate_id"], "verdict": "accept", "editor": "ed1",
            "timestamp": "2024-05-01T10:00:00Z",
        })
        assert r.status_code == 200 and r.json()["status"] == "recorded"
        # visible on re-fetch
        requeued = client.get("/api/review/queue", params={"band": "review"}).json()["items"]
        decided = [i for i in requeued if i["candidate_id"] == target["candidate_id"]][0]
        assert decided["decision"]["verdict"] == "accept"
        # idempotent repeat
        again = client.post("/api/review/decision", json={
            "candidate_id": target["candidate_id"], "verdict": "accept", "editor": "ed1",
        })
        assert again.status_code == 200 and again.json()["status"] == "unchanged"
        # conflicting verdict from same editor is 409
        conflict = client.post("/api/review/decision", json={
            "candidate_id": target["candidate_id"], "verdict": "reject", "editor": "ed1",
        })
        assert conflict.status_code == 409
        assert conflict.json()["code"] == "DECISION_CONFLICT"

    def test_decision_unknown_candidate(self, client):
        r = client.post("/api/review/decision", json={
            "candidate_id": "nope", "verdict": "accept", "editor": "ed1"})
        assert r.status_code == 404

    def test_decision_bad_verdict(self, client):
        queue = client.get("/api/review/queue").json()["items"]
        r = client.post("/api/review/decision", json={
            "candidate_id": queue[0]["candidate_id"], "verdict": "maybe", "editor": "ed1"})
        assert r.status_code == 400

    def test_accept_merges_clusters(self, client):
        queue = client.get("/api/review/queue", params={"band": "review"}).json()["items"]
        target = queue[0]
        client.post("/api/review/decision", json={
            "candidate_id": target["candidate_id"], "verdict": "accept", "editor": "ed2"})
        clusters = client.get("/api/review/clusters").json()["items"]
        merged = [c for c in clusters if target["left"] in c["members"]]
        assert merged and target["right"] in merged[0]["members"]

    def test_reject_excludes_auto_pair(self, tmp_path):
        # isolated pair: the veto must leave two singletons
        from scriptorium.linkage import WorkStub
        from scriptorium.registry import Registry

        registry = Registry(tmp_path / "iso", create=True)
        stubs = [
            WorkStub("x1", (("en", "Unmistakable identical title"),)),
            WorkStub("x2", (("en", "Unmistakable identical title"),)),
        ]
        registry.write_stubs(stubs)
        registry.write_candidates(generate_candidates([LinkItem.from_stub(s) for s in stubs]))
        iso = TestClient(create_app(registry))
        autos = iso.get("/api/review/queue", params={"band": "auto"}).json()["items"]
        assert len(autos) == 1
        target = autos[0]
        # before the veto the auto pair merges on its own
        before = iso.get("/api/review/clusters").json()["items"]
        assert [c["members"] for c in before] == [["x1", "x2"]]
        iso.post("/api/review/decision", json={
            "candidate_id": target["candidate_id"], "verdict": "reject", "editor": "ed3"})
        after = iso.get("/api/review/clusters").json()["items"]
        assert [c["members"] for c in after] == [["x1"], ["x2"]]


class TestTaxonomyEndpoints:
    def test_index(self, client):
        body = client.get("/api/taxonomy").json()
        assert body["total"] == 48
        assert body["items"][0]["code"] == "1"

    def test_paging(self, client):
        body = client.get("/api/taxonomy", params={"limit": 5, "offset": 5}).json()
        assert len(body["items"]) == 5

    def test_node(self, client):
        body = client.get("/api/taxonomy/5.a").json()
        assert body["label"] == "Martyr Acts" and body["parent"] == "5"

    def test_unknown_node(self, client):
        assert client.get("/api/taxonomy/99").status_code == 404
