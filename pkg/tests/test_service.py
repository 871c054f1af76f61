import json
from pathlib import Path

import numpy as np
import pytest
from fastapi.testclient import TestClient

from conftest import random_unit_rows
from zcbm.bank import bank_from_arrays
from zcbm.pipeline import ClassSet, SolverConfig
from zcbm.service.app import create_app, export_openapi

DOCS_OPENAPI = Path(__file__).resolve().parents[1] / "docs" / "openapi.json"


def _world():
    rng = np.random.default_rng(0)
    ortho = np.eye(8)
    rows = np.vstack([ortho, random_unit_rows(rng, 8, 8)]).astype(np.float32)
    bank = bank_from_arrays([f"concept {i}" for i in range(16)], rows)
    classes = ClassSet.from_arrays(["zero", "one", "two"],
                                   ortho[:3].astype(np.float32))
    return bank, classes


@pytest.fixture
def client():
    bank, classes = _world()
    app = create_app(bank, classes,
                     default_solver=SolverConfig(name="lasso", l1=1e-4))
    with TestClient(app) as c:
        yield c


def _embedding():
    x = 0.6 * np.eye(8)[0] + 0.8 * np.eye(8)[1]
    return x.tolist()


class TestInferEndpoint:
    def test_happy_path(self, client):
        r = client.post("/v1/infer", json={"embedding": _embedding(), "k": 8})
        assert r.status_code == 200
        body = r.json()
        assert body["label_id"] in (0, 1)
        assert body["concepts"]
        mags = [abs(c["weight"]) for c in body["concepts"]]
        assert mags == sorted(mags, reverse=True)
        assert body["fallback"] is False

    def test_dimension_mismatch(self, client):
        r = client.post("/v1/infer", json={"embedding": [1.0, 2.0]})
        assert r.status_code == 400
        assert r.json()["code"] == "dimension_mismatch"

    def test_non_finite_rejected(self, client):
        body = json.dumps({"embedding": [1.0] * 7 + [float("nan")]})
        r = client.post("/v1/infer", content=body,
                        headers={"content-type": "application/json"})
        assert r.status_code == 422

    def test_k_above_bank_size_truncates(self, client):
        r = client.post("/v1/infer", json={"embedding": _embedding(), "k": 999})
        assert r.status_code == 200

    def test_byte_identical_responses(self, client):
        payload = {"embedding": _embedding(), "k": 8}
        a = client.post("/v1/infer", json=payload)
        b = client.post("/v1/infer", json=payload)
        assert a.content == b.content

    def test_solver_override(self, client):
        r = client.post("/v1/infer", json={
            "embedding": _embedding(), "k": 8, "solver": "htp", "s": 2,
        })
        assert r.status_code == 200
        assert len(r.json()["concepts"]) <= 2

    def test_lambda_alias(self, client):
        # a dead-zone-sized penalty forces the all-zero fallback path
        r = client.post("/v1/infer", json={
            "embedding": _embedding(), "k": 8, "lambda": 100.0,
        })
        assert r.status_code == 200
        assert r.json()["fallback"] is True


class TestSessionEndpoints:
    def test_create_and_get(self, client):
        r = client.post("/v1/sessions", json={"embedding": _embedding(), "k": 8})
        assert r.status_code == 200
        sid = r.json()["session_id"]
        g = client.get(f"/v1/sessions/{sid}")
        assert g.status_code == 200
        assert g.json()["session_id"] == sid

    def test_unknown_session_404(self, client):
        r = client.get("/v1/sessions/doesnotexist")
        assert r.status_code == 404
        assert r.json()["code"] == "not_found"

    def test_create_recompute_identity(self, client):
        r = client.post("/v1/sessions", json={"embedding": _embedding(), "k": 8})
        sid = r.json()["session_id"]
        base = r.json()["prediction"]
        rec = client.post(f"/v1/sessions/{sid}/recompute")
        assert rec.status_code == 200
        assert rec.json()["prediction"]["label_id"] == base["label_id"]
        assert rec.json()["prediction"]["concepts"] == base["concepts"]

    def test_delete_all_flags_fallback(self, client):
        r = client.post("/v1/sessions", json={"embedding": _embedding(), "k": 8})
        sid = r.json()["session_id"]
        for i in range(len(r.json()["concepts"])):
            e = client.post(f"/v1/sessions/{sid}/edits",
                            json={"op": "delete", "index": i})
            assert e.status_code == 200
        rec = client.post(f"/v1/sessions/{sid}/recompute")
        assert rec.json()["prediction"]["fallback"] is True

    def test_insert_then_recompute_lowers_residual(self, client):
        # k=1 retrieves only the 0.8 component; inserting the missing
        # concept and re-fitting recovers both weights exactly
        x = (0.6 * np.eye(8)[5] + 0.8 * np.eye(8)[6]).tolist()
        r = client.post("/v1/sessions", json={"embedding": x, "k": 1})
        sid = r.json()["session_id"]
        base_top = r.json()["prediction"]["concepts"][0]
        assert base_top["text"] == "concept 6"
        e = client.post(f"/v1/sessions/{sid}/edits",
                        json={"op": "insert", "concept": "concept 5"})
        assert e.status_code == 200
        rec = client.post(f"/v1/sessions/{sid}/recompute")
        assert rec.status_code == 200
        concepts = rec.json()["prediction"]["concepts"]
        weights = {c["text"]: c["weight"] for c in concepts}
        assert weights["concept 6"] == pytest.approx(0.8, abs=1e-6)
        assert weights["concept 5"] == pytest.approx(0.6, abs=1e-6)

    def test_edit_log_length_matches_accepted_edits(self, client):
        r = client.post("/v1/sessions", json={"embedding": _embedding(), "k": 8})
        sid = r.json()["session_id"]
        client.post(f"/v1/sessions/{sid}/edits", json={"op": "delete", "index": 0})
        client.post(f"/v1/sessions/{sid}/edits", json={"op": "restore", "index": 0})
        bad = client.post(f"/v1/sessions/{sid}/edits",
                          json={"op": "delete", "index": 999})
        assert bad.status_code == 400
        g = client.get(f"/v1/sessions/{sid}")
        ops = [h["op"] for h in g.json()["history"]]
        assert ops == ["create", "delete", "restore"]

    def test_restart_invalidates_sessions(self):
        bank, classes = _world()
        app1 = create_app(bank, classes)
        with TestClient(app1) as c1:
            sid = c1.post("/v1/sessions",
                          json={"embedding": _embedding(), "k": 4}).json()["session_id"]
        app2 = create_app(bank, classes)
        with TestClient(app2) as c2:
            assert c2.get(f"/v1/sessions/{sid}").status_code == 404


class TestBankSearch:
    def test_vocab_query_without_provider(self, client):
        r = client.get("/v1/bank/search", params={"q": "concept 3", "n": 4})
        assert r.status_code == 200
        results = r.json()["results"]
        assert results[0]["text"] == "concept 3"
        assert results[0]["score"] == pytest.approx(1.0, abs=1e-5)
        assert len(results) == 4

    def test_unknown_text_without_provider_is_provider_error(self, client):
        r = client.get("/v1/bank/search", params={"q": "unheard of"})
        assert r.status_code == 502
        assert r.json()["code"] == "provider_error"

    def test_validation(self, client):
        assert client.get("/v1/bank/search", params={"q": "concept 1", "n": 0}).status_code == 400


class TestHealthz:
    def test_shape(self, client):
        r = client.get("/v1/healthz")
        assert r.status_code == 200
        assert r.json() == {"status": "ok", "bank_count": 16, "dim": 8}


class TestOpenApi:
    def test_golden_document(self):
        bank, classes = _world()
        app = create_app(bank, classes)
        generated = export_openapi(app)
        assert DOCS_OPENAPI.exists(), "docs/openapi.json missing"
        assert generated == DOCS_OPENAPI.read_text()


class TestFloatSerialization:
    def test_nine_significant_digits(self, client):
        r = client.post("/v1/infer", json={"embedding": _embedding(), "k": 8})
        for concept in r.json()["concepts"]:
            rendered = f"{concept['weight']:.17g}"
            # round-tripping through 9 significant digits is lossless
            assert float(f"{concept['weight']:.9g}") == concept["weight"], rendered
