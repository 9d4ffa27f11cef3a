import io
import json
import threading

import numpy as np
import pytest
from fastapi.testclient import TestClient
from PIL import Image

from conftest import circle_stroke, compose_page
from swogr.engine import RecognizerConfig, recognize_page
from swogr.imageio import load_gray
from swogr.service import create_app
from swogr.swml import (document_from_json, document_to_json, swml_parse,
                        swml_serialize)


@pytest.fixture()
def client(tmp_path):
    app = create_app(store_dir=tmp_path / "store", max_dim=1024)
    with TestClient(app) as c:
        c.store_dir = tmp_path / "store"
        yield c


def stroke_body(radius=60):
    return {"canvas": {"w": 512, "h": 512},
            "strokes": [[list(p) for p in circle_stroke(250, 250, radius)]]}


def png_bytes(gray_image):
    buf = io.BytesIO()
    Image.fromarray(gray_image.pixels, mode="L").save(buf, format="PNG")
    return buf.getvalue()


def sample_doc_json():
    return {
        "source": {"image": "page.png", "width": 400, "height": 300},
        "signboxes": [{
            "id": 1, "x": 20, "y": 30, "w": 100, "h": 120,
            "glyphs": [{"code": "04-01-001-01-01-01", "x": 5, "y": 5,
                        "w": 60, "h": 60, "confidence": 0.9}],
        }],
        "unrecognized": [{"x": 300, "y": 200, "w": 10, "h": 12}],
    }


# -- /recognize ----------------------------------------------------------------

def test_recognize_strokes_circle(client):
    resp = client.post("/recognize", json=stroke_body())
    assert resp.status_code == 200
    payload = resp.json()
    assert payload["glyphs"] == 1
    glyph = payload["swml"]["signboxes"][0]["glyphs"][0]
    assert glyph["code"].startswith("04-")
    assert payload["ms"] >= 0


def test_recognize_empty_strokes_is_422(client):
    resp = client.post("/recognize",
                       json={"canvas": {"w": 100, "h": 100}, "strokes": []})
    assert resp.status_code == 422


def test_recognize_malformed_body_is_400(client):
    resp = client.post("/recognize", content=b"{broken",
                       headers={"content-type": "application/json"})
    assert resp.status_code == 400
    resp = client.post("/recognize", json={"strokes": []})
    assert resp.status_code == 400


def test_recognize_unsupported_content_type_is_400(client):
    resp = client.post("/recognize", content=b"x",
                       headers={"content-type": "text/plain"})
    assert resp.status_code == 400


def test_recognize_deterministic(client):
    a = client.post("/recognize", json=stroke_body()).json()
    b = client.post("/recognize", json=stroke_body()).json()
    assert a["swml"] == b["swml"]
    assert (a["glyphs"], a["unrecognized"]) == (b["glyphs"], b["unrecognized"])


def test_recognize_image_upload_matches_library(client, catalog, tmp_path):
    items = [(m, 1.0, 1, m.code) for m in catalog
             if m.template.orientation_steps == 1][:4]
    page, _ = compose_page(items, cols=2, cell=160)
    resp = client.post("/recognize?name=fixture.png", content=png_bytes(page),
                       headers={"content-type": "image/png"})
    assert resp.status_code == 200
    served = document_from_json(resp.json()["swml"])
    direct = recognize_page(page, catalog, RecognizerConfig()).to_document("fixture.png")
    assert served == direct


def test_recognize_pgm_upload(client, catalog):
    from swogr.raster import GrayImage
    page, _ = compose_page(
        [(next(m for m in catalog if m.name == "head"), 1.0, 1, None)],
        cols=1, cell=150)
    buf = io.BytesIO()
    Image.fromarray(page.pixels, mode="L").save(buf, format="PPM")
    resp = client.post("/recognize", content=buf.getvalue(),
                       headers={"content-type": "image/x-portable-graymap"})
    assert resp.status_code == 200
    assert resp.json()["glyphs"] == 1


def test_recognize_oversized_image_is_413(client):
    big = np.full((1200, 600), 255, dtype=np.uint8)
    buf = io.BytesIO()
    Image.fromarray(big, mode="L").save(buf, format="PNG")
    resp = client.post("/recognize", content=buf.getvalue(),
                       headers={"content-type": "image/png"})
    assert resp.status_code == 413


def test_recognize_broken_image_is_400(client):
    resp = client.post("/recognize", content=b"PNGish garbage",
                       headers={"content-type": "image/png"})
    assert resp.status_code == 400


# -- /catalog ------------------------------------------------------------------

def test_catalog_category_filter(client):
    resp = client.get("/catalog", params={"category": 4})
    assert resp.status_code == 200
    entries = resp.json()
    assert [e["name"] for e in entries] == ["head"]
    assert entries[0]["category_name"] == "head/faces"


def test_catalog_name_search(client):
    resp = client.get("/catalog", params={"q": "index"})
    assert [e["name"] for e in resp.json()] == ["index"]


def test_catalog_ordered_by_code(client):
    codes = [e["code"] for e in client.get("/catalog").json()]
    assert codes == sorted(codes)


def test_catalog_invalid_category_is_400(client):
    assert client.get("/catalog", params={"category": 0}).status_code == 400
    assert client.get("/catalog", params={"category": "x"}).status_code == 400


# -- documents -----------------------------------------------------------------

def test_document_create_and_fetch(client):
    created = client.post("/documents", json=sample_doc_json())
    assert created.status_code == 200
    doc_id = created.json()["doc_id"]
    assert created.json()["status"] == "draft"
    fetched = client.get(f"/documents/{doc_id}")
    assert fetched.status_code == 200
    assert fetched.json()["swml"] == document_to_json(
        document_from_json(sample_doc_json()))


def test_document_put_replaces_draft(client):
    doc_id = client.post("/documents", json=sample_doc_json()).json()["doc_id"]
    changed = sample_doc_json()
    changed["unrecognized"] = []
    resp = client.put(f"/documents/{doc_id}", json=changed)
    assert resp.status_code == 200
    assert client.get(f"/documents/{doc_id}").json()["swml"]["unrecognized"] == []


def test_document_unknown_id_is_404(client):
    assert client.get("/documents/NOPE").status_code == 404
    assert client.put("/documents/NOPE", json=sample_doc_json()).status_code == 404
    assert client.post("/documents/NOPE/finalize").status_code == 404


def test_document_schema_violation_is_422(client):
    bad = sample_doc_json()
    bad["signboxes"][0]["x"] = 390  # escapes the 400px page
    assert client.post("/documents", json=bad).status_code == 422


def test_finalize_freezes_document(client):
    doc_id = client.post("/documents", json=sample_doc_json()).json()["doc_id"]
    final = client.post(f"/documents/{doc_id}/finalize")
    assert final.status_code == 200
    assert final.json()["status"] == "finalized"
    assert client.put(f"/documents/{doc_id}", json=sample_doc_json()).status_code == 409
    assert client.post(f"/documents/{doc_id}/finalize").status_code == 409


def test_finalize_persists_canonical_bytes(client):
    doc_id = client.post("/documents", json=sample_doc_json()).json()["doc_id"]
    client.post(f"/documents/{doc_id}/finalize")
    stored = (client.store_dir / f"{doc_id}.swml").read_bytes()
    expected = swml_serialize(document_from_json(sample_doc_json()))
    assert stored == expected
    assert swml_parse(stored) == document_from_json(sample_doc_json())


def test_store_contains_exactly_finalized_documents(client):
    ids = [client.post("/documents", json=sample_doc_json()).json()["doc_id"]
           for _ in range(3)]
    client.post(f"/documents/{ids[0]}/finalize")
    client.post(f"/documents/{ids[2]}/finalize")
    stored = sorted(p.stem for p in client.store_dir.glob("*.swml"))
    assert stored == sorted([ids[0], ids[2]])
    index = json.loads((client.store_dir / "index.json").read_text())
    assert sorted(index) == stored


def test_concurrent_puts_last_writer_wins(client):
    doc_id = client.post("/documents", json=sample_doc_json()).json()["doc_id"]
    variants = []
    for i in range(8):
        body = sample_doc_json()
        body["source"]["image"] = f"writer-{i}.png"
        variants.append(body)

    def put(body):
        assert client.put(f"/documents/{doc_id}", json=body).status_code == 200

    threads = [threading.Thread(target=put, args=(v,)) for v in variants]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    final = client.get(f"/documents/{doc_id}").json()["swml"]
    assert final["source"]["image"] in {f"writer-{i}.png" for i in range(8)}
    client.post(f"/documents/{doc_id}/finalize")
    stored = (client.store_dir / f"{doc_id}.swml").read_bytes()
    assert swml_parse(stored) == document_from_json(final)
