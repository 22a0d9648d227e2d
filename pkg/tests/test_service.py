import io

import numpy as np
import pytest
from fastapi.testclient import TestClient
from PIL import Image

from woodtex.schema import params_to_json, params_from_json
from woodtex.params import WoodParams
from woodtex.service import create_app


@pytest.fixture(scope="module")
def client():
    return TestClient(create_app(seed=1234))


def render_request(**overrides):
    body = {"params": {}, "scene": {"width": 32, "height": 32},
            "preview_quality": "draft"}
    body.update(overrides)
    return body


def test_schema_endpoint(client):
    resp = client.get("/schema")
    assert resp.status_code == 200
    payload = resp.json()
    assert payload["schema_version"] == 1
    assert "default" in payload["presets"]
    # shipped presets validate against the shipped schema
    for doc in payload["presets"].values():
        params_from_json(doc).validate()


def test_render_deterministic_hash(client):
    a = client.post("/render", json=render_request())
    b = client.post("/render", json=render_request())
    assert a.status_code == 200
    assert a.headers["x-content-hash"] == b.headers["x-content-hash"]
    assert a.content == b.content
    img = Image.open(io.BytesIO(a.content))
    assert img.size == (32, 32)


def test_render_draft_flagged_and_capped(client):
    body = render_request(scene={"width": 2048, "height": 2048})
    resp = client.post("/render", json=body)
    assert resp.status_code == 200
    assert resp.headers["x-preview-quality"] == "draft"
    img = Image.open(io.BytesIO(resp.content))
    assert max(img.size) <= 256


def test_render_full_quality(client):
    body = render_request(preview_quality="full",
                          scene={"width": 48, "height": 40})
    resp = client.post("/render", json=body)
    assert resp.status_code == 200
    assert resp.headers["x-preview-quality"] == "full"
    assert Image.open(io.BytesIO(resp.content)).size == (48, 40)


def test_render_invalid_highlight_names_field(client):
    doc = params_to_json(WoodParams())
    doc["highlight_width"]["min_degrees"] = -3.0
    resp = client.post("/render", json=render_request(params=doc))
    assert resp.status_code == 400
    errors = resp.json()["errors"]
    assert any("highlight_width" in e["path"] for e in errors)


def test_render_unknown_param_rejected(client):
    resp = client.post("/render", json=render_request(params={"knots": True}))
    assert resp.status_code == 400
    assert "knots" in resp.json()["errors"][0]["path"]


def test_render_degenerate_scene_422(client):
    resp = client.post("/render", json=render_request(
        preview_quality="full", scene={"width": 0, "height": 32}))
    assert resp.status_code == 422


def test_render_seed_differs(client):
    a = client.post("/render", json=render_request(params={"seed": 1}))
    b = client.post("/render", json=render_request(params={"seed": 2}))
    assert a.headers["x-content-hash"] != b.headers["x-content-hash"]


def test_estimate_two_tone_exact(client):
    img = np.zeros((20, 20, 3), dtype=np.uint8)
    img[:10] = (204, 153, 102)
    img[10:] = (102, 77, 51)
    buf = io.BytesIO()
    Image.fromarray(img).save(buf, format="PNG")
    resp = client.post("/estimate", content=buf.getvalue())
    assert resp.status_code == 200
    out = resp.json()
    assert out["earlywood"] == pytest.approx([204 / 255, 153 / 255, 102 / 255])
    assert out["latewood"] == pytest.approx([102 / 255, 77 / 255, 51 / 255])
    assert out["sigma"] == pytest.approx(list(np.log([204 / 102, 153 / 77, 102 / 51])))


def test_estimate_single_pixel(client):
    buf = io.BytesIO()
    Image.fromarray(np.full((1, 1, 3), 128, dtype=np.uint8)).save(buf, format="PNG")
    resp = client.post("/estimate", content=buf.getvalue())
    assert resp.status_code == 200
    assert resp.json()["path_ring"] == 0.0


def test_estimate_corrupt_bytes_415(client):
    resp = client.post("/estimate", content=b"this is not an image")
    assert resp.status_code == 415


def test_stateless_order_independent(client):
    h1 = client.post("/render", json=render_request()).headers["x-content-hash"]
    client.post("/render", json=render_request(params={"seed": 99}))
    client.get("/schema")
    h2 = client.post("/render", json=render_request()).headers["x-content-hash"]
    assert h1 == h2
