"""HTTP facade for the interactive designer.

Stateless: every response is a pure function of (request, server seed).
Render responses carry a content hash so clients can detect identical
results without byte comparison.
"""

import hashlib
import io

import numpy as np
from fastapi import FastAPI, Request, Response
from fastapi.responses import JSONResponse
from PIL import Image, UnidentifiedImageError

from dataclasses import replace

from .model import estimate_color_params
from .params import ParameterError
from .render import cut_scene, render_slab
from .schema import (schema_endpoint_payload, params_from_json, validate_document,
                     SCENE_SCHEMA)

DRAFT_MAX_SIDE = 256
DRAFT_MAX_BANDS = 2


def _draft_params(params):
    def cap(ax):
        return replace(ax, bands=min(ax.bands, DRAFT_MAX_BANDS))
    return replace(params,
                   distortion_r=cap(params.distortion_r),
                   distortion_theta=cap(params.distortion_theta),
                   distortion_z=cap(params.distortion_z))


def _scene_from_json(doc):
    doc = dict(doc)
    kind = doc.pop("cut", "tangential")
    return cut_scene(
        kind,
        offset=float(doc.get("offset", 6.0)),
        size=float(doc.get("size", 4.0)),
        width=int(doc.get("width", 256)),
        height=int(doc.get("height", 256)),
        light_elevation=float(doc.get("light_elevation", 45.0)),
        light_azimuth=float(doc.get("light_azimuth", 90.0)),
        exposure=float(doc.get("exposure", 1.0)),
    )


def create_app(seed=None, workers=1):
    app = FastAPI(title="woodtex preview service")

    @app.get("/schema")
    def schema():
        return schema_endpoint_payload()

    @app.post("/render")
    async def render(request: Request):
        body = await request.json()
        quality = body.get("preview_quality", "draft")
        if quality not in ("draft", "full"):
            return JSONResponse(status_code=400, content={
                "errors": [{"path": "preview_quality",
                            "message": "must be draft or full"}]})
        params_doc = dict(body.get("params", {}))
        if seed is not None and "seed" not in params_doc:
            params_doc["seed"] = int(seed)
        try:
            params = params_from_json(params_doc)
        except ParameterError as e:
            return JSONResponse(status_code=400, content={
                "errors": [{"path": e.path, "message": e.message}]})
        scene_doc = body.get("scene", {})
        try:
            validate_document(scene_doc, SCENE_SCHEMA)
        except ParameterError as e:
            return JSONResponse(status_code=400, content={
                "errors": [{"path": "scene." + e.path, "message": e.message}]})
        if quality == "draft":
            params = _draft_params(params)
            scene_doc = dict(scene_doc)
            scene_doc["width"] = min(int(scene_doc.get("width", 256)), DRAFT_MAX_SIDE)
            scene_doc["height"] = min(int(scene_doc.get("height", 256)), DRAFT_MAX_SIDE)
        try:
            scene = _scene_from_json(scene_doc).validate()
        except (ParameterError, ValueError) as e:
            return JSONResponse(status_code=422, content={
                "errors": [{"path": "scene", "message": str(e)}]})
        img = render_slab(scene, params, workers=workers)
        buf = io.BytesIO()
        Image.fromarray(img).save(buf, format="PNG")
        data = buf.getvalue()
        return Response(content=data, media_type="image/png", headers={
            "X-Content-Hash": hashlib.sha256(data).hexdigest(),
            "X-Preview-Quality": quality,
        })

    @app.post("/estimate")
    async def estimate(request: Request):
        data = await request.body()
        try:
            img = Image.open(io.BytesIO(data)).convert("RGB")
        except (UnidentifiedImageError, OSError):
            return JSONResponse(status_code=415,
                                content={"errors": [{"path": "photo",
                                                     "message": "undecodable image"}]})
        arr = np.asarray(img, dtype=float) / 255.0
        est = estimate_color_params(arr)
        return {
            "sigma": [float(x) for x in est.sigma],
            "path_offset": est.path_offset,
            "path_ring": est.path_ring,
            "earlywood": [float(x) for x in est.earlywood],
            "latewood": [float(x) for x in est.latewood],
        }

    return app
