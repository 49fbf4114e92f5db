"""The four wire endpoints: /detect, /embed_image, /embed_text, /caption.

Bodies follow schemas/wire.schema.json in the repo root. 400 for payloads
that cannot be decoded or validated, 500 for backend failures.
"""

from __future__ import annotations

import base64
import binascii

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .backends import Backend, Box, build_backend
from .config import SidecarConfig


class BadRequest(Exception):
    pass


def _error(status: int, message: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"error": message})


async def _json_body(request: Request) -> dict:
    try:
        body = await request.json()
    except Exception as exc:
        raise BadRequest(f"body is not valid JSON: {exc}") from exc
    if not isinstance(body, dict):
        raise BadRequest("body must be a JSON object")
    return body


def _image_bytes(body: dict) -> bytes:
    data = body.get("image")
    if not isinstance(data, str) or not data:
        raise BadRequest("field 'image' (base64 string) is required")
    try:
        return base64.b64decode(data, validate=True)
    except (binascii.Error, ValueError) as exc:
        raise BadRequest(f"field 'image' is not valid base64: {exc}") from exc


def _box(body: dict) -> Box | None:
    raw = body.get("box")
    if raw is None:
        return None
    try:
        x1, y1, x2, y2 = (float(v) for v in raw)
    except (TypeError, ValueError) as exc:
        raise BadRequest(f"field 'box' must be [x1, y1, x2, y2]: {exc}") from exc
    if not (x1 < x2 and y1 < y2):
        raise BadRequest(f"degenerate box {raw}")
    return (x1, y1, x2, y2)


def create_app(config: SidecarConfig | None = None, backend: Backend | None = None) -> FastAPI:
    config = config or SidecarConfig()
    backend = backend or build_backend(config)
    app = FastAPI(title="stylesearch-sidecar", docs_url=None, redoc_url=None)

    @app.exception_handler(BadRequest)
    async def _bad_request(request: Request, exc: BadRequest):
        return _error(400, str(exc))

    @app.exception_handler(Exception)
    async def _model_failure(request: Request, exc: Exception):
        return _error(500, f"model failure: {exc}")

    @app.post("/detect")
    async def detect(request: Request):
        body = await _json_body(request)
        image = _image_bytes(body)
        try:
            width = int(body["width"])
            height = int(body["height"])
        except (KeyError, TypeError, ValueError) as exc:
            raise BadRequest("integer 'width' and 'height' are required") from exc
        if width < 1 or height < 1:
            raise BadRequest("width and height must be positive")
        detections = backend.detect(image, width, height)
        return {
            "detections": [
                {"class": d.cls, "confidence": d.confidence, "box": list(d.box)}
                for d in detections
            ]
        }

    @app.post("/embed_image")
    async def embed_image(request: Request):
        body = await _json_body(request)
        values = backend.embed_image(_image_bytes(body), _box(body))
        return {"dim": len(values), "values": values}

    @app.post("/embed_text")
    async def embed_text(request: Request):
        body = await _json_body(request)
        texts = body.get("texts")
        if not isinstance(texts, list) or not all(isinstance(t, str) for t in texts):
            raise BadRequest("field 'texts' must be a list of strings")
        vectors = backend.embed_texts(texts)
        dim = len(vectors[0]) if vectors else backend.dim
        return {"dim": dim, "vectors": vectors}

    @app.post("/caption")
    async def caption(request: Request):
        body = await _json_body(request)
        prompt = body.get("prompt")
        if not isinstance(prompt, str) or not prompt.strip():
            raise BadRequest("field 'prompt' must be a non-empty string")
        text = backend.caption(_image_bytes(body), _box(body), prompt)
        return {"text": text}

    @app.get("/health")
    def health():
        return {"status": "ok", "backend": type(backend).__name__, "dim": backend.dim}

    return app
