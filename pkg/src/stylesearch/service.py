"""HTTP serving layer: the /v1 wire API consumed by the UI and other programs.

All bodies are JSON with stable field names (documented in docs/wire-api.md
and schemas/). Errors always carry {"status", "code", "message"} with a
code from the closed set: empty_body, empty_query, invalid_parameter,
unknown_cluster, unknown_product, unknown_image, remote_unavailable,
internal_error.
"""

from __future__ import annotations

import base64
import binascii
from pathlib import Path

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse
from fastapi.staticfiles import StaticFiles

from .catalog import CatalogStore
from .config import AppConfig
from .errors import (
    EmptyQueryError,
    MissingFixtureError,
    NotFoundError,
    RemoteUnavailableError,
    StyleSearchError,
    UnknownClusterError,
)
from .pipeline import recommend, result_to_dict
from .providers import FixtureProviders, ImageRef, ProviderBundle, RemoteProviders
from .taxonomy import Taxonomy, load_default_taxonomy, load_taxonomy


def _error(status: int, code: str, message: str) -> JSONResponse:
    return JSONResponse(
        status_code=status,
        content={"status": status, "code": code, "message": message},
    )


def _hit_to_dict(hit, product) -> dict:
    return {
        "id": product.id,
        "score": hit.score,
        "label": product.label,
        "title": product.title,
        "description": product.description,
        "image_uri": product.image_uri,
        "retailer": product.retailer,
        "price": product.price,
    }


def create_app(
    store: CatalogStore,
    providers: ProviderBundle | None,
    taxonomy: Taxonomy,
    cfg: AppConfig,
    ui_dist: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="stylesearch", docs_url=None, redoc_url=None)
    mode = "remote" if isinstance(providers, RemoteProviders) else "fixture"

    @app.exception_handler(StyleSearchError)
    async def _unhandled(request: Request, exc: StyleSearchError):
        return _error(500, "internal_error", str(exc))

    @app.post("/v1/catalog/bulk")
    async def catalog_bulk(request: Request):
        body = await request.body()
        if not body.strip():
            return _error(400, "empty_body", "request body must contain NDJSON records")
        report = store.ingest_lines(body.decode("utf-8").splitlines())
        return report.to_dict()

    @app.get("/v1/search")
    def search(cluster: str, q: str = "", k: int = 10, fallback: bool = False):
        if k < 1:
            return _error(400, "invalid_parameter", "k must be >= 1")
        try:
            hits, used_fallback = store.search_routed(cluster, q, k, fallback=fallback)
        except EmptyQueryError:
            return _error(400, "empty_query", "query yields no tokens after analysis")
        except UnknownClusterError as exc:
            return _error(404, "unknown_cluster", str(exc))
        return {
            "cluster": cluster,
            "fallback": used_fallback,
            "hits": [_hit_to_dict(h, store.get(h.doc_id)) for h in hits],
        }

    @app.post("/v1/recommend")
    async def recommend_endpoint(request: Request):
        try:
            body = await request.json()
        except Exception:
            return _error(400, "invalid_parameter", "body must be a JSON object")
        if not isinstance(body, dict):
            return _error(400, "invalid_parameter", "body must be a JSON object")
        if providers is None:
            return _error(502, "remote_unavailable", "no providers configured")
        try:
            img = _image_from_body(body, providers)
        except MissingFixtureError as exc:
            return _error(404, "unknown_image", str(exc))
        except ValueError as exc:
            return _error(400, "invalid_parameter", str(exc))
        try:
            result = recommend(img, providers, taxonomy, store, cfg.pipeline)
        except MissingFixtureError as exc:
            return _error(404, "unknown_image", str(exc))
        except RemoteUnavailableError as exc:
            return _error(502, "remote_unavailable", str(exc))
        return result_to_dict(result)

    @app.get("/v1/products/{product_id}")
    def product(product_id: str):
        try:
            record = store.get(product_id)
        except NotFoundError as exc:
            return _error(404, "unknown_product", str(exc))
        return record.to_dict()

    @app.get("/v1/clusters")
    def clusters():
        return {
            "clusters": [
                {"name": name, "doc_count": count}
                for name, count in store.list_clusters()
            ]
        }

    @app.get("/v1/health")
    def health():
        cluster_list = store.list_clusters()
        return {
            "status": "ok",
            "ready": True,
            "mode": mode,
            "clusters": len(cluster_list),
            "products": len(store),
        }

    if ui_dist is not None and Path(ui_dist).is_dir():
        app.mount("/ui", StaticFiles(directory=str(ui_dist), html=True), name="ui")

    return app


def _image_from_body(body: dict, providers: ProviderBundle) -> ImageRef:
    image_id = body.get("image_id")
    if image_id is not None:
        if not isinstance(providers, FixtureProviders):
            raise ValueError("image_id lookup needs fixture-mode providers")
        return providers.image_ref(str(image_id))
    data = body.get("image")
    if data is None:
        raise ValueError("body needs 'image_id' (fixture mode) or base64 'image'")
    try:
        raw = base64.b64decode(data, validate=True)
    except (binascii.Error, TypeError) as exc:
        raise ValueError(f"invalid base64 image payload: {exc}") from exc
    try:
        width = int(body["width"])
        height = int(body["height"])
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError("image payload needs integer width and height") from exc
    return ImageRef(uri=str(body.get("name", "upload")), width=width, height=height, data=raw)


def build_runtime(cfg: AppConfig) -> tuple[CatalogStore, ProviderBundle | None, Taxonomy]:
    """Construct store/providers/taxonomy from configuration (CLI serve path)."""
    store_dir = Path(cfg.store_dir)
    store = CatalogStore.load(store_dir) if store_dir.exists() else CatalogStore(cfg.scoring)
    taxonomy = (
        load_taxonomy(cfg.taxonomy_path) if cfg.taxonomy_path else load_default_taxonomy()
    )
    providers: ProviderBundle | None = None
    if cfg.remote_url:
        providers = RemoteProviders(
            cfg.remote_url,
            confidence_threshold=cfg.confidence_threshold,
            max_in_flight=cfg.max_in_flight,
        )
    elif cfg.fixtures_dir:
        providers = FixtureProviders(
            cfg.fixtures_dir, confidence_threshold=cfg.confidence_threshold
        )
    return store, providers, taxonomy
