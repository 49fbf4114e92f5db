import json

import httpx
import pytest
from fastapi.testclient import TestClient

from stylesearch import CatalogStore
from stylesearch.config import AppConfig
from stylesearch.providers import RemoteProviders
from stylesearch.service import create_app


@pytest.fixture()
def client(store, providers, taxonomy) -> TestClient:
    app = create_app(store, providers, taxonomy, AppConfig())
    return TestClient(app)


@pytest.fixture()
def empty_client(providers, taxonomy) -> TestClient:
    app = create_app(CatalogStore(), providers, taxonomy, AppConfig())
    return TestClient(app)


def assert_error(response, status, code):
    assert response.status_code == status
    body = response.json()
    assert set(body) == {"status", "code", "message"}
    assert body["status"] == status
    assert body["code"] == code
    assert isinstance(body["message"], str) and body["message"]


# -- catalog bulk ---------------------------------------------------------------

def test_bulk_ingest(empty_client):
    lines = "\n".join(
        json.dumps({"id": f"p{i}", "label": "jeans", "title": f"pair {i}"})
        for i in range(3)
    )
    response = empty_client.post("/v1/catalog/bulk", content=lines)
    assert response.status_code == 200
    report = response.json()
    assert report["accepted"] == 3
    assert report["rejected"] == []
    assert report["clusters_touched"] == ["jeans"]


def test_bulk_partial_accept(empty_client):
    lines = "\n".join([
        json.dumps({"id": "p1", "label": "jeans", "title": "one"}),
        json.dumps({"label": "jeans", "title": "no id"}),
        json.dumps({"id": "p3", "label": "jeans", "title": "three"}),
    ])
    report = empty_client.post("/v1/catalog/bulk", content=lines).json()
    assert report["accepted"] == 2
    assert report["rejected"][0]["line"] == 2


def test_bulk_empty_body(empty_client):
    assert_error(empty_client.post("/v1/catalog/bulk", content=""), 400, "empty_body")


# -- search -----------------------------------------------------------------------

def test_search_basic(client, store):
    response = client.get("/v1/search", params={"cluster": "jeans", "q": "indigo denim", "k": 5})
    assert response.status_code == 200
    body = response.json()
    assert body["cluster"] == "jeans"
    assert body["fallback"] is False
    hits = body["hits"]
    assert 0 < len(hits) <= 5
    scores = [h["score"] for h in hits]
    assert scores == sorted(scores, reverse=True)
    # serving layer does no re-ranking: identical to the in-process result
    direct, _ = store.search_routed("jeans", "indigo denim", 5, fallback=False)
    assert [h["id"] for h in hits] == [h.doc_id for h in direct]
    assert [h["score"] for h in hits] == [h.score for h in direct]


def test_search_unknown_cluster_404(client):
    assert_error(
        client.get("/v1/search", params={"cluster": "hats", "q": "blue"}),
        404, "unknown_cluster",
    )


def test_search_unknown_cluster_with_fallback(client):
    response = client.get(
        "/v1/search", params={"cluster": "hats", "q": "indigo", "fallback": "true"}
    )
    assert response.status_code == 200
    assert response.json()["fallback"] is True
    assert response.json()["hits"]


def test_search_empty_query(client):
    assert_error(client.get("/v1/search", params={"cluster": "jeans", "q": "!!!"}), 400, "empty_query")
    assert_error(client.get("/v1/search", params={"cluster": "jeans"}), 400, "empty_query")


def test_search_bad_k(client):
    assert_error(client.get("/v1/search", params={"cluster": "jeans", "q": "blue", "k": 0}),
                 400, "invalid_parameter")


# -- recommend ----------------------------------------------------------------------

def test_recommend_fixture_image(client):
    response = client.post("/v1/recommend", json={"image_id": "img_001"})
    assert response.status_code == 200
    body = response.json()
    assert body["status"] == "ok"
    assert len(body["groups"]) == 2
    assert body["groups"][0]["detection"]["class"] == "trousers"


def test_recommend_unknown_image(client):
    assert_error(client.post("/v1/recommend", json={"image_id": "nope"}), 404, "unknown_image")


def test_recommend_no_detections_is_200(client):
    response = client.post("/v1/recommend", json={"image_id": "img_011"})
    assert response.status_code == 200
    assert response.json() == {"image": "img_011", "status": "no_detections", "groups": []}


def test_recommend_invalid_body(client):
    assert_error(client.post("/v1/recommend", content=b"not json"), 400, "invalid_parameter")
    assert_error(client.post("/v1/recommend", json={}), 400, "invalid_parameter")


def test_recommend_remote_mode_down(store, taxonomy):
    def refuse(request):
        raise httpx.ConnectError("connection refused")

    remote = RemoteProviders("http://sidecar.test", transport=httpx.MockTransport(refuse))
    app = create_app(store, remote, taxonomy, AppConfig())
    client = TestClient(app)
    response = client.post(
        "/v1/recommend", json={"image": "aGVsbG8=", "width": 100, "height": 100}
    )
    assert_error(response, 502, "remote_unavailable")


# -- products / clusters / health ------------------------------------------------------

def test_product_lookup(client):
    response = client.get("/v1/products/plant_00a")
    assert response.status_code == 200
    assert response.json()["id"] == "plant_00a"


def test_product_missing(client):
    assert_error(client.get("/v1/products/missing"), 404, "unknown_product")


def test_clusters_sorted(client, store):
    body = client.get("/v1/clusters").json()
    names = [c["name"] for c in body["clusters"]]
    assert names == sorted(names)
    assert dict((c["name"], c["doc_count"]) for c in body["clusters"]) == dict(store.list_clusters())


def test_health(client):
    body = client.get("/v1/health").json()
    assert body["status"] == "ok"
    assert body["ready"] is True
    assert body["mode"] == "fixture"
    assert body["clusters"] > 0
    assert body["products"] == 91


def test_health_empty_store(empty_client):
    body = empty_client.get("/v1/health").json()
    assert body["clusters"] == 0
    assert body["products"] == 0


# -- GET side effects -------------------------------------------------------------------

def test_get_endpoints_are_side_effect_free(client, store):
    before = store.list_clusters()
    for _ in range(2):
        client.get("/v1/search", params={"cluster": "jeans", "q": "indigo"})
        client.get("/v1/clusters")
        client.get("/v1/products/plant_00a")
        client.get("/v1/health")
    assert store.list_clusters() == before
    assert len(store) == 91
