"""The search service's remote provider client driving a live sidecar."""

import socket
import threading
import time

import pytest
import uvicorn

from stylesearch import CatalogStore, PipelineConfig, load_default_taxonomy, recommend
from stylesearch.providers import ImageRef, RemoteProviders
from stylesearch_sidecar import SidecarConfig, create_app


@pytest.fixture(scope="module")
def sidecar_url():
    with socket.socket() as probe:
        probe.bind(("127.0.0.1", 0))
        port = probe.getsockname()[1]
    config = uvicorn.Config(
        create_app(SidecarConfig()), host="127.0.0.1", port=port, log_level="error"
    )
    server = uvicorn.Server(config)
    thread = threading.Thread(target=server.run, daemon=True)
    thread.start()
    deadline = time.time() + 10
    while not server.started:
        if time.time() > deadline:
            raise RuntimeError("sidecar did not start")
        time.sleep(0.05)
    yield f"http://127.0.0.1:{port}"
    server.should_exit = True
    thread.join(timeout=5)


def test_remote_pipeline_against_live_sidecar(sidecar_url):
    providers = RemoteProviders(sidecar_url, confidence_threshold=0.25)
    taxonomy = load_default_taxonomy()
    store = CatalogStore()
    # index one product per subcategory so every routed cluster exists
    lines = []
    for i, label in enumerate(taxonomy.all_labels()):
        lines.append(
            '{"id": "p%03d", "label": "%s", "title": "%s sample piece", '
            '"description": "solid everyday %s"}' % (i, label, label, label)
        )
    store.ingest_lines(lines)

    img = ImageRef(uri="upload_001", width=512, height=1024, data=b"outfit-bytes-001")
    result = recommend(img, providers, taxonomy, store, PipelineConfig(top_k=5))
    assert result.status == "ok"
    assert result.groups
    for group in result.groups:
        assert group.error is None, group.error
        assert group.assigned_label in taxonomy.subcategories(group.detection.garment_class)
        assert group.caption is not None
        assert group.caption.full_text.startswith(group.caption.prompt)
        assert group.query_text

    # deterministic inference mode end to end
    rerun = recommend(img, providers, taxonomy, store, PipelineConfig(top_k=5))
    assert [g.assigned_label for g in rerun.groups] == [g.assigned_label for g in result.groups]
    assert [g.caption.full_text for g in rerun.groups] == [g.caption.full_text for g in result.groups]
    providers.close()


def test_remote_detect_matches_wire(sidecar_url):
    providers = RemoteProviders(sidecar_url)
    img = ImageRef(uri="upload_002", width=300, height=400, data=b"other-bytes")
    detections = providers.detect(img)
    for det in detections:
        assert 0 <= det.box.x1 < det.box.x2 <= 300
        assert 0 <= det.box.y1 < det.box.y2 <= 400
        assert det.confidence >= 0.25
    providers.close()
