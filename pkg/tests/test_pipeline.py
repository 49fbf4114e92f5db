import json
import shutil

import pytest

from stylesearch import (
    CatalogStore,
    FixtureProviders,
    PipelineConfig,
    recommend,
    result_to_dict,
)
from stylesearch.analysis import cluster_name
from stylesearch.pipeline import STATUS_NO_DETECTIONS, STATUS_OK, build_query, split_counts
from stylesearch.vision import finalize_caption


# -- split_counts -----------------------------------------------------------

def test_split_counts_corpus_scale():
    assert split_counts(111824, 0.9) == (100641, 11183)


def test_split_counts_exact_and_floor_edge():
    assert split_counts(10, 0.9) == (9, 1)
    assert split_counts(1, 0.9) == (0, 1)


def test_split_counts_validation():
    with pytest.raises(ValueError):
        split_counts(10, 1.0)
    with pytest.raises(ValueError):
        split_counts(10, 0.0)


# -- build_query --------------------------------------------------------------

def caption_for(label, body):
    return finalize_caption(label, f"this {label} features", f"this {label} features {body}")


def test_build_query_basic():
    cluster, query = build_query("jeans", caption_for("jeans", "a slim fit in faded blue denim"))
    assert cluster == "jeans"
    assert query == "jeans a slim fit in faded blue denim"


def test_build_query_normalizes_cluster_only():
    cluster, query = build_query("denim shorts", caption_for("denim shorts", "a high waist"))
    assert cluster == "denim_shorts"
    assert query == "denim shorts a high waist"


def test_build_query_excludes_prompt_boilerplate():
    _, query = build_query("jeans", caption_for("jeans", "a slim fit"))
    assert "features" not in query.split()
    assert query.split().count("jeans") == 1


# -- recommend over the shipped fixtures ---------------------------------------

def test_recommend_two_groups(providers, taxonomy, store):
    result = recommend(providers.image_ref("img_001"), providers, taxonomy, store)
    assert result.status == STATUS_OK
    assert len(result.groups) == 2
    first, second = result.groups
    assert first.detection.confidence > second.detection.confidence
    assert first.crop_key == "img_001_crop0"
    assert first.detection.garment_class == "trousers"
    assert first.assigned_label in taxonomy.subcategories("trousers")
    assert second.detection.garment_class == "short_sleeve_top"


def test_recommend_planted_in_top3(providers, taxonomy, store, relevance):
    entry = next(e for e in relevance if e["image"] == "img_001")
    result = recommend(providers.image_ref("img_001"), providers, taxonomy, store)
    group = next(g for g in result.groups if g.crop_key == entry["crop_key"])
    top3 = [rp.product.id for rp in group.hits[:3]]
    assert entry["primary"] in top3


def test_recommend_hits_consistent(providers, taxonomy, store):
    result = recommend(providers.image_ref("img_002"), providers, taxonomy, store)
    for group in result.groups:
        assert group.error is None
        scores = [rp.hit.score for rp in group.hits]
        assert scores == sorted(scores, reverse=True)
        assert len(group.hits) <= 10
        for rp in group.hits:
            assert rp.product.id == rp.hit.doc_id
            if not group.fallback:
                assert cluster_name(rp.product.label) == group.cluster


def test_recommend_no_detections(providers, taxonomy, store):
    result = recommend(providers.image_ref("img_011"), providers, taxonomy, store)
    assert result.status == STATUS_NO_DETECTIONS
    assert result.groups == []


def test_recommend_deterministic(providers, taxonomy, store):
    first = json.dumps(result_to_dict(
        recommend(providers.image_ref("img_004"), providers, taxonomy, store)
    ), sort_keys=True)
    second = json.dumps(result_to_dict(
        recommend(providers.image_ref("img_004"), providers, taxonomy, store)
    ), sort_keys=True)
    assert first == second


def test_recommend_parallel_matches_serial(providers, taxonomy, store):
    serial = result_to_dict(recommend(
        providers.image_ref("img_005"), providers, taxonomy, store, PipelineConfig()
    ))
    parallel = result_to_dict(recommend(
        providers.image_ref("img_005"), providers, taxonomy, store,
        PipelineConfig(parallelism=4),
    ))
    assert serial == parallel


def test_recommend_group_isolation(fixtures_dir, taxonomy, store, tmp_path):
    # img_001 has two crops; drop one caption and only that group should fail
    broken = tmp_path / "fixtures"
    shutil.copytree(fixtures_dir, broken)
    captions = json.loads((broken / "captions.json").read_text())
    del captions["img_001_crop1"]
    (broken / "captions.json").write_text(json.dumps(captions))
    providers = FixtureProviders(broken)
    result = recommend(providers.image_ref("img_001"), providers, taxonomy, store)
    ok, failed = result.groups
    assert ok.error is None and len(ok.hits) > 0
    assert failed.error is not None and "img_001_crop1" in failed.error
    assert failed.hits == []


def test_recommend_fallback_flagged(providers, taxonomy, tmp_path, fixtures_dir):
    # a store with no cluster for the assigned label: fallback merges all
    store = CatalogStore()
    store.ingest_lines([json.dumps({
        "id": "x1", "label": "parka",
        "title": "indigo pinstripe shell", "description": "tapered stonewash denim",
    })])
    result = recommend(
        providers.image_ref("img_001"), providers, taxonomy, store,
        PipelineConfig(fallback_all_clusters=True),
    )
    jeans_group = result.groups[0]
    assert jeans_group.fallback is True
    assert [rp.product.id for rp in jeans_group.hits] == ["x1"]

    strict = recommend(
        providers.image_ref("img_001"), providers, taxonomy, store,
        PipelineConfig(fallback_all_clusters=False),
    )
    assert strict.groups[0].error is not None
    assert strict.groups[0].hits == []


def test_group_count_matches_detections(providers, taxonomy, store, relevance):
    by_image: dict[str, int] = {}
    for entry in relevance:
        by_image[entry["image"]] = by_image.get(entry["image"], 0) + 1
    for image, count in by_image.items():
        result = recommend(providers.image_ref(image), providers, taxonomy, store)
        assert len(result.groups) == count


def test_result_to_dict_schema(providers, taxonomy, store):
    doc = result_to_dict(recommend(providers.image_ref("img_001"), providers, taxonomy, store))
    assert doc["image"] == "img_001"
    assert doc["status"] == "ok"
    group = doc["groups"][0]
    for key in ("detection", "crop_key", "assigned_label", "classification",
                "caption", "cluster", "query_text", "fallback", "error", "hits"):
        assert key in group
    assert group["caption"]["full_text"].startswith(group["caption"]["prompt"])
    hit = group["hits"][0]
    assert {"id", "score", "label", "title", "description"} <= set(hit)
    total = sum(t["contribution"] for t in hit["explanation"]["terms"])
    total += hit["explanation"]["proximity_bonus"]
    assert total == pytest.approx(hit["score"], abs=1e-9)


def test_config_validation():
    with pytest.raises(ValueError):
        PipelineConfig(top_k=0)
    with pytest.raises(ValueError):
        PipelineConfig(parallelism=0)
