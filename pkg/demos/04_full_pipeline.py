#!/usr/bin/env python3
"""Walkthrough: the end-to-end flow on the shipped fixtures.

detections -> crops -> zero-shot labels -> captions -> routed match queries
-> ranked recommendations, one group per detected garment.
"""

from pathlib import Path

from stylesearch import CatalogStore, FixtureProviders, load_default_taxonomy, recommend

FIXTURES = Path(__file__).parent.parent / "fixtures"

providers = FixtureProviders(FIXTURES)
taxonomy = load_default_taxonomy()
store = CatalogStore()
store.ingest_file(FIXTURES / "catalog.ndjson")

for image_id in ("img_001", "img_011"):
    result = recommend(providers.image_ref(image_id), providers, taxonomy, store)
    print(f"\n=== {image_id}: status={result.status}, {len(result.groups)} group(s) ===")
    for group in result.groups:
        det = group.detection
        print(f"\n  {group.crop_key}: {det.garment_class} @ {det.confidence:.2f}")
        print(f"    assigned label : {group.assigned_label} "
              f"(cosine {group.classification.score:+.3f})")
        runner_up = group.classification.ranked[1]
        print(f"    runner-up      : {runner_up[0]} ({runner_up[1]:+.3f})")
        print(f"    caption body   : {group.caption.body}")
        print(f"    query -> {group.cluster}: {group.query_text!r}")
        for rank, rp in enumerate(group.hits[:3], start=1):
            print(f"      #{rank} {rp.hit.score:7.4f} {rp.product.id:12s} {rp.product.title}")
