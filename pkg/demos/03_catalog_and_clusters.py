#!/usr/bin/env python3
"""Walkthrough: catalog ingestion, label clusters, routed search, fallback."""

import json
from pathlib import Path

from stylesearch import CatalogStore

FIXTURES = Path(__file__).parent.parent / "fixtures"

store = CatalogStore()
report = store.ingest_file(FIXTURES / "catalog.ndjson")
print(f"ingested: accepted={report.accepted} rejected={len(report.rejected)}")
print("clusters touched:", len(report.clusters_touched))

print("\n== clusters (label-sharded indexes) ==")
for name, count in store.list_clusters()[:8]:
    print(f"  {name:22s} {count} docs")
print("  ...")

print("\n== routed search ==")
hits, fallback = store.search_routed("jeans", "jeans tapered indigo denim", 5, fallback=True)
for hit in hits:
    product = store.get(hit.doc_id)
    print(f"  {hit.score:7.4f}  {product.id:12s} {product.title}")
print("fallback used:", fallback)

print("\n== fallback when the routed cluster does not exist ==")
hits, fallback = store.search_routed("leather_pants", "indigo tapered", 3, fallback=True)
print("fallback used:", fallback, "| merged hits:", [h.doc_id for h in hits])

print("\n== bad records are rejected individually ==")
demo_report = CatalogStore().ingest_lines([
    json.dumps({"id": "ok1", "label": "jeans", "title": "fine pair"}),
    json.dumps({"label": "jeans", "title": "missing id"}),
    "{broken json",
])
print("accepted:", demo_report.accepted)
for line, reason in demo_report.rejected:
    print(f"  line {line}: {reason}")
