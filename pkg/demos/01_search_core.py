#!/usr/bin/env python3
"""Walkthrough: analyzer, cluster index, BM25 ranking, proximity, snapshots."""

from stylesearch import ClusterIndex, ScoringParams, analyze, snapshot_load, snapshot_save

print("== analysis ==")
print('analyze("Blue Denim-Trousers!") ->', analyze("Blue Denim-Trousers!"))
print('analyze("this jeans features a slim fit") ->',
      analyze("this jeans features a slim fit"))

print("\n== a tiny cluster ==")
index = ClusterIndex("demo")
index.add("d1", "blue denim trousers")
index.add("d2", "black cotton trousers slim fit")
index.add("d3", "blue floral dress")
print(f"docs={index.doc_count} avgdl={index.avgdl:.4f}")

params = ScoringParams()  # k1=1.2 b=0.75, proximity off
print('\n== match query "blue trousers" ==')
for hit in index.search(params, "blue trousers", top_k=10):
    terms = ", ".join(
        f"{t.term}: idf={t.idf:.4f} x tf={t.tf_component:.4f} = {t.contribution:.4f}"
        for t in hit.explanation
    )
    print(f"  {hit.doc_id}  score={hit.score:.4f}   [{terms}]")
print("d1 matches both terms; d3 beats d2 because it is shorter")

print("\n== word proximity bonus ==")
near = ScoringParams(proximity_weight=1.0)
print("d1 positions blue@0, trousers@2 -> bonus",
      index.proximity_bonus(near, ["blue", "trousers"], "d1"))

print("\n== snapshot round-trip ==")
import tempfile

with tempfile.NamedTemporaryFile("w", suffix=".json") as f:
    snapshot_save(index, params, f.name)
    restored, restored_params = snapshot_load(f.name)
print("restored docs:", restored.doc_count,
      "| identical ranking:",
      [h.doc_id for h in restored.search(restored_params, "blue trousers", 10)])
