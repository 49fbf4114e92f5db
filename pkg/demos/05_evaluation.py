#!/usr/bin/env python3
"""Walkthrough: detection metrics, the PR curve, and retrieval metrics."""

from stylesearch import (
    BoundingBox,
    Detection,
    MatchCounts,
    iou,
    match_detections,
    mrr,
    pr_curve,
    precision_at_k,
    precision_recall_f1,
)

print("== IoU ==")
print("identical:", iou(BoundingBox(0, 0, 10, 10), BoundingBox(0, 0, 10, 10)))
print("(0,0,2,2) vs (1,1,3,3):", iou(BoundingBox(0, 0, 2, 2), BoundingBox(1, 1, 3, 3)))

print("\n== greedy matching at IoU >= 0.5 ==")
preds = [
    Detection("trousers", 0.95, BoundingBox(10, 50, 40, 95)),
    Detection("trousers", 0.70, BoundingBox(12, 52, 40, 96)),   # duplicate of the first
    Detection("short_sleeve_top", 0.88, BoundingBox(12, 5, 38, 48)),
    Detection("shorts", 0.60, BoundingBox(60, 60, 90, 90)),     # nothing there
]
truths = [
    ("trousers", BoundingBox(10, 50, 40, 95)),
    ("short_sleeve_top", BoundingBox(10, 5, 40, 48)),
    ("long_sleeve_outerwear", BoundingBox(5, 0, 45, 60)),       # missed
]
counts = match_detections(preds, truths, iou_threshold=0.5)
print(f"tp={counts.tp} fp={counts.fp} fn={counts.fn}")
precision, recall, f1 = precision_recall_f1(counts)
print(f"precision={precision:.3f} recall={recall:.3f} f1={f1:.3f}")

print("\nheadline counts 97/3/3:", precision_recall_f1(MatchCounts(97, 3, 3)))

print("\n== PR curve (threshold sweep over confidences) ==")
for point in pr_curve(preds, truths, 0.5):
    print(f"  threshold {point.threshold:.2f}: precision={point.precision:.3f} "
          f"recall={point.recall:.3f}")

print("\n== retrieval metrics ==")
print("precision@3 hits [a,b,c] relevant {a}:", precision_at_k(["a", "b", "c"], {"a"}, 3))
queries = [(["x", "a"], {"a"}), (["a", "y"], {"a"}), (["z", "w", "a"], {"a"})]
print("mrr over three queries:", round(mrr(queries), 4))
