"""Detection and retrieval evaluation.

Detection side: greedy IoU matching (predictions in confidence order, each
taking the unmatched same-class truth with highest IoU above threshold),
precision/recall/F1 from the resulting counts, and a PR curve swept over
the unique prediction confidences. Retrieval side: precision@k, recall@k
and mean reciprocal rank over (ranked hits, relevant set) pairs.
"""

from __future__ import annotations

from collections.abc import Sequence, Set
from dataclasses import dataclass

from .geometry import BoundingBox, iou
from .providers import Detection

GroundTruth = tuple[str, BoundingBox]


@dataclass(frozen=True)
class MatchCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0

    def __post_init__(self) -> None:
        if min(self.tp, self.fp, self.fn) < 0:
            raise ValueError("counts must be non-negative")


@dataclass(frozen=True)
class PRPoint:
    threshold: float
    precision: float
    recall: float


def match_detections(
    preds: Sequence[Detection],
    truths: Sequence[GroundTruth],
    iou_threshold: float = 0.5,
) -> MatchCounts:
    """Greedy confidence-ordered matching of predictions to ground truth."""
    if not 0.0 < iou_threshold < 1.0:
        raise ValueError("iou_threshold must be in (0, 1)")
    order = sorted(
        range(len(preds)),
        key=lambda i: (-preds[i].confidence, preds[i].box.x1, preds[i].box.y1),
    )
    matched = [False] * len(truths)
    tp = fp = 0
    for i in order:
        pred = preds[i]
        best_j = -1
        best_iou = 0.0
        for j, (cls, box) in enumerate(truths):
            if matched[j] or cls != pred.garment_class:
                continue
            overlap = iou(pred.box, box)
            if overlap >= iou_threshold and overlap > best_iou:
                best_iou = overlap
                best_j = j
        if best_j >= 0:
            matched[best_j] = True
            tp += 1
        else:
            fp += 1
    fn = matched.count(False)
    return MatchCounts(tp=tp, fp=fp, fn=fn)


def precision_recall_f1(c: MatchCounts) -> tuple[float, float, float]:
    """(precision, recall, F1); zero-denominator cases give 0 by convention."""
    precision = c.tp / (c.tp + c.fp) if (c.tp + c.fp) else 0.0
    recall = c.tp / (c.tp + c.fn) if (c.tp + c.fn) else 0.0
    f1 = 2 * precision * recall / (precision + recall) if (precision + recall) else 0.0
    return precision, recall, f1


def pr_curve(
    preds: Sequence[Detection],
    truths: Sequence[GroundTruth],
    iou_threshold: float = 0.5,
) -> list[PRPoint]:
    """Sweep the confidence threshold over unique prediction confidences.

    Points are emitted in descending threshold order, so recall is
    non-decreasing along the curve.
    """
    thresholds = sorted({p.confidence for p in preds}, reverse=True)
    points: list[PRPoint] = []
    for threshold in thresholds:
        kept = [p for p in preds if p.confidence >= threshold]
        counts = match_detections(kept, truths, iou_threshold)
        precision, recall, _ = precision_recall_f1(counts)
        points.append(PRPoint(threshold=threshold, precision=precision, recall=recall))
    return points


def precision_at_k(hits: Sequence[str], relevant: Set[str], k: int) -> float:
    """Fraction of the top k ranked ids that are relevant."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return sum(1 for h in hits[:k] if h in relevant) / k


def recall_at_k(hits: Sequence[str], relevant: Set[str], k: int) -> float:
    """Fraction of relevant ids found in the top k; 0 when nothing is relevant."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not relevant:
        return 0.0
    return sum(1 for h in hits[:k] if h in relevant) / len(relevant)


def reciprocal_rank(hits: Sequence[str], relevant: Set[str]) -> float:
    for rank, h in enumerate(hits, start=1):
        if h in relevant:
            return 1.0 / rank
    return 0.0


def mrr(queries: Sequence[tuple[Sequence[str], Set[str]]]) -> float:
    """Mean reciprocal rank of the first relevant hit over all queries."""
    if not queries:
        return 0.0
    return sum(reciprocal_rank(hits, relevant) for hits, relevant in queries) / len(queries)


# -- report builders (consumed by the CLI's eval commands) -------------------


def evaluate_detections(
    preds_by_image: dict[str, list[Detection]],
    truths_by_image: dict[str, list[GroundTruth]],
    iou_threshold: float = 0.5,
) -> dict:
    """Per-class and aggregate P/R/F1 plus the aggregate PR curve."""
    class_names = sorted(
        {t[0] for truths in truths_by_image.values() for t in truths}
        | {p.garment_class for preds in preds_by_image.values() for p in preds}
    )
    images = sorted(set(preds_by_image) | set(truths_by_image))

    def counts_for(cls: str | None) -> MatchCounts:
        tp = fp = fn = 0
        for image in images:
            preds = preds_by_image.get(image, [])
            truths = truths_by_image.get(image, [])
            if cls is not None:
                preds = [p for p in preds if p.garment_class == cls]
                truths = [t for t in truths if t[0] == cls]
            c = match_detections(preds, truths, iou_threshold)
            tp, fp, fn = tp + c.tp, fp + c.fp, fn + c.fn
        return MatchCounts(tp=tp, fp=fp, fn=fn)

    def block(c: MatchCounts) -> dict:
        precision, recall, f1 = precision_recall_f1(c)
        return {
            "tp": c.tp, "fp": c.fp, "fn": c.fn,
            "precision": precision, "recall": recall, "f1": f1,
        }

    all_preds = [p for image in images for p in preds_by_image.get(image, [])]
    # PR curve over the pooled predictions; truths keep their image identity
    # by matching per image at each threshold.
    thresholds = sorted({p.confidence for p in all_preds}, reverse=True)
    curve = []
    for threshold in thresholds:
        tp = fp = fn = 0
        for image in images:
            kept = [p for p in preds_by_image.get(image, []) if p.confidence >= threshold]
            c = match_detections(kept, truths_by_image.get(image, []), iou_threshold)
            tp, fp, fn = tp + c.tp, fp + c.fp, fn + c.fn
        precision, recall, _ = precision_recall_f1(MatchCounts(tp, fp, fn))
        curve.append({"threshold": threshold, "precision": precision, "recall": recall})

    return {
        "iou_threshold": iou_threshold,
        "per_class": {cls: block(counts_for(cls)) for cls in class_names},
        "aggregate": block(counts_for(None)),
        "pr_curve": curve,
    }


def evaluate_retrieval(
    runs: Sequence[tuple[Sequence[str], Set[str]]],
    ks: Sequence[int] = (1, 3, 5, 10),
) -> dict:
    """precision@k / recall@k / MRR over (hits, relevant) query pairs."""
    report: dict = {"queries": len(runs), "mrr": mrr(runs)}
    for k in ks:
        if runs:
            report[f"precision_at_{k}"] = sum(
                precision_at_k(hits, relevant, k) for hits, relevant in runs
            ) / len(runs)
            report[f"recall_at_{k}"] = sum(
                recall_at_k(hits, relevant, k) for hits, relevant in runs
            ) / len(runs)
        else:
            report[f"precision_at_{k}"] = 0.0
            report[f"recall_at_{k}"] = 0.0
    return report
