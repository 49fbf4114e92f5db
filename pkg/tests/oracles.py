"""Independent brute-force reference implementations.

Everything here is deliberately written from scratch against the stated
definitions (no imports from the package under test beyond plain data),
so tests can cross-check the production code path against a second,
structurally different route.
"""

from __future__ import annotations

import math
import re


def tokenize(text: str) -> list[str]:
    return re.findall(r"[^\W_]+", text.lower())


# -- ranking ------------------------------------------------------------------


def bm25_score(
    docs: dict[str, list[str]],
    doc_id: str,
    query_tokens: list[str],
    k1: float = 1.2,
    b: float = 0.75,
    proximity_weight: float = 0.0,
) -> float:
    """Direct evaluation of the ranking formula for one document."""
    N = len(docs)
    avgdl = sum(len(t) for t in docs.values()) / N if N else 0.0
    tokens = docs[doc_id]
    score = 0.0
    for term in dict.fromkeys(query_tokens):
        tf = tokens.count(term)
        if tf == 0:
            continue
        n = sum(1 for t in docs.values() if term in t)
        idf = math.log((N - n + 0.5) / (n + 0.5) + 1.0)
        score += idf * tf * (k1 + 1) / (tf + k1 * (1 - b + b * len(tokens) / avgdl))
    if proximity_weight > 0:
        score += proximity_bonus(tokens, query_tokens, proximity_weight)
    return score


def proximity_bonus(
    doc_tokens: list[str], query_tokens: list[str], weight: float
) -> float:
    """All-pairs minimum position distance, brute force."""
    positions = {
        term: [i for i, t in enumerate(doc_tokens) if t == term]
        for term in dict.fromkeys(query_tokens)
    }
    present = [term for term, pos in positions.items() if pos]
    total = 0.0
    for i in range(len(present)):
        for j in range(i + 1, len(present)):
            mindist = min(
                abs(pa - pb)
                for pa in positions[present[i]]
                for pb in positions[present[j]]
            )
            total += 1.0 / (1.0 + mindist)
    return weight * total


def bm25_ranking(
    docs: dict[str, list[str]],
    query_tokens: list[str],
    top_k: int,
    k1: float = 1.2,
    b: float = 0.75,
    proximity_weight: float = 0.0,
) -> list[tuple[str, float]]:
    """Score every doc sharing a token with the query; sort; truncate."""
    query = list(dict.fromkeys(query_tokens))
    scored = []
    for doc_id, tokens in docs.items():
        if not any(t in tokens for t in query):
            continue
        s = bm25_score(docs, doc_id, query, k1, b, proximity_weight)
        if s > 0:
            scored.append((doc_id, s))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:top_k]


def assert_rankings_match(
    got: list[tuple[str, float]],
    want: list[tuple[str, float]],
    tol: float = 1e-9,
) -> None:
    """Same docs, same scores within tol, same order up to sub-tol ties.

    Two documents whose scores are mathematically equal can differ in the
    last ulp between two independently coded evaluation orders; their
    relative order is then legitimately ambiguous at the stated tolerance.
    Any inversion between docs whose scores differ by more than tol fails.
    """
    got_scores = dict(got)
    want_scores = dict(want)
    assert set(got_scores) == set(want_scores)
    for doc_id in got_scores:
        assert abs(got_scores[doc_id] - want_scores[doc_id]) <= tol, doc_id
    got_ids = [d for d, _ in got]
    want_pos = {d: i for i, (d, _) in enumerate(want)}
    for i in range(len(got_ids)):
        for j in range(i + 1, len(got_ids)):
            a, b = got_ids[i], got_ids[j]
            if want_pos[a] > want_pos[b]:  # inverted relative to the oracle
                assert abs(want_scores[a] - want_scores[b]) <= tol, (a, b)


# -- zero-shot classification -------------------------------------------------


def cosine(u: list[float], v: list[float]) -> float:
    num = sum(a * b for a, b in zip(u, v))
    nu = math.sqrt(sum(a * a for a in u))
    nv = math.sqrt(sum(b * b for b in v))
    return min(1.0, max(-1.0, num / (nu * nv)))


def classify_ranking(
    image: list[float], candidates: list[tuple[str, list[float]]]
) -> list[tuple[str, float]]:
    scored = [(label, cosine(image, vec)) for label, vec in candidates]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored


# -- detection evaluation -----------------------------------------------------


def iou(a: tuple[float, float, float, float], b: tuple[float, float, float, float]) -> float:
    ix1, iy1 = max(a[0], b[0]), max(a[1], b[1])
    ix2, iy2 = min(a[2], b[2]), min(a[3], b[3])
    if ix1 >= ix2 or iy1 >= iy2:
        return 0.0
    inter = (ix2 - ix1) * (iy2 - iy1)
    area_a = (a[2] - a[0]) * (a[3] - a[1])
    area_b = (b[2] - b[0]) * (b[3] - b[1])
    return inter / (area_a + area_b - inter)


def match_counts(
    preds: list[tuple[str, float, tuple[float, float, float, float]]],
    truths: list[tuple[str, tuple[float, float, float, float]]],
    iou_threshold: float,
) -> tuple[int, int, int]:
    """Greedy matching: confidence desc, best unmatched same-class truth."""
    order = sorted(range(len(preds)), key=lambda i: (-preds[i][1], preds[i][2][0], preds[i][2][1]))
    taken = [False] * len(truths)
    tp = fp = 0
    for i in order:
        cls, _conf, box = preds[i]
        best, best_overlap = -1, 0.0
        for j, (tcls, tbox) in enumerate(truths):
            if taken[j] or tcls != cls:
                continue
            overlap = iou(box, tbox)
            if overlap >= iou_threshold and overlap > best_overlap:
                best, best_overlap = j, overlap
        if best >= 0:
            taken[best] = True
            tp += 1
        else:
            fp += 1
    return tp, fp, taken.count(False)


def prf1(tp: int, fp: int, fn: int) -> tuple[float, float, float]:
    p = tp / (tp + fp) if tp + fp else 0.0
    r = tp / (tp + fn) if tp + fn else 0.0
    f = 2 * p * r / (p + r) if p + r else 0.0
    return p, r, f
