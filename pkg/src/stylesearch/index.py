"""Per-label cluster inverted index with Okapi BM25 ranking.

Each product label gets its own ClusterIndex holding postings (term
frequency + positions per document), document lengths and derived corpus
statistics. Match queries analyze the query text, score every document
containing at least one query token with BM25, optionally add a word
proximity bonus, and return a deterministic ranking (score descending,
doc_id ascending on ties).

BM25 variant: Okapi with the non-negative +1-inside-log IDF used by
Lucene-family engines,

    IDF(t) = ln((N - n(t) + 0.5) / (n(t) + 0.5) + 1)
    score(D, Q) = sum over distinct t in Q of
        IDF(t) * tf * (k1 + 1) / (tf + k1 * (1 - b + b * |D| / avgdl))

so every contribution is >= 0. The proximity bonus (disabled by default,
proximity_weight = 0) adds, for every unordered pair of distinct query
tokens both present in the document, weight / (1 + mindist) where mindist
is the smallest absolute position difference between occurrences.

Concurrency: every cluster carries its own reader-writer lock; any number
of concurrent searches OR a single mutating call. Readers always observe a
fully applied pre- or post-mutation state. Clusters are independent.
"""

from __future__ import annotations

import hashlib
import json
import math
import threading
from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import IO, Union

from .analysis import analyze
from .errors import (
    CorruptSnapshotError,
    EmptyDocIdError,
    EmptyQueryError,
    UnknownDocError,
)

SNAPSHOT_FORMAT = "stylesearch.cluster-index"
SNAPSHOT_VERSION = 1


@dataclass(frozen=True)
class ScoringParams:
    """BM25 free parameters plus the optional proximity weight."""

    k1: float = 1.2
    b: float = 0.75
    proximity_weight: float = 0.0

    def __post_init__(self) -> None:
        if self.k1 <= 0:
            raise ValueError("k1 must be > 0")
        if not 0.0 <= self.b <= 1.0:
            raise ValueError("b must be in [0, 1]")
        if self.proximity_weight < 0:
            raise ValueError("proximity_weight must be >= 0")

    def as_dict(self) -> dict[str, float]:
        return {"k1": self.k1, "b": self.b, "proximity_weight": self.proximity_weight}


@dataclass
class Posting:
    doc_id: str
    tf: int
    positions: list[int]


@dataclass(frozen=True)
class TermScore:
    """One query term's part of a document score."""

    term: str
    idf: float
    tf_component: float
    contribution: float


@dataclass
class ScoredHit:
    doc_id: str
    score: float
    explanation: list[TermScore] = field(default_factory=list)
    proximity_bonus: float = 0.0


class _RWLock:
    """Many readers or one writer; writers wait for readers to drain."""

    def __init__(self) -> None:
        self._cond = threading.Condition()
        self._readers = 0
        self._writer = False

    def acquire_read(self) -> None:
        with self._cond:
            while self._writer:
                self._cond.wait()
            self._readers += 1

    def release_read(self) -> None:
        with self._cond:
            self._readers -= 1
            if self._readers == 0:
                self._cond.notify_all()

    def acquire_write(self) -> None:
        with self._cond:
            while self._writer or self._readers:
                self._cond.wait()
            self._writer = True

    def release_write(self) -> None:
        with self._cond:
            self._writer = False
            self._cond.notify_all()


class ClusterIndex:
    """Inverted index for one label cluster."""

    def __init__(self, cluster_name: str):
        self.cluster_name = cluster_name
        self._postings: dict[str, list[Posting]] = {}
        self._doc_lengths: dict[str, int] = {}
        self._doc_terms: dict[str, tuple[str, ...]] = {}
        self._total_length = 0
        self._lock = _RWLock()

    # -- corpus statistics ---------------------------------------------

    @property
    def doc_count(self) -> int:
        return len(self._doc_lengths)

    @property
    def avgdl(self) -> float:
        n = len(self._doc_lengths)
        return self._total_length / n if n else 0.0

    def doc_length(self, doc_id: str) -> int:
        try:
            return self._doc_lengths[doc_id]
        except KeyError:
            raise UnknownDocError(doc_id) from None

    def document_frequency(self, term: str) -> int:
        plist = self._postings.get(term)
        return len(plist) if plist else 0

    def idf(self, term: str) -> float:
        n = self.document_frequency(term)
        N = self.doc_count
        return math.log((N - n + 0.5) / (n + 0.5) + 1.0)

    def doc_ids(self) -> list[str]:
        return list(self._doc_lengths)

    # -- mutation --------------------------------------------------------

    def add(self, doc_id: str, text: str) -> None:
        """Index (or upsert) one document's analyzed text."""
        if not doc_id:
            raise EmptyDocIdError("doc_id must be non-empty")
        tokens = analyze(text)
        self._lock.acquire_write()
        try:
            if doc_id in self._doc_lengths:
                self._remove_unlocked(doc_id)
            positions: dict[str, list[int]] = {}
            for i, tok in enumerate(tokens):
                positions.setdefault(tok, []).append(i)
            for tok, pos in positions.items():
                self._postings.setdefault(tok, []).append(
                    Posting(doc_id=doc_id, tf=len(pos), positions=pos)
                )
            self._doc_lengths[doc_id] = len(tokens)
            self._doc_terms[doc_id] = tuple(positions)
            self._total_length += len(tokens)
        finally:
            self._lock.release_write()

    def remove(self, doc_id: str) -> None:
        self._lock.acquire_write()
        try:
            if doc_id not in self._doc_lengths:
                raise UnknownDocError(doc_id)
            self._remove_unlocked(doc_id)
        finally:
            self._lock.release_write()

    def _remove_unlocked(self, doc_id: str) -> None:
        for tok in self._doc_terms.pop(doc_id, ()):
            plist = [p for p in self._postings[tok] if p.doc_id != doc_id]
            if plist:
                self._postings[tok] = plist
            else:
                del self._postings[tok]
        self._total_length -= self._doc_lengths.pop(doc_id)

    # -- scoring ---------------------------------------------------------

    def bm25_score(
        self, params: ScoringParams, query_tokens: Sequence[str], doc_id: str
    ) -> float:
        """BM25 score of one indexed document for already-analyzed tokens."""
        return self.explain(params, query_tokens, doc_id).score

    def explain(
        self, params: ScoringParams, query_tokens: Sequence[str], doc_id: str
    ) -> ScoredHit:
        self._lock.acquire_read()
        try:
            if doc_id not in self._doc_lengths:
                raise UnknownDocError(doc_id)
            return self._explain_unlocked(params, query_tokens, doc_id)
        finally:
            self._lock.release_read()

    def _explain_unlocked(
        self, params: ScoringParams, query_tokens: Sequence[str], doc_id: str
    ) -> ScoredHit:
        terms: list[TermScore] = []
        score = 0.0
        dl = self._doc_lengths[doc_id]
        for tok in dict.fromkeys(query_tokens):
            tf = 0
            for p in self._postings.get(tok, ()):
                if p.doc_id == doc_id:
                    tf = p.tf
                    break
            if tf == 0:
                continue
            idf = self.idf(tok)
            tf_component = (
                tf * (params.k1 + 1)
                / (tf + params.k1 * (1 - params.b + params.b * dl / self.avgdl))
            )
            contribution = idf * tf_component
            terms.append(TermScore(tok, idf, tf_component, contribution))
            score += contribution
        bonus = 0.0
        if params.proximity_weight > 0:
            bonus = self._proximity_unlocked(params, query_tokens, doc_id)
            score += bonus
        return ScoredHit(doc_id=doc_id, score=score, explanation=terms, proximity_bonus=bonus)

    def proximity_bonus(
        self, params: ScoringParams, query_tokens: Sequence[str], doc_id: str
    ) -> float:
        """Pairwise closeness bonus; 0 unless proximity_weight > 0."""
        self._lock.acquire_read()
        try:
            if doc_id not in self._doc_lengths:
                raise UnknownDocError(doc_id)
            if params.proximity_weight == 0:
                return 0.0
            return self._proximity_unlocked(params, query_tokens, doc_id)
        finally:
            self._lock.release_read()

    def _proximity_unlocked(
        self, params: ScoringParams, query_tokens: Sequence[str], doc_id: str
    ) -> float:
        matched: list[list[int]] = []
        for tok in dict.fromkeys(query_tokens):
            for p in self._postings.get(tok, ()):
                if p.doc_id == doc_id:
                    matched.append(p.positions)
                    break
        if len(matched) < 2:
            return 0.0
        bonus = 0.0
        for i in range(len(matched)):
            for j in range(i + 1, len(matched)):
                bonus += 1.0 / (1.0 + _min_distance(matched[i], matched[j]))
        return params.proximity_weight * bonus

    def search(
        self, params: ScoringParams, query_text: str, top_k: int
    ) -> list[ScoredHit]:
        """Match query: rank every document sharing a token with the query."""
        if top_k < 1:
            raise ValueError("top_k must be >= 1")
        query_tokens = analyze(query_text)
        if not query_tokens:
            raise EmptyQueryError(f"query {query_text!r} yields no tokens")
        self._lock.acquire_read()
        try:
            return self._search_unlocked(params, query_tokens, top_k)
        finally:
            self._lock.release_read()

    def _search_unlocked(
        self, params: ScoringParams, query_tokens: list[str], top_k: int
    ) -> list[ScoredHit]:
        distinct = list(dict.fromkeys(query_tokens))
        # doc_id -> [(term, idf, tf, positions)] in query-token order
        acc: dict[str, list[tuple[str, float, int, list[int]]]] = {}
        for tok in distinct:
            plist = self._postings.get(tok)
            if not plist:
                continue
            idf = self.idf(tok)
            for p in plist:
                acc.setdefault(p.doc_id, []).append((tok, idf, p.tf, p.positions))
        k1, b = params.k1, params.b
        avgdl = self.avgdl
        hits: list[ScoredHit] = []
        for doc_id, parts in acc.items():
            dl = self._doc_lengths[doc_id]
            norm = k1 * (1 - b + b * dl / avgdl)
            terms: list[TermScore] = []
            score = 0.0
            for tok, idf, tf, _pos in parts:
                tf_component = tf * (k1 + 1) / (tf + norm)
                contribution = idf * tf_component
                terms.append(TermScore(tok, idf, tf_component, contribution))
                score += contribution
            bonus = 0.0
            if params.proximity_weight > 0 and len(parts) >= 2:
                for i in range(len(parts)):
                    for j in range(i + 1, len(parts)):
                        bonus += 1.0 / (1.0 + _min_distance(parts[i][3], parts[j][3]))
                bonus *= params.proximity_weight
                score += bonus
            if score > 0:
                hits.append(ScoredHit(doc_id, score, terms, bonus))
        hits.sort(key=lambda h: (-h.score, h.doc_id))
        return hits[:top_k]


def _min_distance(pos_a: Sequence[int], pos_b: Sequence[int]) -> int:
    """Smallest |pa - pb| between two sorted position lists."""
    best = None
    i = j = 0
    while i < len(pos_a) and j < len(pos_b):
        d = abs(pos_a[i] - pos_b[j])
        if best is None or d < best:
            best = d
        if pos_a[i] < pos_b[j]:
            i += 1
        else:
            j += 1
    assert best is not None
    return best


# -- snapshots -------------------------------------------------------------

Sink = Union[str, Path, IO[str]]


def _canonical(payload: dict) -> bytes:
    return json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")


def snapshot_payload(index: ClusterIndex, params: ScoringParams) -> dict:
    index._lock.acquire_read()
    try:
        return {
            "cluster_name": index.cluster_name,
            "params": params.as_dict(),
            "doc_lengths": dict(index._doc_lengths),
            "postings": {
                tok: [[p.doc_id, p.tf, list(p.positions)] for p in plist]
                for tok, plist in index._postings.items()
            },
        }
    finally:
        index._lock.release_read()


def snapshot_save(index: ClusterIndex, params: ScoringParams, sink: Sink) -> None:
    """Write a versioned, checksummed snapshot of one cluster."""
    payload = snapshot_payload(index, params)
    container = {
        "format": SNAPSHOT_FORMAT,
        "version": SNAPSHOT_VERSION,
        "checksum": hashlib.sha256(_canonical(payload)).hexdigest(),
        "payload": payload,
    }
    text = json.dumps(container, sort_keys=True)
    if isinstance(sink, (str, Path)):
        Path(sink).write_text(text, encoding="utf-8")
    else:
        sink.write(text)


def restore_payload(payload: dict) -> tuple[ClusterIndex, ScoringParams]:
    try:
        params = ScoringParams(**payload["params"])
        index = ClusterIndex(payload["cluster_name"])
        for doc_id, length in payload["doc_lengths"].items():
            index._doc_lengths[doc_id] = int(length)
            index._total_length += int(length)
        doc_terms: dict[str, list[str]] = {d: [] for d in index._doc_lengths}
        for tok, plist in payload["postings"].items():
            for doc_id, tf, positions in plist:
                index._postings.setdefault(tok, []).append(
                    Posting(doc_id=doc_id, tf=int(tf), positions=[int(x) for x in positions])
                )
                doc_terms[doc_id].append(tok)
        index._doc_terms = {d: tuple(toks) for d, toks in doc_terms.items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptSnapshotError(f"malformed snapshot payload: {exc}") from exc
    return index, params


def snapshot_load(source: Sink) -> tuple[ClusterIndex, ScoringParams]:
    """Load a snapshot; verifies format, version and checksum."""
    if isinstance(source, (str, Path)):
        try:
            text = Path(source).read_text(encoding="utf-8")
        except OSError as exc:
            raise CorruptSnapshotError(f"unreadable snapshot: {exc}") from exc
    else:
        text = source.read()
    try:
        container = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptSnapshotError(f"snapshot is not valid JSON: {exc}") from exc
    if not isinstance(container, dict):
        raise CorruptSnapshotError("snapshot container must be an object")
    if container.get("format") != SNAPSHOT_FORMAT:
        raise CorruptSnapshotError(f"unexpected snapshot format {container.get('format')!r}")
    if container.get("version") != SNAPSHOT_VERSION:
        raise CorruptSnapshotError(f"unsupported snapshot version {container.get('version')!r}")
    payload = container.get("payload")
    if not isinstance(payload, dict):
        raise CorruptSnapshotError("snapshot payload missing")
    digest = hashlib.sha256(_canonical(payload)).hexdigest()
    if digest != container.get("checksum"):
        raise CorruptSnapshotError("snapshot checksum mismatch")
    return restore_payload(payload)


def merge_ranked(
    hit_lists: Iterable[list[ScoredHit]], top_k: int
) -> list[ScoredHit]:
    """Merge per-cluster rankings into one (score desc, doc_id asc)."""
    merged = [h for hits in hit_lists for h in hits]
    merged.sort(key=lambda h: (-h.score, h.doc_id))
    return merged[:top_k]
