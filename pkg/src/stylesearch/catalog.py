"""Product catalog: ingestion, label-cluster routing, persistence.

Catalog files are NDJSON: one JSON object per line with at least
{id, label} and a non-empty title or description; unknown fields are
ignored. Each accepted record is routed into the cluster named by its
analyzer-normalized label and indexed under title + " " + description
(label tokens are not indexed — the label already picked the cluster, and
repeating it in every document would flatten IDF within the cluster).

Persistence is an append-only NDJSON record log plus per-cluster snapshots;
a store can always be rebuilt from the log alone.

Concurrency: single writer per store, any number of readers; no reader
ever observes a partially applied record.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator

from .analysis import analyze, cluster_name
from .errors import (
    CorruptSnapshotError,
    MalformedRecordError,
    MissingFieldError,
    NotFoundError,
    UnknownClusterError,
    UnreadableSourceError,
)
from .index import (
    ClusterIndex,
    ScoredHit,
    ScoringParams,
    _RWLock,
    merge_ranked,
    restore_payload,
    snapshot_payload,
)

STORE_FORMAT = "stylesearch.store"
STORE_VERSION = 1


@dataclass(frozen=True)
class ProductRecord:
    id: str
    label: str
    title: str = ""
    description: str = ""
    image_uri: str = ""
    retailer: str | None = None
    price: float | None = None

    @property
    def indexed_text(self) -> str:
        return f"{self.title} {self.description}".strip()

    @property
    def cluster(self) -> str:
        return cluster_name(self.label)

    def to_dict(self) -> dict:
        out: dict = {
            "id": self.id,
            "label": self.label,
            "title": self.title,
            "description": self.description,
            "image_uri": self.image_uri,
        }
        if self.retailer is not None:
            out["retailer"] = self.retailer
        if self.price is not None:
            out["price"] = self.price
        return out


def parse_record(obj: object) -> ProductRecord:
    """Validate one decoded catalog object; unknown fields are ignored."""
    if not isinstance(obj, dict):
        raise MalformedRecordError("record must be a JSON object")
    def text(name: str) -> str:
        value = obj.get(name, "")
        if value is None:
            return ""
        if not isinstance(value, str):
            raise MalformedRecordError(f"field {name!r} must be a string")
        return value

    record_id = text("id").strip()
    if not record_id:
        raise MissingFieldError("id")
    label = text("label").strip()
    if not label:
        raise MissingFieldError("label")
    if not analyze(label):
        raise MalformedRecordError(f"label {label!r} yields no tokens")
    title = text("title")
    description = text("description")
    if not (title.strip() or description.strip()):
        raise MissingFieldError("title or description")
    retailer = obj.get("retailer")
    if retailer is not None and not isinstance(retailer, str):
        raise MalformedRecordError("field 'retailer' must be a string")
    price = obj.get("price")
    if price is not None:
        if not isinstance(price, (int, float)) or isinstance(price, bool) or not math.isfinite(price):
            raise MalformedRecordError("field 'price' must be a finite number")
        if price < 0:
            raise MalformedRecordError("field 'price' must be non-negative")
        price = float(price)
    return ProductRecord(
        id=record_id,
        label=label,
        title=title,
        description=description,
        image_uri=text("image_uri"),
        retailer=retailer,
        price=price,
    )


@dataclass
class IngestReport:
    accepted: int = 0
    rejected: list[tuple[int, str]] = field(default_factory=list)
    clusters_touched: set[str] = field(default_factory=set)

    def to_dict(self) -> dict:
        return {
            "accepted": self.accepted,
            "rejected": [{"line": n, "reason": r} for n, r in self.rejected],
            "clusters_touched": sorted(self.clusters_touched),
        }


class CatalogStore:
    """In-memory product store with one search cluster per normalized label."""

    def __init__(self, params: ScoringParams | None = None):
        self.params = params or ScoringParams()
        self._records: dict[str, ProductRecord] = {}
        self._clusters: dict[str, ClusterIndex] = {}
        self._log: list[str] = []  # accepted records, ingest order, NDJSON lines
        self._lock = _RWLock()

    # -- ingestion -------------------------------------------------------

    def upsert(self, record: ProductRecord) -> str:
        """Insert or replace one record; returns the cluster it routed to."""
        self._lock.acquire_write()
        try:
            target = self._upsert_unlocked(record)
            self._log.append(json.dumps(record.to_dict(), sort_keys=True))
            return target
        finally:
            self._lock.release_write()

    def _upsert_unlocked(self, record: ProductRecord) -> str:
        target = record.cluster
        old = self._records.get(record.id)
        if old is not None:
            old_cluster = old.cluster
            idx = self._clusters[old_cluster]
            idx.remove(record.id)
            if idx.doc_count == 0:
                del self._clusters[old_cluster]
        index = self._clusters.get(target)
        if index is None:
            index = self._clusters[target] = ClusterIndex(target)
        index.add(record.id, record.indexed_text)
        self._records[record.id] = record
        return target

    def ingest_lines(self, lines: Iterable[str]) -> IngestReport:
        """Ingest NDJSON lines; invalid records are rejected, the rest continue."""
        report = IngestReport()
        for line_number, line in enumerate(lines, start=1):
            if not line.strip():
                continue  # blank lines are not records
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                report.rejected.append((line_number, f"invalid JSON: {exc.msg}"))
                continue
            try:
                record = parse_record(obj)
            except (MissingFieldError, MalformedRecordError) as exc:
                report.rejected.append((line_number, str(exc)))
                continue
            self._lock.acquire_write()
            try:
                target = self._upsert_unlocked(record)
                self._log.append(json.dumps(record.to_dict(), sort_keys=True))
            finally:
                self._lock.release_write()
            report.accepted += 1
            report.clusters_touched.add(target)
        return report

    def ingest_file(self, path: str | Path) -> IngestReport:
        try:
            with open(path, "r", encoding="utf-8") as handle:
                return self.ingest_lines(handle)
        except OSError as exc:
            raise UnreadableSourceError(f"cannot read {path}: {exc}") from exc

    # -- lookup ----------------------------------------------------------

    def get(self, product_id: str) -> ProductRecord:
        self._lock.acquire_read()
        try:
            record = self._records.get(product_id)
        finally:
            self._lock.release_read()
        if record is None:
            raise NotFoundError(product_id)
        return record

    def __len__(self) -> int:
        return len(self._records)

    def list_clusters(self) -> list[tuple[str, int]]:
        """Non-empty clusters with document counts, sorted by name."""
        self._lock.acquire_read()
        try:
            return sorted(
                (name, idx.doc_count)
                for name, idx in self._clusters.items()
                if idx.doc_count > 0
            )
        finally:
            self._lock.release_read()

    def cluster(self, name: str) -> ClusterIndex | None:
        self._lock.acquire_read()
        try:
            return self._clusters.get(name)
        finally:
            self._lock.release_read()

    # -- search ----------------------------------------------------------

    def search_cluster(self, name: str, query_text: str, top_k: int) -> list[ScoredHit]:
        index = self.cluster(name)
        if index is None or index.doc_count == 0:
            raise UnknownClusterError(name)
        return index.search(self.params, query_text, top_k)

    def search_all(self, query_text: str, top_k: int) -> list[ScoredHit]:
        """Search every cluster and merge (score desc, doc_id asc).

        Scores come from each cluster's own statistics; this is the
        fallback path when a routed cluster does not exist.
        """
        self._lock.acquire_read()
        try:
            indexes = list(self._clusters.values())
        finally:
            self._lock.release_read()
        return merge_ranked(
            (idx.search(self.params, query_text, top_k) for idx in indexes if idx.doc_count),
            top_k,
        )

    def search_routed(
        self, name: str, query_text: str, top_k: int, fallback: bool
    ) -> tuple[list[ScoredHit], bool]:
        """Search the routed cluster, falling back to all clusters if allowed.

        Returns (hits, fallback_used). Raises UnknownClusterError when the
        cluster is absent/empty and fallback is disabled.
        """
        try:
            return self.search_cluster(name, query_text, top_k), False
        except UnknownClusterError:
            if not fallback:
                raise
            return self.search_all(query_text, top_k), True

    # -- persistence -----------------------------------------------------

    def save(self, directory: str | Path) -> None:
        """Write the record log, per-cluster snapshots and a manifest."""
        root = Path(directory)
        clusters_dir = root / "clusters"
        clusters_dir.mkdir(parents=True, exist_ok=True)
        for stale in clusters_dir.glob("*.json"):
            stale.unlink()
        self._lock.acquire_read()
        try:
            (root / "records.ndjson").write_text(
                "".join(line + "\n" for line in self._log), encoding="utf-8"
            )
            names = []
            for name, idx in sorted(self._clusters.items()):
                payload = snapshot_payload(idx, self.params)
                (clusters_dir / f"{name}.json").write_text(
                    json.dumps(payload), encoding="utf-8"
                )
                names.append(name)
            manifest = {
                "format": STORE_FORMAT,
                "version": STORE_VERSION,
                "params": self.params.as_dict(),
                "clusters": names,
                "records": len(self._records),
            }
            (root / "manifest.json").write_text(json.dumps(manifest, indent=2), encoding="utf-8")
        finally:
            self._lock.release_read()

    @classmethod
    def load(cls, directory: str | Path) -> "CatalogStore":
        """Load from snapshots (fast path) with the record log for lookups."""
        root = Path(directory)
        manifest_path = root / "manifest.json"
        if not manifest_path.exists():
            return cls.rebuild_from_log(root / "records.ndjson")
        try:
            manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
            if manifest.get("format") != STORE_FORMAT or manifest.get("version") != STORE_VERSION:
                raise CorruptSnapshotError(f"unsupported store manifest at {manifest_path}")
            store = cls(ScoringParams(**manifest["params"]))
            for name in manifest["clusters"]:
                payload = json.loads(
                    (root / "clusters" / f"{name}.json").read_text(encoding="utf-8")
                )
                index, _params = restore_payload(payload)
                store._clusters[name] = index
        except (OSError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise CorruptSnapshotError(f"cannot load store at {root}: {exc}") from exc
        store._replay_records(root / "records.ndjson")
        return store

    @classmethod
    def rebuild_from_log(cls, log_path: str | Path) -> "CatalogStore":
        """Reconstruct the full store (records and indexes) from the log alone."""
        store = cls()
        path = Path(log_path)
        if path.exists():
            store.ingest_file(path)
        return store

    def _replay_records(self, log_path: Path) -> None:
        if not log_path.exists():
            return
        for line in log_path.read_text(encoding="utf-8").splitlines():
            if not line.strip():
                continue
            record = parse_record(json.loads(line))
            self._records[record.id] = record
            self._log.append(line)


STORE_SNAPSHOT_FORMAT = "stylesearch.store-snapshot"


def store_snapshot_save(store: CatalogStore, sink: str | Path) -> None:
    """Write the whole store (records + every cluster) as one checksummed file."""
    import hashlib

    store._lock.acquire_read()
    try:
        payload = {
            "params": store.params.as_dict(),
            "records": [json.loads(line) for line in store._log],
            "clusters": {
                name: snapshot_payload(idx, store.params)
                for name, idx in sorted(store._clusters.items())
            },
        }
    finally:
        store._lock.release_read()
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    container = {
        "format": STORE_SNAPSHOT_FORMAT,
        "version": STORE_VERSION,
        "checksum": hashlib.sha256(canonical).hexdigest(),
        "payload": payload,
    }
    Path(sink).write_text(json.dumps(container), encoding="utf-8")


def store_snapshot_load(source: str | Path) -> CatalogStore:
    import hashlib

    try:
        container = json.loads(Path(source).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise CorruptSnapshotError(f"cannot read store snapshot {source}: {exc}") from exc
    if not isinstance(container, dict) or container.get("format") != STORE_SNAPSHOT_FORMAT:
        raise CorruptSnapshotError("not a store snapshot")
    if container.get("version") != STORE_VERSION:
        raise CorruptSnapshotError(f"unsupported snapshot version {container.get('version')!r}")
    payload = container.get("payload")
    if not isinstance(payload, dict):
        raise CorruptSnapshotError("store snapshot payload missing")
    canonical = json.dumps(payload, sort_keys=True, separators=(",", ":")).encode("utf-8")
    if hashlib.sha256(canonical).hexdigest() != container.get("checksum"):
        raise CorruptSnapshotError("store snapshot checksum mismatch")
    try:
        store = CatalogStore(ScoringParams(**payload["params"]))
        for name, cluster_payload in payload["clusters"].items():
            index, _params = restore_payload(cluster_payload)
            store._clusters[name] = index
        for obj in payload["records"]:
            record = parse_record(obj)
            store._records[record.id] = record
            store._log.append(json.dumps(record.to_dict(), sort_keys=True))
    except (KeyError, TypeError, ValueError) as exc:
        raise CorruptSnapshotError(f"malformed store snapshot: {exc}") from exc
    return store


def iter_ndjson(path: str | Path) -> Iterator[dict]:
    """Yield decoded objects from an NDJSON file (skips blank lines)."""
    try:
        with open(path, "r", encoding="utf-8") as handle:
            for line in handle:
                if line.strip():
                    yield json.loads(line)
    except OSError as exc:
        raise UnreadableSourceError(f"cannot read {path}: {exc}") from exc
