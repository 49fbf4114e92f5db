"""End-to-end recommendation flow.

One input image fans out into per-detection groups: crop the detection,
embed the crop, zero-shot classify it against the subcategories of its
detected class, caption it with the label prompt, build a match query from
label + caption body, and rank products in the label's cluster. Groups are
independent: a provider failure inside one group is recorded on that group
and never disturbs the others.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from .analysis import cluster_name
from .catalog import CatalogStore, ProductRecord
from .errors import StyleSearchError, UnknownClusterError
from .index import ScoredHit, ScoringParams
from .providers import Detection, ImageRef, ProviderBundle, crop_rect
from .taxonomy import Taxonomy
from .vision import (
    Caption,
    ClassificationResult,
    DEFAULT_LABEL_PROMPT_TEMPLATE,
    build_prompt,
    classify,
    finalize_caption,
)

STATUS_OK = "ok"
STATUS_NO_DETECTIONS = "no_detections"


@dataclass(frozen=True)
class PipelineConfig:
    top_k: int = 10
    scoring: ScoringParams = field(default_factory=ScoringParams)
    confidence_threshold: float = 0.25
    fallback_all_clusters: bool = True
    pad_frac: float = 0.0
    label_prompt_template: str = DEFAULT_LABEL_PROMPT_TEMPLATE
    parallelism: int = 1

    def __post_init__(self) -> None:
        if self.top_k < 1:
            raise ValueError("top_k must be >= 1")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")


@dataclass
class RankedProduct:
    hit: ScoredHit
    product: ProductRecord


@dataclass
class RecommendationGroup:
    detection: Detection
    crop_key: str
    assigned_label: str | None = None
    classification: ClassificationResult | None = None
    caption: Caption | None = None
    cluster: str | None = None
    query_text: str | None = None
    hits: list[RankedProduct] = field(default_factory=list)
    fallback: bool = False
    error: str | None = None


@dataclass
class RecommendationResult:
    image_id: str
    status: str
    groups: list[RecommendationGroup]


def split_counts(total: int, train_fraction: float) -> tuple[int, int]:
    """Train/holdout sizes: floor(total * fraction) and the remainder."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    train = math.floor(total * train_fraction)
    return train, total - train


def build_query(label: str, caption: Caption) -> tuple[str, str]:
    """Cluster routing key and match-query text for one classified item.

    The query is label + caption body; the prompt boilerplate stays out
    (with no stopword removal, "this ... features" would match everywhere)
    and label tokens appear exactly once.
    """
    return cluster_name(label), f"{label} {caption.body}"


def recommend(
    img: ImageRef,
    providers: ProviderBundle,
    taxonomy: Taxonomy,
    store: CatalogStore,
    cfg: PipelineConfig | None = None,
) -> RecommendationResult:
    """Run the full flow for one image; one group per surviving detection."""
    cfg = cfg or PipelineConfig()
    detections = providers.detect(img)
    if not detections:
        return RecommendationResult(img.image_id, STATUS_NO_DETECTIONS, [])

    def run_group(item: tuple[int, Detection]) -> RecommendationGroup:
        i, det = item
        group = RecommendationGroup(detection=det, crop_key=f"{img.image_id}_crop{i}")
        try:
            box = crop_rect(img, det.box, cfg.pad_frac)
            crop_emb = providers.embed_image(group.crop_key, image=img, box=box)
            labels = taxonomy.subcategories(det.garment_class)
            texts = [cfg.label_prompt_template.format(label=lab) for lab in labels]
            label_embs = providers.embed_texts(texts)
            group.classification = classify(crop_emb, list(zip(labels, label_embs)))
            group.assigned_label = group.classification.label
            prompt = build_prompt(group.assigned_label)
            generated = providers.caption(group.crop_key, prompt, image=img, box=box)
            group.caption = finalize_caption(group.assigned_label, prompt, generated)
            group.cluster, group.query_text = build_query(group.assigned_label, group.caption)
            try:
                hits, group.fallback = store.search_routed(
                    group.cluster, group.query_text, cfg.top_k,
                    fallback=cfg.fallback_all_clusters,
                )
            except UnknownClusterError as exc:
                group.error = str(exc)
                return group
            group.hits = [RankedProduct(hit=h, product=store.get(h.doc_id)) for h in hits]
        except StyleSearchError as exc:
            group.error = str(exc)
        return group

    items = list(enumerate(detections))
    if cfg.parallelism > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=cfg.parallelism) as pool:
            groups = list(pool.map(run_group, items))  # map preserves detection order
    else:
        groups = [run_group(item) for item in items]
    return RecommendationResult(img.image_id, STATUS_OK, groups)


# -- wire/document form ------------------------------------------------------


def result_to_dict(result: RecommendationResult) -> dict:
    """Stable output schema consumed by the CLI, the service and the UI."""
    return {
        "image": result.image_id,
        "status": result.status,
        "groups": [_group_to_dict(g) for g in result.groups],
    }


def _group_to_dict(group: RecommendationGroup) -> dict:
    out: dict = {
        "detection": {
            "class": group.detection.garment_class,
            "confidence": group.detection.confidence,
            "box": group.detection.box.as_list(),
        },
        "crop_key": group.crop_key,
        "assigned_label": group.assigned_label,
        "cluster": group.cluster,
        "query_text": group.query_text,
        "fallback": group.fallback,
        "error": group.error,
        "hits": [
            {
                "id": rp.product.id,
                "score": rp.hit.score,
                "label": rp.product.label,
                "title": rp.product.title,
                "description": rp.product.description,
                "image_uri": rp.product.image_uri,
                "retailer": rp.product.retailer,
                "price": rp.product.price,
                "explanation": {
                    "terms": [
                        {
                            "term": t.term,
                            "idf": t.idf,
                            "tf_component": t.tf_component,
                            "contribution": t.contribution,
                        }
                        for t in rp.hit.explanation
                    ],
                    "proximity_bonus": rp.hit.proximity_bonus,
                },
            }
            for rp in group.hits
        ],
    }
    if group.classification is not None:
        out["classification"] = {
            "label": group.classification.label,
            "score": group.classification.score,
            "ranked": [[label, score] for label, score in group.classification.ranked],
        }
    else:
        out["classification"] = None
    if group.caption is not None:
        out["caption"] = {
            "label": group.caption.label,
            "prompt": group.caption.prompt,
            "body": group.caption.body,
            "full_text": group.caption.full_text,
        }
    else:
        out["caption"] = None
    return out
