"""stylesearch: visually-aware product recommendation.

Detected garments are cropped, zero-shot labeled by embedding similarity,
captioned with a steering prompt, and matched against a label-sharded
product catalog ranked by Okapi BM25.
"""

from .analysis import analyze, cluster_name
from .catalog import CatalogStore, IngestReport, ProductRecord
from .geometry import BoundingBox, iou
from .index import ClusterIndex, ScoredHit, ScoringParams, snapshot_load, snapshot_save
from .metrics import (
    MatchCounts,
    PRPoint,
    match_detections,
    mrr,
    pr_curve,
    precision_at_k,
    precision_recall_f1,
    recall_at_k,
)
from .pipeline import (
    PipelineConfig,
    RecommendationGroup,
    RecommendationResult,
    build_query,
    recommend,
    result_to_dict,
    split_counts,
)
from .providers import (
    Detection,
    Embedding,
    FixtureProviders,
    ImageRef,
    ProviderBundle,
    RemoteProviders,
    crop_rect,
)
from .taxonomy import GARMENT_CLASSES, Taxonomy, classes, load_default_taxonomy, load_taxonomy
from .vision import (
    Caption,
    ClassificationResult,
    build_prompt,
    classify,
    cosine,
    finalize_caption,
)

__version__ = "0.1.0"

__all__ = [
    "analyze", "cluster_name",
    "CatalogStore", "IngestReport", "ProductRecord",
    "BoundingBox", "iou",
    "ClusterIndex", "ScoredHit", "ScoringParams", "snapshot_load", "snapshot_save",
    "MatchCounts", "PRPoint", "match_detections", "mrr", "pr_curve",
    "precision_at_k", "precision_recall_f1", "recall_at_k",
    "PipelineConfig", "RecommendationGroup", "RecommendationResult",
    "build_query", "recommend", "result_to_dict", "split_counts",
    "Detection", "Embedding", "FixtureProviders", "ImageRef",
    "ProviderBundle", "RemoteProviders", "crop_rect",
    "GARMENT_CLASSES", "Taxonomy", "classes", "load_default_taxonomy", "load_taxonomy",
    "Caption", "ClassificationResult", "build_prompt", "classify",
    "cosine", "finalize_caption",
    "__version__",
]
