"""Sidecar configuration."""

from __future__ import annotations

from dataclasses import dataclass, field

GARMENT_CLASSES = (
    "long_sleeve_top",
    "short_sleeve_top",
    "long_sleeve_outerwear",
    "trousers",
    "shorts",
)

#: Detector class names -> garment classes. Public detection checkpoints are
#: not trained on these five classes, so the mapping is deployment
#: configuration; unmapped detections are dropped.
DEFAULT_CLASS_MAP: dict[str, str] = {}


@dataclass
class SidecarConfig:
    port: int = 9000
    backend: str = "stub"  # "stub" (deterministic, no downloads) or "transformers"
    device: str = "cpu"
    embedding_dim: int = 16  # stub backend only; model backends use the model's dim
    detector_id: str = "torchvision/fasterrcnn_resnet50_fpn"
    embedder_id: str = "openai/clip-vit-base-patch32"
    captioner_id: str = "Salesforce/blip-image-captioning-base"
    class_map: dict[str, str] = field(default_factory=lambda: dict(DEFAULT_CLASS_MAP))
    seed: int = 0

    def __post_init__(self) -> None:
        if not 0 < self.port < 65536:
            raise ValueError(f"invalid port {self.port}")
        if self.backend not in ("stub", "transformers"):
            raise ValueError(f"unknown backend {self.backend!r}")
        if self.embedding_dim < 1:
            raise ValueError("embedding_dim must be >= 1")
        for name in ("detector_id", "embedder_id", "captioner_id"):
            if not getattr(self, name):
                raise ValueError(f"{name} must be non-empty")
