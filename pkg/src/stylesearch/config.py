"""Application configuration with layered precedence.

Values merge as flags > environment > config file > defaults. The config
file is JSON; environment variables use the STYLESEARCH_ prefix with the
upper-cased field name (e.g. STYLESEARCH_TOP_K=5).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

from .index import ScoringParams
from .pipeline import PipelineConfig

ENV_PREFIX = "STYLESEARCH_"


@dataclass
class AppConfig:
    store_dir: str = "./store"
    fixtures_dir: str | None = None
    remote_url: str | None = None
    taxonomy_path: str | None = None
    top_k: int = 10
    k1: float = 1.2
    b: float = 0.75
    proximity_weight: float = 0.0
    confidence_threshold: float = 0.25
    fallback_all_clusters: bool = True
    pad_frac: float = 0.0
    parallelism: int = 1
    max_in_flight: int = 8
    port: int = 8000

    @property
    def scoring(self) -> ScoringParams:
        return ScoringParams(k1=self.k1, b=self.b, proximity_weight=self.proximity_weight)

    @property
    def pipeline(self) -> PipelineConfig:
        return PipelineConfig(
            top_k=self.top_k,
            scoring=self.scoring,
            confidence_threshold=self.confidence_threshold,
            fallback_all_clusters=self.fallback_all_clusters,
            pad_frac=self.pad_frac,
            parallelism=self.parallelism,
        )


_BOOL_TRUE = {"1", "true", "yes", "on"}
_BOOL_FALSE = {"0", "false", "no", "off"}


def _coerce(name: str, kind: type, value: Any) -> Any:
    if value is None:
        return None
    if kind is bool:
        if isinstance(value, bool):
            return value
        text = str(value).strip().lower()
        if text in _BOOL_TRUE:
            return True
        if text in _BOOL_FALSE:
            return False
        raise ValueError(f"config field {name!r}: cannot parse boolean from {value!r}")
    if kind is int:
        return int(value)
    if kind is float:
        return float(value)
    return str(value)


_FIELD_TYPES = {
    "store_dir": str, "fixtures_dir": str, "remote_url": str, "taxonomy_path": str,
    "top_k": int, "k1": float, "b": float, "proximity_weight": float,
    "confidence_threshold": float, "fallback_all_clusters": bool, "pad_frac": float,
    "parallelism": int, "max_in_flight": int, "port": int,
}


def load_config(
    config_file: str | Path | None = None,
    env: Mapping[str, str] | None = None,
    overrides: Mapping[str, Any] | None = None,
) -> AppConfig:
    env = os.environ if env is None else env
    merged: dict[str, Any] = {}
    if config_file is not None:
        data = json.loads(Path(config_file).read_text(encoding="utf-8"))
        if not isinstance(data, dict):
            raise ValueError("config file must hold a JSON object")
        for key, value in data.items():
            if key in _FIELD_TYPES:
                merged[key] = _coerce(key, _FIELD_TYPES[key], value)
    for key, kind in _FIELD_TYPES.items():
        env_value = env.get(ENV_PREFIX + key.upper())
        if env_value is not None:
            merged[key] = _coerce(key, kind, env_value)
    if overrides:
        for key, value in overrides.items():
            if value is not None and key in _FIELD_TYPES:
                merged[key] = _coerce(key, _FIELD_TYPES[key], value)
    known = {f.name for f in fields(AppConfig)}
    return AppConfig(**{k: v for k, v in merged.items() if k in known})
