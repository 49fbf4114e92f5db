"""Garment class hierarchy.

Five fixed detection classes, each with a configurable list of subcategory
labels used for zero-shot classification. The class set is constant; the
subcategories ship with an editable default (data/default_taxonomy.json)
and can be overridden with any JSON document mapping every class name to a
non-empty list of labels.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import IO, Union

from .analysis import analyze, cluster_name
from .errors import (
    DuplicateLabelError,
    InvalidLabelError,
    MissingClassError,
    UnknownClassError,
)

#: Detection classes in their canonical order.
GARMENT_CLASSES: tuple[str, ...] = (
    "long_sleeve_top",
    "short_sleeve_top",
    "long_sleeve_outerwear",
    "trousers",
    "shorts",
)


def classes() -> list[str]:
    """The five garment classes, fixed order, independent of configuration."""
    return list(GARMENT_CLASSES)


@dataclass(frozen=True)
class Taxonomy:
    """Immutable class -> subcategory-label mapping; safe to share across threads."""

    entries: dict[str, tuple[str, ...]]

    def subcategories(self, garment_class: str) -> list[str]:
        try:
            return list(self.entries[garment_class])
        except KeyError:
            raise UnknownClassError(garment_class) from None

    def all_labels(self) -> list[str]:
        return [label for cls in GARMENT_CLASSES for label in self.entries[cls]]

    def to_mapping(self) -> dict[str, list[str]]:
        return {cls: list(self.entries[cls]) for cls in GARMENT_CLASSES}


def _validate(mapping: dict) -> Taxonomy:
    if not isinstance(mapping, dict):
        raise UnknownClassError(repr(mapping))
    for name in mapping:
        if name not in GARMENT_CLASSES:
            raise UnknownClassError(str(name))
    entries: dict[str, tuple[str, ...]] = {}
    for cls in GARMENT_CLASSES:
        if cls not in mapping:
            raise MissingClassError(cls)
        labels = mapping[cls]
        if not isinstance(labels, list) or not labels:
            raise MissingClassError(cls)
        seen: set[str] = set()
        for label in labels:
            if not isinstance(label, str) or not analyze(label):
                raise InvalidLabelError(cls, str(label))
            normalized = cluster_name(label)
            if normalized in seen:
                raise DuplicateLabelError(cls, label)
            seen.add(normalized)
        entries[cls] = tuple(labels)
    return Taxonomy(entries=entries)


Source = Union[str, Path, IO[str]]


def load_taxonomy(source: Source) -> Taxonomy:
    """Load and validate a taxonomy JSON document (path, file object or JSON text)."""
    if hasattr(source, "read"):
        text = source.read()  # type: ignore[union-attr]
    else:
        p = Path(source)  # type: ignore[arg-type]
        text = p.read_text(encoding="utf-8") if p.exists() else str(source)
    return _validate(json.loads(text))


def save_taxonomy(taxonomy: Taxonomy, sink: Source) -> None:
    text = json.dumps(taxonomy.to_mapping(), indent=2)
    if hasattr(sink, "write"):
        sink.write(text)  # type: ignore[union-attr]
    else:
        Path(sink).write_text(text, encoding="utf-8")  # type: ignore[arg-type]


def load_default_taxonomy() -> Taxonomy:
    """The taxonomy shipped with the package."""
    text = resources.files("stylesearch.data").joinpath("default_taxonomy.json").read_text("utf-8")
    return _validate(json.loads(text))
