"""Deterministic synthetic catalog generator for scale tests and demos."""

from __future__ import annotations

import json
import random
from typing import Iterator

from .taxonomy import Taxonomy, load_default_taxonomy

_COLORS = [
    "black", "white", "navy", "olive", "charcoal", "burgundy", "cream",
    "mustard", "teal", "rust", "lavender", "khaki", "crimson", "slate",
]
_MATERIALS = [
    "cotton", "linen", "wool", "denim", "corduroy", "fleece", "silk",
    "leather", "suede", "jersey", "twill", "canvas",
]
_PATTERNS = [
    "striped", "plaid", "floral", "herringbone", "houndstooth", "solid",
    "checked", "paisley", "geometric", "marled",
]
_FITS = [
    "slim", "relaxed", "tailored", "oversized", "cropped", "boxy",
    "tapered", "straight", "fitted",
]
_DETAILS = [
    "button front", "zip pocket", "ribbed cuffs", "drawstring waist",
    "patch pockets", "contrast stitching", "raw hem", "pleated front",
    "notched collar", "elastic waistband",
]


def generate_products(
    n: int, seed: int = 2024, taxonomy: Taxonomy | None = None
) -> Iterator[dict]:
    """Yield exactly ``n`` catalog records, reproducibly for a given seed."""
    taxonomy = taxonomy or load_default_taxonomy()
    labels = taxonomy.all_labels()
    rng = random.Random(seed)
    for i in range(n):
        label = rng.choice(labels)
        color = rng.choice(_COLORS)
        material = rng.choice(_MATERIALS)
        pattern = rng.choice(_PATTERNS)
        fit = rng.choice(_FITS)
        detail = rng.choice(_DETAILS)
        yield {
            "id": f"p{i:06d}",
            "label": label,
            "title": f"{color} {pattern} {label}",
            "description": f"{fit} {label} in {color} {material} with {detail}",
            "image_uri": f"https://img.example/p{i:06d}.jpg",
            "retailer": f"retailer_{rng.randrange(40):02d}",
            "price": round(rng.uniform(9.0, 399.0), 2),
        }


def generate_catalog_lines(n: int, seed: int = 2024) -> Iterator[str]:
    for record in generate_products(n, seed):
        yield json.dumps(record)
