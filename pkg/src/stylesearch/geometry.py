"""Bounding-box geometry: validation, clamping, padding, overlap."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateBoxError


@dataclass(frozen=True)
class BoundingBox:
    """Axis-aligned pixel box, origin top-left; x1 < x2 and y1 < y2."""

    x1: float
    y1: float
    x2: float
    y2: float

    def __post_init__(self) -> None:
        for v in (self.x1, self.y1, self.x2, self.y2):
            if not math.isfinite(v):
                raise ValueError(f"non-finite box coordinate: {v!r}")
        if not (self.x1 < self.x2 and self.y1 < self.y2):
            raise ValueError(
                f"degenerate box: ({self.x1}, {self.y1}, {self.x2}, {self.y2})"
            )

    @property
    def width(self) -> float:
        return self.x2 - self.x1

    @property
    def height(self) -> float:
        return self.y2 - self.y1

    @property
    def area(self) -> float:
        return self.width * self.height

    def as_list(self) -> list[float]:
        return [self.x1, self.y1, self.x2, self.y2]


def clamp_box(box: BoundingBox, width: float, height: float) -> BoundingBox:
    """Clamp ``box`` to [0, width] x [0, height].

    Raises DegenerateBoxError when the box does not overlap the image, so
    clamping would leave zero area.
    """
    x1 = min(max(box.x1, 0.0), width)
    y1 = min(max(box.y1, 0.0), height)
    x2 = min(max(box.x2, 0.0), width)
    y2 = min(max(box.y2, 0.0), height)
    if x1 >= x2 or y1 >= y2:
        raise DegenerateBoxError(
            f"box {box.as_list()} has zero area within a {width}x{height} image"
        )
    return BoundingBox(x1, y1, x2, y2)


def pad_box(box: BoundingBox, pad_frac: float) -> BoundingBox:
    """Expand the box by ``pad_frac`` of its own width/height on each side."""
    if pad_frac < 0:
        raise ValueError("pad_frac must be >= 0")
    dx = box.width * pad_frac
    dy = box.height * pad_frac
    return BoundingBox(box.x1 - dx, box.y1 - dy, box.x2 + dx, box.y2 + dy)


def iou(a: BoundingBox, b: BoundingBox) -> float:
    """Intersection-over-union of two boxes; 0.0 when disjoint."""
    ix1 = max(a.x1, b.x1)
    iy1 = max(a.y1, b.y1)
    ix2 = min(a.x2, b.x2)
    iy2 = min(a.y2, b.y2)
    if ix1 >= ix2 or iy1 >= iy2:
        return 0.0
    inter = (ix2 - ix1) * (iy2 - iy1)
    union = a.area + b.area - inter
    return inter / union
