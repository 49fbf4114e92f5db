"""Model capability contracts: detection, embedding, captioning.

Two interchangeable implementations of the same ProviderBundle surface:

* FixtureProviders — pure functions of three JSON files in a fixtures
  directory (detections.json, embeddings.json, captions.json). Identical
  inputs give byte-identical outputs, which makes every downstream test
  hermetic.
* RemoteProviders — thin HTTP client for an inference sidecar speaking the
  wire contract (POST /detect, /embed_image, /embed_text, /caption; bodies
  mirror the fixture schemas, see schemas/ in the repo).

Detection post-processing lives here, not in the pipeline: a configurable
confidence threshold (default 0.25), defensive same-class dedupe at
IoU > 0.7, bound clamping and the (confidence desc, x1, y1) total order
are applied inside detect() so every consumer sees the same detections.
"""

from __future__ import annotations

import base64
import json
import math
import threading
from dataclasses import dataclass
from pathlib import Path

import httpx

from .errors import (
    DegenerateBoxError,
    DimensionMismatchError,
    EmptyCaptionError,
    MalformedResponseError,
    MissingCaptionError,
    MissingEmbeddingError,
    MissingFixtureError,
    RemoteUnavailableError,
    UnknownClassError,
)
from .geometry import BoundingBox, clamp_box, iou, pad_box
from .taxonomy import GARMENT_CLASSES

DEFAULT_CONFIDENCE_THRESHOLD = 0.25
DEDUPE_IOU_THRESHOLD = 0.7


@dataclass(frozen=True)
class ImageRef:
    """Reference to an input image; pixels stay outside this package."""

    uri: str
    width: int
    height: int
    data: bytes | None = None  # raw bytes, only needed in remote mode

    def __post_init__(self) -> None:
        if self.width <= 0 or self.height <= 0:
            raise ValueError("image dimensions must be positive")

    @property
    def image_id(self) -> str:
        """Fixture lookup key: the path stem (``fixtures/img_001.jpg`` -> ``img_001``)."""
        name = self.uri.replace("\\", "/").rsplit("/", 1)[-1]
        return name.rsplit(".", 1)[0] if "." in name else name


@dataclass(frozen=True)
class Detection:
    garment_class: str
    confidence: float
    box: BoundingBox

    def __post_init__(self) -> None:
        if self.garment_class not in GARMENT_CLASSES:
            raise UnknownClassError(self.garment_class)
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True)
class Embedding:
    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise ValueError("embedding must be non-empty")
        if not all(math.isfinite(v) for v in self.values):
            raise ValueError("embedding contains non-finite values")

    @property
    def dim(self) -> int:
        return len(self.values)


def crop_rect(img: ImageRef, box: BoundingBox, pad_frac: float = 0.0) -> BoundingBox:
    """Expand a detection box by pad_frac per side, clamped to the image.

    Idempotent at pad_frac = 0 for in-bounds boxes. Raises DegenerateBoxError
    when the padded box does not intersect the image.
    """
    return clamp_box(pad_box(box, pad_frac), img.width, img.height)


def _postprocess_detections(
    raw: list[dict], img: ImageRef, confidence_threshold: float
) -> list[Detection]:
    """Shared detect() contract: validate, clamp, threshold, dedupe, order."""
    detections: list[Detection] = []
    for entry in raw:
        try:
            cls = entry["class"]
            conf = float(entry["confidence"])
            x1, y1, x2, y2 = (float(v) for v in entry["box"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedResponseError(f"bad detection entry {entry!r}: {exc}") from exc
        if conf < confidence_threshold:
            continue
        try:
            box = clamp_box(BoundingBox(x1, y1, x2, y2), img.width, img.height)
        except (ValueError, DegenerateBoxError):
            continue  # no overlap with the image: nothing croppable
        detections.append(Detection(garment_class=cls, confidence=conf, box=box))
    detections.sort(key=lambda d: (-d.confidence, d.box.x1, d.box.y1))
    kept: list[Detection] = []
    for det in detections:
        duplicate = any(
            k.garment_class == det.garment_class and iou(k.box, det.box) > DEDUPE_IOU_THRESHOLD
            for k in kept
        )
        if not duplicate:
            kept.append(det)
    return kept


class ProviderBundle:
    """Common surface of fixture and remote providers."""

    def detect(self, img: ImageRef) -> list[Detection]:
        raise NotImplementedError

    def embed_image(
        self,
        crop_key: str,
        *,
        image: ImageRef | None = None,
        box: BoundingBox | None = None,
    ) -> Embedding:
        raise NotImplementedError

    def embed_texts(self, texts: list[str]) -> list[Embedding]:
        raise NotImplementedError

    def caption(
        self,
        crop_key: str,
        prompt: str,
        *,
        image: ImageRef | None = None,
        box: BoundingBox | None = None,
    ) -> str:
        raise NotImplementedError


class FixtureProviders(ProviderBundle):
    """Deterministic file-backed providers.

    Directory layout::

        <dir>/detections.json   [{image, width, height, detections: [...]}, ...]
        <dir>/embeddings.json   {"dim": d, "vectors": {key: [d floats]}}
        <dir>/captions.json     {crop_key: caption text}

    Embedding keys are "<image_id>_crop<i>" for crops (i indexes the
    surviving detections in detect() order) and the raw label text for
    label embeddings.
    """

    def __init__(
        self,
        fixtures_dir: str | Path,
        confidence_threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
    ):
        root = Path(fixtures_dir)
        self.confidence_threshold = confidence_threshold
        self._detections: dict[str, dict] = {}
        for doc in _load_json(root / "detections.json", default=[]):
            self._detections[doc["image"]] = doc
        emb = _load_json(root / "embeddings.json", default={"dim": 0, "vectors": {}})
        self._dim: int = int(emb.get("dim", 0))
        self._vectors: dict[str, list[float]] = emb.get("vectors", {})
        self._captions: dict[str, str] = _load_json(root / "captions.json", default={})

    @property
    def embedding_dim(self) -> int:
        return self._dim

    def detect(self, img: ImageRef) -> list[Detection]:
        doc = self._detections.get(img.image_id)
        if doc is None:
            raise MissingFixtureError(img.image_id)
        return _postprocess_detections(doc["detections"], img, self.confidence_threshold)

    def image_ref(self, image_id: str) -> ImageRef:
        """ImageRef for a fixture image, using the recorded dimensions."""
        doc = self._detections.get(image_id)
        if doc is None:
            raise MissingFixtureError(image_id)
        return ImageRef(uri=image_id, width=int(doc["width"]), height=int(doc["height"]))

    def image_ids(self) -> list[str]:
        return sorted(self._detections)

    def _vector(self, key: str) -> Embedding:
        values = self._vectors.get(key)
        if values is None:
            raise MissingEmbeddingError(key)
        if len(values) != self._dim:
            raise DimensionMismatchError(
                f"vector {key!r} has dim {len(values)}, file declares {self._dim}"
            )
        return Embedding(tuple(float(v) for v in values))

    def embed_image(self, crop_key, *, image=None, box=None) -> Embedding:
        return self._vector(crop_key)

    def embed_texts(self, texts: list[str]) -> list[Embedding]:
        return [self._vector(t) for t in texts]

    def caption(self, crop_key, prompt, *, image=None, box=None) -> str:
        text = self._captions.get(crop_key)
        if text is None:
            raise MissingCaptionError(crop_key)
        if not text.strip():
            raise EmptyCaptionError(f"stored caption for {crop_key!r} is empty")
        return text


class RemoteProviders(ProviderBundle):
    """Client for the inference-sidecar wire contract.

    In-flight requests are bounded (default 8). Non-2xx responses and
    transport failures raise RemoteUnavailableError; schema violations
    raise MalformedResponseError.
    """

    def __init__(
        self,
        base_url: str,
        confidence_threshold: float = DEFAULT_CONFIDENCE_THRESHOLD,
        max_in_flight: int = 8,
        timeout: float = 30.0,
        transport: httpx.BaseTransport | None = None,
    ):
        self.base_url = base_url.rstrip("/")
        self.confidence_threshold = confidence_threshold
        self._semaphore = threading.BoundedSemaphore(max_in_flight)
        self._client = httpx.Client(
            base_url=self.base_url, timeout=timeout, transport=transport
        )
        self._dim: int | None = None
        self._dim_lock = threading.Lock()

    def close(self) -> None:
        self._client.close()

    def _post(self, path: str, body: dict) -> dict:
        with self._semaphore:
            try:
                response = self._client.post(path, json=body)
            except httpx.HTTPError as exc:
                raise RemoteUnavailableError(f"POST {path} failed: {exc}") from exc
        if response.status_code < 200 or response.status_code >= 300:
            raise RemoteUnavailableError(
                f"POST {path} returned {response.status_code}"
            )
        try:
            payload = response.json()
        except (json.JSONDecodeError, ValueError) as exc:
            raise MalformedResponseError(f"POST {path}: body is not JSON") from exc
        if not isinstance(payload, dict):
            raise MalformedResponseError(f"POST {path}: expected JSON object")
        return payload

    def _check_dim(self, dim: int) -> None:
        with self._dim_lock:
            if self._dim is None:
                self._dim = dim
            elif self._dim != dim:
                raise DimensionMismatchError(
                    f"sidecar returned dim {dim}, expected {self._dim}"
                )

    @staticmethod
    def _image_body(image: ImageRef | None, box: BoundingBox | None) -> dict:
        if image is None or image.data is None:
            raise RemoteUnavailableError("remote provider needs image bytes")
        body: dict = {
            "image": base64.b64encode(image.data).decode("ascii"),
            "width": image.width,
            "height": image.height,
        }
        if box is not None:
            body["box"] = box.as_list()
        return body

    def detect(self, img: ImageRef) -> list[Detection]:
        payload = self._post("/detect", self._image_body(img, None))
        raw = payload.get("detections")
        if not isinstance(raw, list):
            raise MalformedResponseError("/detect response missing 'detections' list")
        return _postprocess_detections(raw, img, self.confidence_threshold)

    def embed_image(self, crop_key, *, image=None, box=None) -> Embedding:
        payload = self._post("/embed_image", self._image_body(image, box))
        try:
            values = [float(v) for v in payload["values"]]
            dim = int(payload["dim"])
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedResponseError(f"/embed_image response: {exc}") from exc
        if len(values) != dim:
            raise DimensionMismatchError(f"declared dim {dim}, got {len(values)} values")
        self._check_dim(dim)
        return Embedding(tuple(values))

    def embed_texts(self, texts: list[str]) -> list[Embedding]:
        payload = self._post("/embed_text", {"texts": list(texts)})
        try:
            dim = int(payload["dim"])
            vectors = payload["vectors"]
        except (KeyError, TypeError, ValueError) as exc:
            raise MalformedResponseError(f"/embed_text response: {exc}") from exc
        if not isinstance(vectors, list) or len(vectors) != len(texts):
            raise MalformedResponseError(
                f"/embed_text returned {len(vectors)} vectors for {len(texts)} texts"
            )
        out: list[Embedding] = []
        for vec in vectors:
            values = tuple(float(v) for v in vec)
            if len(values) != dim:
                raise DimensionMismatchError(f"declared dim {dim}, got {len(values)}")
            out.append(Embedding(values))
        self._check_dim(dim)
        return out

    def caption(self, crop_key, prompt, *, image=None, box=None) -> str:
        body = self._image_body(image, box)
        body["prompt"] = prompt
        payload = self._post("/caption", body)
        text = payload.get("text")
        if not isinstance(text, str):
            raise MalformedResponseError("/caption response missing 'text'")
        if not text.strip():
            raise EmptyCaptionError("sidecar returned an empty caption")
        return text


def _load_json(path: Path, default):
    if not path.exists():
        return default
    return json.loads(path.read_text(encoding="utf-8"))
