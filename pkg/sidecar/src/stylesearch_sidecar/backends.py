"""Inference backends.

StubBackend is the default: a pure function of the request bytes built on
SHA-256, so it needs no model downloads and repeated identical requests
return identical bodies. TransformersBackend wires real checkpoints
(torchvision detection, CLIP embeddings, BLIP captioning) behind the same
interface with deterministic inference settings; it imports torch lazily
and is only constructed when configured.
"""

from __future__ import annotations

import hashlib
import io
import math
from dataclasses import dataclass

from .config import GARMENT_CLASSES, SidecarConfig

Box = tuple[float, float, float, float]


@dataclass
class RawDetection:
    cls: str
    confidence: float
    box: Box


class Backend:
    def detect(self, image: bytes, width: int, height: int) -> list[RawDetection]:
        raise NotImplementedError

    def embed_image(self, image: bytes, box: Box | None) -> list[float]:
        raise NotImplementedError

    def embed_texts(self, texts: list[str]) -> list[list[float]]:
        raise NotImplementedError

    def caption(self, image: bytes, box: Box | None, prompt: str) -> str:
        raise NotImplementedError

    @property
    def dim(self) -> int:
        raise NotImplementedError


def _digest_stream(*parts: bytes) -> "_ByteStream":
    return _ByteStream(hashlib.sha256(b"\x1f".join(parts)).digest())


class _ByteStream:
    """Endless deterministic byte source seeded by one digest."""

    def __init__(self, seed: bytes):
        self._seed = seed
        self._block = seed
        self._offset = 0

    def take(self, n: int) -> bytes:
        out = bytearray()
        while len(out) < n:
            if self._offset >= len(self._block):
                self._block = hashlib.sha256(self._block).digest()
                self._offset = 0
            out.append(self._block[self._offset])
            self._offset += 1
        return bytes(out)

    def unit_floats(self, n: int) -> list[float]:
        return [b / 127.5 - 1.0 for b in self.take(n)]


_STUB_FITS = ["slim", "relaxed", "boxy", "tapered", "cropped", "oversized", "fitted", "straight"]
_STUB_PATTERNS = ["plaid", "striped", "ribbed", "floral", "solid", "checked", "quilted", "marled"]
_STUB_COLORS = ["navy", "olive", "charcoal", "cream", "rust", "teal", "burgundy", "sand"]
_STUB_MATERIALS = ["cotton", "denim", "wool", "linen", "fleece", "corduroy", "jersey", "canvas"]


class StubBackend(Backend):
    """Deterministic hash-derived stand-in for the three models."""

    def __init__(self, config: SidecarConfig):
        self._dim = config.embedding_dim
        self._seed = config.seed.to_bytes(8, "big", signed=True)

    @property
    def dim(self) -> int:
        return self._dim

    def detect(self, image: bytes, width: int, height: int) -> list[RawDetection]:
        stream = _digest_stream(self._seed, b"detect", image)
        count = 1 + stream.take(1)[0] % 3
        detections = []
        for _ in range(count):
            raw = stream.take(7)
            cls = GARMENT_CLASSES[raw[0] % len(GARMENT_CLASSES)]
            confidence = round(0.5 + (raw[1] % 50) / 100.0, 2)
            x1 = (raw[2] / 255.0) * width * 0.6
            y1 = (raw[3] / 255.0) * height * 0.6
            w = max(2.0, (raw[4] / 255.0) * width * 0.4)
            h = max(2.0, (raw[5] / 255.0) * height * 0.4)
            box = (
                round(x1, 2),
                round(y1, 2),
                round(min(x1 + w, width), 2),
                round(min(y1 + h, height), 2),
            )
            detections.append(RawDetection(cls=cls, confidence=confidence, box=box))
        detections.sort(key=lambda d: (-d.confidence, d.box[0], d.box[1]))
        return detections

    def _crop_bytes(self, image: bytes, box: Box | None) -> bytes:
        if box is None:
            return image
        tag = ",".join(f"{v:.4f}" for v in box).encode("ascii")
        return image + b"\x1e" + tag

    def embed_image(self, image: bytes, box: Box | None) -> list[float]:
        stream = _digest_stream(self._seed, b"embed_image", self._crop_bytes(image, box))
        return _normalize(stream.unit_floats(self._dim))

    def embed_texts(self, texts: list[str]) -> list[list[float]]:
        out = []
        for text in texts:
            stream = _digest_stream(self._seed, b"embed_text", text.encode("utf-8"))
            out.append(_normalize(stream.unit_floats(self._dim)))
        return out

    def caption(self, image: bytes, box: Box | None, prompt: str) -> str:
        stream = _digest_stream(self._seed, b"caption", self._crop_bytes(image, box))
        raw = stream.take(4)
        fit = _STUB_FITS[raw[0] % len(_STUB_FITS)]
        pattern = _STUB_PATTERNS[raw[1] % len(_STUB_PATTERNS)]
        color = _STUB_COLORS[raw[2] % len(_STUB_COLORS)]
        material = _STUB_MATERIALS[raw[3] % len(_STUB_MATERIALS)]
        return f"{prompt} a {fit} {pattern} cut in {color} {material}"


def _normalize(values: list[float]) -> list[float]:
    norm = math.sqrt(sum(v * v for v in values))
    if norm == 0:
        values = [1.0] + values[1:]
        norm = math.sqrt(sum(v * v for v in values))
    return [round(v / norm, 8) for v in values]


class TransformersBackend(Backend):
    """Real pretrained checkpoints behind the same contract.

    Requires the 'models' extra and checkpoint downloads. Inference is
    pinned deterministic: fixed seed, eval mode, greedy decoding.
    """

    def __init__(self, config: SidecarConfig):
        import torch
        from PIL import Image  # noqa: F401  (decode dependency surfaced early)

        self._torch = torch
        self._config = config
        self._device = torch.device(config.device)
        torch.manual_seed(config.seed)

        import torchvision

        weights = torchvision.models.detection.FasterRCNN_ResNet50_FPN_Weights.DEFAULT
        self._detector = torchvision.models.detection.fasterrcnn_resnet50_fpn(
            weights=weights
        ).to(self._device).eval()
        self._detector_labels = weights.meta["categories"]

        from transformers import (
            BlipForConditionalGeneration,
            BlipProcessor,
            CLIPModel,
            CLIPProcessor,
        )

        self._clip = CLIPModel.from_pretrained(config.embedder_id).to(self._device).eval()
        self._clip_processor = CLIPProcessor.from_pretrained(config.embedder_id)
        self._blip = BlipForConditionalGeneration.from_pretrained(
            config.captioner_id
        ).to(self._device).eval()
        self._blip_processor = BlipProcessor.from_pretrained(config.captioner_id)
        self._dim = int(self._clip.config.projection_dim)

    @property
    def dim(self) -> int:
        return self._dim

    def _decode(self, image: bytes, box: Box | None):
        from PIL import Image

        img = Image.open(io.BytesIO(image)).convert("RGB")
        if box is not None:
            img = img.crop(tuple(int(round(v)) for v in box))
        return img

    def detect(self, image: bytes, width: int, height: int) -> list[RawDetection]:
        import torchvision.transforms.functional as F

        img = self._decode(image, None)
        tensor = F.to_tensor(img).to(self._device)
        with self._torch.no_grad():
            [output] = self._detector([tensor])
        detections = []
        for label, score, box in zip(output["labels"], output["scores"], output["boxes"]):
            name = self._detector_labels[int(label)]
            mapped = self._config.class_map.get(name)
            if mapped is None:
                continue
            x1, y1, x2, y2 = (float(v) for v in box)
            detections.append(RawDetection(cls=mapped, confidence=float(score), box=(x1, y1, x2, y2)))
        detections.sort(key=lambda d: (-d.confidence, d.box[0], d.box[1]))
        return detections

    def embed_image(self, image: bytes, box: Box | None) -> list[float]:
        inputs = self._clip_processor(
            images=self._decode(image, box), return_tensors="pt"
        ).to(self._device)
        with self._torch.no_grad():
            features = self._clip.get_image_features(**inputs)
        return [float(v) for v in features[0].cpu()]

    def embed_texts(self, texts: list[str]) -> list[list[float]]:
        inputs = self._clip_processor(
            text=texts, return_tensors="pt", padding=True, truncation=True
        ).to(self._device)
        with self._torch.no_grad():
            features = self._clip.get_text_features(**inputs)
        return [[float(v) for v in row.cpu()] for row in features]

    def caption(self, image: bytes, box: Box | None, prompt: str) -> str:
        inputs = self._blip_processor(
            self._decode(image, box), prompt, return_tensors="pt"
        ).to(self._device)
        with self._torch.no_grad():
            output = self._blip.generate(**inputs, max_new_tokens=40, num_beams=1, do_sample=False)
        return self._blip_processor.decode(output[0], skip_special_tokens=True)


def build_backend(config: SidecarConfig) -> Backend:
    if config.backend == "transformers":
        return TransformersBackend(config)
    return StubBackend(config)
