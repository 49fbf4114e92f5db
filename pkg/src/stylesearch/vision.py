"""Zero-shot label assignment and prompt-templated caption assembly.

Classification compares an image-crop embedding against candidate label
embeddings and picks the highest cosine similarity; ties break toward the
lexicographically smaller label so results are reproducible. Captions are
normalized (lowercase, collapsed whitespace) and stripped of the prompt
prefix, keeping only the descriptive body for downstream search.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import (
    DimensionMismatchError,
    EmptyCandidatesError,
    EmptyCaptionError,
    EmptyLabelError,
    ZeroVectorError,
)
from .providers import Embedding

CAPTION_PROMPT_TEMPLATE = "this {label} features"

#: Template applied to label text before it is embedded. Identity by
#: default; override e.g. with "a photo of {label}" if the embedding model
#: benefits from it.
DEFAULT_LABEL_PROMPT_TEMPLATE = "{label}"


def cosine(u: Embedding, v: Embedding) -> float:
    """Cosine similarity in double precision, clamped to [-1, 1]."""
    if u.dim != v.dim:
        raise DimensionMismatchError(f"dims differ: {u.dim} vs {v.dim}")
    a = np.asarray(u.values, dtype=np.float64)
    b = np.asarray(v.values, dtype=np.float64)
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise ZeroVectorError()
    return min(1.0, max(-1.0, float(np.dot(a, b)) / (na * nb)))


@dataclass(frozen=True)
class ClassificationResult:
    label: str
    score: float
    ranked: tuple[tuple[str, float], ...]


def classify(
    image_emb: Embedding, candidates: Sequence[tuple[str, Embedding]]
) -> ClassificationResult:
    """Rank candidate labels by cosine similarity to the image embedding."""
    if not candidates:
        raise EmptyCandidatesError("classification needs at least one candidate")
    scored: list[tuple[str, float]] = []
    for label, emb in candidates:
        try:
            scored.append((label, cosine(image_emb, emb)))
        except ZeroVectorError:
            # Distinguish a zero label vector from a zero image vector.
            a = np.asarray(image_emb.values, dtype=np.float64)
            if float(np.linalg.norm(a)) == 0.0:
                raise ZeroVectorError() from None
            raise ZeroVectorError(label) from None
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    ranked = tuple(scored)
    return ClassificationResult(label=ranked[0][0], score=ranked[0][1], ranked=ranked)


def build_prompt(label: str) -> str:
    """Caption-steering prompt for a label, e.g. "this jeans features"."""
    if not label or not label.strip():
        raise EmptyLabelError("label must be non-empty")
    return CAPTION_PROMPT_TEMPLATE.format(label=label)


def normalize_text(text: str) -> str:
    """Lowercase and collapse all whitespace runs to single spaces."""
    return " ".join(text.lower().split())


@dataclass(frozen=True)
class Caption:
    """Final caption: prompt + body, fully normalized.

    full_text is always ``prompt + " " + body``; body never repeats the
    prompt boilerplate.
    """

    label: str
    prompt: str
    body: str
    full_text: str


def finalize_caption(label: str, prompt: str, generated: str) -> Caption:
    """Normalize generated text and strip the prompt prefix when present.

    Idempotent: feeding a Caption's full_text back in reproduces it.
    """
    norm_prompt = normalize_text(prompt)
    norm_generated = normalize_text(generated)
    if not norm_generated:
        raise EmptyCaptionError("caption text is empty after normalization")
    if norm_generated.startswith(norm_prompt):
        body = norm_generated[len(norm_prompt):].strip()
    else:
        body = norm_generated
    if not body:
        raise EmptyCaptionError("caption has no body beyond the prompt")
    return Caption(
        label=normalize_text(label),
        prompt=norm_prompt,
        body=body,
        full_text=f"{norm_prompt} {body}",
    )
