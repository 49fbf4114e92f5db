"""Text analysis for the search core.

The analyzer is deliberately plain: lowercase, then split into maximal runs
of Unicode letters and digits. No stemming and no stopword removal by
default, because product captions are short and every content word matters.
The same analyzer normalizes product labels into cluster names, so
"Long Sleeve Top" and "long sleeve top" route to the same cluster.
"""

from __future__ import annotations

import re
from collections.abc import Collection
from dataclasses import dataclass, field

# \w minus underscore: maximal runs of Unicode letters/digits.
_TOKEN_RE = re.compile(r"[^\W_]+")


def analyze(text: str, stopwords: Collection[str] = ()) -> list[str]:
    """Tokenize ``text``: lowercase, runs of letters/digits, in order."""
    tokens = _TOKEN_RE.findall(text.lower())
    if stopwords:
        stop = set(stopwords)
        tokens = [t for t in tokens if t not in stop]
    return tokens


def cluster_name(label: str) -> str:
    """Normalize a product label into its cluster name (tokens joined by _)."""
    return "_".join(analyze(label))


@dataclass
class AnalyzedDoc:
    """A document after analysis: tokens plus per-token positions."""

    doc_id: str
    tokens: list[str]
    positions: dict[str, list[int]] = field(init=False)

    def __post_init__(self) -> None:
        positions: dict[str, list[int]] = {}
        for i, tok in enumerate(self.tokens):
            positions.setdefault(tok, []).append(i)
        self.positions = positions

    @property
    def length(self) -> int:
        return len(self.tokens)


def analyze_doc(doc_id: str, text: str, stopwords: Collection[str] = ()) -> AnalyzedDoc:
    return AnalyzedDoc(doc_id=doc_id, tokens=analyze(text, stopwords))
