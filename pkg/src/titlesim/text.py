"""Tokenization, corpus statistics, and sparse document representations.

Two representations are produced here: the normalized bag of words that
feeds the transport distance, and TF-IDF vectors for cosine retrieval and
the SVD clustering stage. Everything is immutable and pure.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import TitlesimError, UnrepresentableError

# Unicode letters and digits; underscore is a separator like punctuation.
_TOKEN_RE = re.compile(r"[^\W_]+", re.UNICODE)


def tokenize(raw: str) -> list[str]:
    """Lowercase and split on any character that is not a letter or digit.

    Mixed alphanumeric runs ("j2ee") stay intact; empty tokens are dropped
    and input order is preserved.
    """
    return _TOKEN_RE.findall(raw.lower())


@dataclass(frozen=True)
class Document:
    """A short text with identifier and normalized token sequence."""

    id: str
    raw: str
    tokens: tuple[str, ...]

    def __post_init__(self):
        expected = tuple(tokenize(self.raw))
        if self.tokens != expected:
            raise TitlesimError(
                f"document '{self.id}': tokens do not match tokenize(raw)"
            )

    @classmethod
    def from_text(cls, doc_id: str, raw: str) -> Document:
        return cls(doc_id, raw, tuple(tokenize(raw)))


@dataclass(frozen=True)
class NBow:
    """Normalized bag of words: token -> weight, weights positive and summing to 1."""

    entries: dict[str, float]
    support_size: int


@dataclass(frozen=True)
class SparseVector:
    """Sparse real vector keyed by token; zero weights are never stored."""

    entries: dict[str, float]

    def __post_init__(self):
        if any(w == 0.0 for w in self.entries.values()):
            raise TitlesimError("SparseVector must not store zero-weight entries")

    def norm(self) -> float:
        return math.sqrt(sum(w * w for _, w in sorted(self.entries.items())))


@dataclass(frozen=True)
class CorpusStats:
    """Document count and per-token document frequencies."""

    doc_count: int
    doc_freq: dict[str, int]


def nbow(doc: Document) -> NBow:
    """Term-frequency distribution of a document, normalized to total mass 1."""
    if not doc.tokens:
        raise UnrepresentableError("empty document")
    total = len(doc.tokens)
    counts = Counter(doc.tokens)
    entries = {tok: count / total for tok, count in counts.items()}
    return NBow(entries=entries, support_size=len(entries))


def build_corpus_stats(docs: list[Document]) -> CorpusStats:
    """Count documents and per-token document frequencies over a collection."""
    if not docs:
        raise TitlesimError("empty corpus")
    doc_freq: Counter[str] = Counter()
    for doc in docs:
        doc_freq.update(set(doc.tokens))
    return CorpusStats(doc_count=len(docs), doc_freq=dict(doc_freq))


def tfidf(doc: Document, stats: CorpusStats) -> SparseVector:
    """TF-IDF vector of a document: raw count times ln(N/df), L2-normalized.

    Tokens unseen in the corpus get df=1 (maximum IDF) so novel query words
    never crash scoring. Zero-weight entries are dropped; if every weight is
    zero the all-zero (empty) vector is returned un-normalized.
    """
    if not doc.tokens:
        raise UnrepresentableError("empty document")
    n = stats.doc_count
    weights = {}
    for tok, count in Counter(doc.tokens).items():
        df = stats.doc_freq.get(tok, 1)
        w = count * math.log(n / df)
        if w != 0.0:
            weights[tok] = w
    if not weights:
        return SparseVector(entries={})
    norm = math.sqrt(sum(w * w for _, w in sorted(weights.items())))
    return SparseVector(entries={tok: w / norm for tok, w in weights.items()})


def _sparse_cosine(a: SparseVector, b: SparseVector) -> float:
    na, nb = a.norm(), b.norm()
    if na == 0.0 or nb == 0.0:
        raise TitlesimError("zero vector")
    small, large = (a.entries, b.entries) if len(a.entries) <= len(b.entries) else (b.entries, a.entries)
    dot = 0.0
    for tok, w in sorted(small.items()):
        other = large.get(tok)
        if other is not None:
            dot += w * other
    return dot / (na * nb)


def _dense_cosine(a: np.ndarray, b: np.ndarray) -> float:
    na = float(np.linalg.norm(a))
    nb = float(np.linalg.norm(b))
    if na == 0.0 or nb == 0.0:
        raise TitlesimError("zero vector")
    return float(np.dot(a, b)) / (na * nb)


def cosine_similarity(a, b) -> float:
    """Cosine similarity between two sparse or two dense vectors, clamped to [-1, 1]."""
    if isinstance(a, SparseVector) and isinstance(b, SparseVector):
        cos = _sparse_cosine(a, b)
    else:
        cos = _dense_cosine(np.asarray(a, dtype=np.float64), np.asarray(b, dtype=np.float64))
    return min(1.0, max(-1.0, cos))
