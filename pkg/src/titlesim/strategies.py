"""A uniform distance contract over the four similarity strategies.

Cosine similarities are converted to distances as ``1 - cos`` so every
strategy obeys the same smaller-is-nearer ordering that the kNN layer
relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import transport
from .embeddings import DocVecTable, EmbeddingTable, centroid
from .errors import TitlesimError, UnrepresentableError
from .text import CorpusStats, Document, NBow, SparseVector, cosine_similarity, nbow, tfidf


class Strategy(Enum):
    """The four compared representations; values are the CLI tokens."""

    BOW_COSINE = "bow"
    AVG_W2V = "avgw2v"
    WMD = "wmd"
    DOC_VEC = "docvec"

    @classmethod
    def from_token(cls, token: str) -> Strategy:
        for member in cls:
            if member.value == token:
                return member
        raise TitlesimError(f"unknown strategy '{token}'")

    @property
    def is_cosine(self) -> bool:
        return self is not Strategy.WMD


@dataclass(frozen=True)
class DocRepresentation:
    """A document rendered under one strategy; payload type matches the kind."""

    kind: Strategy
    payload: SparseVector | NBow | np.ndarray


def represent(
    doc: Document,
    strategy: Strategy,
    stats: CorpusStats | None = None,
    table: EmbeddingTable | None = None,
    docvecs: DocVecTable | None = None,
) -> DocRepresentation:
    """Build the representation a strategy scores with.

    bow -> TF-IDF vector, avgw2v -> token-vector centroid, wmd -> normalized
    bag of words, docvec -> externally supplied vector looked up by doc id.
    """
    if strategy is Strategy.BOW_COSINE:
        if stats is None:
            raise TitlesimError("bow strategy requires corpus statistics")
        return DocRepresentation(strategy, tfidf(doc, stats))
    if strategy is Strategy.AVG_W2V:
        if table is None:
            raise TitlesimError("avgw2v strategy requires an embedding table")
        return DocRepresentation(strategy, centroid(doc.tokens, table))
    if strategy is Strategy.WMD:
        if table is None:
            raise TitlesimError("wmd strategy requires an embedding table")
        return DocRepresentation(strategy, nbow(doc))
    # DOC_VEC
    if docvecs is None:
        raise TitlesimError("docvec strategy requires a document-vector table")
    vec = docvecs.vectors.get(doc.id)
    if vec is None:
        raise UnrepresentableError(f"no document vector for '{doc.id}'")
    return DocRepresentation(strategy, vec)


def distance(
    a: DocRepresentation,
    b: DocRepresentation,
    table: EmbeddingTable | None = None,
) -> float:
    """Strategy-appropriate distance: wmd for WMD, 1 - cosine otherwise."""
    if a.kind is not b.kind:
        raise TitlesimError(f"strategy mismatch: {a.kind.value} vs {b.kind.value}")
    if a.kind is Strategy.WMD:
        if table is None:
            raise TitlesimError("wmd distance requires an embedding table")
        return transport.wmd(a.payload, b.payload, table)
    return 1.0 - cosine_similarity(a.payload, b.payload)


def is_zero_representation(rep: DocRepresentation) -> bool:
    """True when a cosine-kind payload has no direction to compare against.

    Such representations cannot enter any cosine distance; index building
    and classification treat them as unrepresentable.
    """
    if rep.kind is Strategy.WMD:
        return False
    if isinstance(rep.payload, SparseVector):
        return not rep.payload.entries
    return not np.any(np.asarray(rep.payload))
