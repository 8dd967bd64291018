"""Coarse clustering by truncated SVD of the TF-IDF term-document matrix.

The reduced decomposition picks how many clusters the corpus supports (the
smallest rank retaining a fraction q of squared singular mass), names each
cluster by its heaviest terms, and assigns documents to the nearest basis
direction by absolute cosine.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from .errors import TitlesimError, UnrepresentableError
from .text import CorpusStats, Document, SparseVector, build_corpus_stats, tfidf

# Singular values below this fraction of the largest are treated as zero.
RANK_RTOL = 1e-10

# A coordinate counts as the "first nonzero" of a basis direction when its
# magnitude clears this fraction of the direction's largest magnitude.
_SIGN_RTOL = 1e-12


@dataclass(frozen=True)
class SvdFactors:
    """Retained singular triples of a term-document matrix.

    term_basis holds one orthonormal column per retained singular value;
    doc_coords holds each document's coordinates in the reduced space,
    row j being sigma * (right singular vector component) for document j.
    """

    singular_values: np.ndarray
    term_basis: np.ndarray
    doc_coords: np.ndarray
    terms: tuple[str, ...]

    @property
    def rank(self) -> int:
        return int(self.singular_values.shape[0])


@dataclass(frozen=True)
class Cluster:
    label: str
    basis_direction: np.ndarray
    member_count: int

    def with_label(self, label: str) -> Cluster:
        return replace(self, label=label)


@dataclass(frozen=True)
class ClusterModel:
    """Unit basis directions with labels; immutable after discovery.

    Carries the corpus statistics it was fit from (when fit from documents)
    so later queries can be vectorized consistently at assignment time.
    """

    clusters: tuple[Cluster, ...]
    q: float
    terms: tuple[str, ...]
    stats: CorpusStats | None = None

    @cached_property
    def _term_index(self) -> dict[str, int]:
        return {term: i for i, term in enumerate(self.terms)}


def term_document_matrix(
    docs: list[Document],
) -> tuple[np.ndarray, tuple[str, ...], CorpusStats]:
    """Dense TF-IDF matrix with one row per term, one column per document.

    Terms are the sorted union of all nonzero entries. A document whose
    vector is empty (no tokens, or every weight zero) contributes an
    all-zero column so column order always matches input order.
    """
    if not docs:
        raise TitlesimError("empty corpus")
    stats = build_corpus_stats(docs)
    vectors: list[SparseVector] = []
    for doc in docs:
        try:
            vectors.append(tfidf(doc, stats))
        except UnrepresentableError:
            vectors.append(SparseVector(entries={}))
    term_set: set[str] = set()
    for vec in vectors:
        term_set.update(vec.entries)
    terms = tuple(sorted(term_set))
    index = {term: i for i, term in enumerate(terms)}
    matrix = np.zeros((len(terms), len(docs)), dtype=np.float64)
    for j, vec in enumerate(vectors):
        for term, weight in vec.entries.items():
            matrix[index[term], j] = weight
    return matrix, terms, stats


def truncated_svd(matrix, r_max: int, terms: tuple[str, ...] | None = None) -> SvdFactors:
    """Top min(r_max, rank) singular triples of a term-document matrix.

    Singular values under RANK_RTOL of the largest are dropped as numerical
    zeros. Each term-space direction is sign-fixed so its first nonzero
    coordinate is positive, with the matching document coordinates flipped
    in step, making the factorization deterministic.
    """
    matrix = np.ascontiguousarray(matrix, dtype=np.float64)
    if matrix.ndim != 2 or matrix.size == 0:
        raise TitlesimError("empty matrix")
    if r_max < 1:
        raise TitlesimError("r_max must be >= 1")
    u, s, vt = np.linalg.svd(matrix, full_matrices=False)
    if s.size == 0 or s[0] <= 0.0:
        raise TitlesimError("matrix has no nonzero singular values")
    rank = int(np.sum(s > RANK_RTOL * s[0]))
    r = min(r_max, rank)
    u = np.ascontiguousarray(u[:, :r])
    s = np.ascontiguousarray(s[:r])
    vt = np.ascontiguousarray(vt[:r])
    for j in range(r):
        col = u[:, j]
        magnitudes = np.abs(col)
        nonzero = np.nonzero(magnitudes > _SIGN_RTOL * magnitudes.max())[0]
        if nonzero.size and col[nonzero[0]] < 0.0:
            u[:, j] = -col
            vt[j] = -vt[j]
    doc_coords = (s[:, None] * vt).T
    if terms is None:
        terms = tuple(f"t{i}" for i in range(matrix.shape[0]))
    if len(terms) != matrix.shape[0]:
        raise TitlesimError(
            f"{len(terms)} terms for a matrix with {matrix.shape[0]} rows"
        )
    return SvdFactors(
        singular_values=s, term_basis=u, doc_coords=doc_coords, terms=tuple(terms)
    )


def _memberships(doc_coords: np.ndarray, r: int) -> list[int]:
    """Cluster index per document: largest |coordinate| among the first r, ties low."""
    if doc_coords.shape[0] == 0:
        return []
    return [int(i) for i in np.argmax(np.abs(doc_coords[:, :r]), axis=1)]


def _direction_label(direction: np.ndarray, terms: tuple[str, ...], top_terms: int) -> str:
    order = sorted(range(len(terms)), key=lambda i: (-abs(float(direction[i])), terms[i]))
    return " ".join(terms[i] for i in order[:top_terms])


def discover_clusters(factors: SvdFactors, q: float = 0.8, top_terms: int = 3) -> ClusterModel:
    """Retain the smallest rank whose squared singular mass reaches q.

    One cluster per retained direction, labeled by its top_terms heaviest
    terms (by absolute weight, ties lexicographic). Member counts come from
    assigning every document to its dominant retained direction.
    """
    if factors.rank == 0:
        raise TitlesimError("no singular triples to cluster")
    if not 0.0 < q <= 1.0:
        raise TitlesimError("q must be in (0, 1]")
    if top_terms < 1:
        raise TitlesimError("top_terms must be >= 1")
    energy = factors.singular_values**2
    fractions = np.cumsum(energy) / energy.sum()
    # slop keeps q=1.0 reachable despite cumulative rounding
    reaching = np.nonzero(fractions >= q - 1e-12)[0]
    r = int(reaching[0]) + 1 if reaching.size else factors.rank
    members = _memberships(factors.doc_coords, r)
    counts = [0] * r
    for m in members:
        counts[m] += 1
    clusters = tuple(
        Cluster(
            label=_direction_label(factors.term_basis[:, j], factors.terms, top_terms),
            basis_direction=np.array(factors.term_basis[:, j]),
            member_count=counts[j],
        )
        for j in range(r)
    )
    return ClusterModel(clusters=clusters, q=q, terms=factors.terms)


def assign(doc_vec: SparseVector, model: ClusterModel) -> int:
    """Index of the cluster whose direction has the largest |cosine| to doc_vec.

    Ties go to the lower cluster index; scaling doc_vec by any positive
    factor cannot change the result.
    """
    if not doc_vec.entries:
        raise UnrepresentableError("zero document vector")
    term_index = model._term_index
    doc_norm = doc_vec.norm()
    scores: list[float] = []
    for cluster in model.clusters:
        direction = cluster.basis_direction
        dot = 0.0
        for term, weight in sorted(doc_vec.entries.items()):
            i = term_index.get(term)
            if i is not None:
                dot += weight * float(direction[i])
        norm = float(np.linalg.norm(direction))
        scores.append(dot / (doc_norm * norm))
    return min(range(len(scores)), key=lambda j: (-abs(scores[j]), j))


def fit_cluster_model(
    docs: list[Document], q: float = 0.8, top_terms: int = 3
) -> tuple[ClusterModel, list[int]]:
    """Full pipeline: TF-IDF matrix, full-rank decomposition, cluster discovery.

    Returns the model (carrying the corpus statistics used to vectorize)
    and the cluster membership of each input document, in input order.
    """
    matrix, terms, stats = term_document_matrix(docs)
    if matrix.shape[0] == 0:
        raise TitlesimError("corpus has no weighted terms")
    factors = truncated_svd(matrix, r_max=min(matrix.shape), terms=terms)
    model = discover_clusters(factors, q=q, top_terms=top_terms)
    members = _memberships(factors.doc_coords, len(model.clusters))
    return replace(model, stats=stats), members
