"""Reference index, exact nearest-neighbor search, and majority-vote classification.

Two search paths exist for the transport strategy: an exhaustive scan and a
prefetch-and-prune scan driven by the centroid lower bound. The pruned scan
is contractually identical to the exhaustive one, tie order included, because
a reference is skipped only when its lower bound strictly exceeds the running
k-th best exact distance.
"""

from __future__ import annotations

import heapq
import logging
import math
from dataclasses import dataclass, field

import numpy as np

from . import transport
from ._kernels import rows_euclidean, weighted_centroid
from .embeddings import DocVecTable, EmbeddingTable
from .errors import TitlesimError, UnrepresentableError
from .lingo import ClusterModel, assign, fit_cluster_model
from .strategies import DocRepresentation, Strategy, distance, is_zero_representation, represent
from .text import CorpusStats, Document, tfidf

logger = logging.getLogger(__name__)

# Pruning guard band: a bound must clear the running k-th best by this much
# before its reference is skipped. Rounding in the centroid arithmetic is
# orders of magnitude below either term, so no viable candidate is lost and
# virtually no pruning power is either.
_PRUNE_TOL_ABS = 1e-9
_PRUNE_TOL_REL = 1e-12


@dataclass(frozen=True)
class LabeledRef:
    """A knowledge-base title with its fine label and optional coarse label."""

    doc: Document
    fine_label: str
    coarse_label: str | None = None

    def __post_init__(self) -> None:
        if not self.fine_label:
            raise TitlesimError(f"empty fine_label for ref '{self.doc.id}'")


@dataclass(frozen=True)
class Neighbor:
    ref_index: int
    dist: float


@dataclass(frozen=True)
class Prediction:
    """A voted label with the evidence behind it."""

    label: str
    neighbors: tuple[Neighbor, ...]
    vote_counts: dict[str, int]


@dataclass(frozen=True)
class KnnIndex:
    """Immutable reference index; search and classify are read-only.

    For the transport strategy the per-reference distributions and the
    centroid matrix are precomputed so the lower-bound pass over the whole
    index is a single kernel call.
    """

    strategy: Strategy
    refs: tuple[LabeledRef, ...]
    reps: tuple[DocRepresentation, ...]
    stats: CorpusStats | None = None
    table: EmbeddingTable | None = None
    docvecs: DocVecTable | None = None
    skipped_ids: tuple[str, ...] = ()
    ref_dists: tuple[transport.DiscreteDistribution, ...] | None = field(default=None, repr=False)
    ref_centroids: np.ndarray | None = field(default=None, repr=False)

    def __len__(self) -> int:
        return len(self.refs)


def build_index(
    refs: list[LabeledRef],
    strategy: Strategy,
    stats: CorpusStats | None = None,
    table: EmbeddingTable | None = None,
    docvecs: DocVecTable | None = None,
) -> KnnIndex:
    """Precompute one representation per reference.

    References that cannot be represented (all tokens out of vocabulary,
    missing document vector, zero-weight vector) are skipped with a logged
    warning; an index where nothing survives is an error.
    """
    if not refs:
        raise TitlesimError("no references")
    kept: list[LabeledRef] = []
    reps: list[DocRepresentation] = []
    skipped: list[str] = []
    for ref in refs:
        try:
            rep = represent(ref.doc, strategy, stats=stats, table=table, docvecs=docvecs)
            if is_zero_representation(rep):
                raise UnrepresentableError("zero-weight representation")
            if strategy is Strategy.WMD:
                # fail now, not at query time, if no token is embeddable
                transport.as_distribution(rep.payload, table)
        except UnrepresentableError as exc:
            logger.warning("skipping ref '%s': %s", ref.doc.id, exc)
            skipped.append(ref.doc.id)
            continue
        kept.append(ref)
        reps.append(rep)
    if not kept:
        raise TitlesimError("no representable references")

    ref_dists = None
    ref_centroids = None
    if strategy is Strategy.WMD:
        dists = tuple(transport.as_distribution(rep.payload, table) for rep in reps)
        cents = np.empty((len(dists), table.dim), dtype=np.float64)
        for i, dist_i in enumerate(dists):
            cents[i] = weighted_centroid(dist_i.points, dist_i.weights)
        ref_dists = dists
        ref_centroids = cents

    return KnnIndex(
        strategy=strategy,
        refs=tuple(kept),
        reps=tuple(reps),
        stats=stats,
        table=table,
        docvecs=docvecs,
        skipped_ids=tuple(skipped),
        ref_dists=ref_dists,
        ref_centroids=ref_centroids,
    )


def _top_k(dists: list[float], k: int) -> list[Neighbor]:
    """Smallest k by (distance, reference index); stable and deterministic."""
    order = sorted(range(len(dists)), key=lambda i: (dists[i], i))
    return [Neighbor(ref_index=i, dist=dists[i]) for i in order[: min(k, len(dists))]]


def search(index: KnnIndex, query: DocRepresentation, k: int) -> list[Neighbor]:
    """Exhaustive scan: min(k, |refs|) nearest neighbors, ties to lower index."""
    if k < 1:
        raise TitlesimError("k must be >= 1")
    if query.kind is not index.strategy:
        raise TitlesimError(
            f"query strategy '{query.kind.value}' does not match index '{index.strategy.value}'"
        )
    if index.strategy is Strategy.WMD:
        query_dist = transport.as_distribution(query.payload, index.table)
        dists = [transport.wmd_between(query_dist, ref_dist) for ref_dist in index.ref_dists]
    else:
        dists = [distance(query, rep) for rep in index.reps]
    return _top_k(dists, k)


def search_wmd_pruned(
    index: KnnIndex, query, k: int, prefetch: int
) -> list[Neighbor]:
    """Exact top-k transport-distance search with lower-bound pruning.

    Pass one scores every reference with the cheap centroid lower bound.
    The `prefetch` smallest candidates get exact distances, establishing the
    running k-th best; the rest are visited in ascending lower-bound order
    and skipped outright once their bound exceeds that best by more than a
    small guard band. The band absorbs floating-point rounding (the bound
    can land an ulp above the exact distance it provably never exceeds in
    real arithmetic), so candidates at the k-th boundary are always checked
    exactly and the output is identical to `search`, tie order included.
    """
    if index.strategy is not Strategy.WMD:
        raise TitlesimError("pruned search requires a wmd index")
    if k < 1:
        raise TitlesimError("k must be >= 1")
    if prefetch < k:
        raise TitlesimError("prefetch must be >= k")

    query_dist = transport.as_distribution(query, index.table)
    query_centroid = weighted_centroid(query_dist.points, query_dist.weights)
    bounds = rows_euclidean(index.ref_centroids, query_centroid)

    n = len(index.refs)
    order = np.lexsort((np.arange(n), bounds))

    def exact(i: int) -> float:
        return transport.wmd_between(query_dist, index.ref_dists[i])

    # max-heap (negated) of the k smallest exact distances seen so far
    worst_of_best: list[float] = []

    def note(d: float) -> None:
        if len(worst_of_best) < k:
            heapq.heappush(worst_of_best, -d)
        elif d < -worst_of_best[0]:
            heapq.heapreplace(worst_of_best, -d)

    computed: list[tuple[int, float]] = []
    n_prefetch = min(prefetch, n)
    for pos in range(n_prefetch):
        i = int(order[pos])
        d = exact(i)
        computed.append((i, d))
        note(d)
    for pos in range(n_prefetch, n):
        i = int(order[pos])
        kth = -worst_of_best[0] if len(worst_of_best) == k else math.inf
        if bounds[i] > kth + _PRUNE_TOL_ABS + _PRUNE_TOL_REL * kth:
            continue
        d = exact(i)
        computed.append((i, d))
        note(d)

    computed.sort(key=lambda pair: (pair[1], pair[0]))
    return [Neighbor(ref_index=i, dist=d) for i, d in computed[: min(k, n)]]


def vote_labels(index: KnnIndex, neighbors: list[Neighbor]) -> Prediction:
    """Majority vote over neighbor fine labels.

    Ties go to the label whose tied neighbors sit at smaller summed
    distance, then to the lexicographically smaller label.
    """
    if not neighbors:
        raise TitlesimError("no neighbors to vote over")
    counts: dict[str, int] = {}
    summed: dict[str, float] = {}
    for nb in neighbors:
        label = index.refs[nb.ref_index].fine_label
        counts[label] = counts.get(label, 0) + 1
        summed[label] = summed.get(label, 0.0) + nb.dist
    winner = min(counts, key=lambda lab: (-counts[lab], summed[lab], lab))
    return Prediction(label=winner, neighbors=tuple(neighbors), vote_counts=counts)


def represent_query(index: KnnIndex, query_doc: Document) -> DocRepresentation:
    """Render a query under the index strategy, rejecting unrepresentable ones."""
    rep = represent(
        query_doc, index.strategy, stats=index.stats, table=index.table, docvecs=index.docvecs
    )
    if is_zero_representation(rep):
        raise UnrepresentableError(f"query '{query_doc.id}' has a zero-weight representation")
    return rep


def default_prefetch(k: int) -> int:
    return max(2 * k, 50)


def classify(
    index: KnnIndex, query_doc: Document, k: int = 20, prefetch: int | None = None
) -> Prediction:
    """Represent, search, vote. Transport indexes use the pruned search."""
    rep = represent_query(index, query_doc)
    if index.strategy is Strategy.WMD:
        pf = default_prefetch(k) if prefetch is None else prefetch
        neighbors = search_wmd_pruned(index, rep.payload, k, pf)
    else:
        neighbors = search(index, rep, k)
    return vote_labels(index, neighbors)


@dataclass(frozen=True)
class Cascade:
    """Coarse cluster model plus one fine index per coarse label."""

    coarse: ClusterModel
    verticals: dict[str, KnnIndex]

    @property
    def strategy(self) -> Strategy:
        return next(iter(self.verticals.values())).strategy


def build_cascade(
    refs: list[LabeledRef],
    strategy: Strategy,
    stats: CorpusStats | None = None,
    table: EmbeddingTable | None = None,
    docvecs: DocVecTable | None = None,
    q: float = 0.8,
    top_terms: int = 3,
) -> Cascade:
    """Fit the coarse model on all reference titles and build one vertical per coarse label.

    The coarse clusters come from the reduced decomposition of the TF-IDF
    term-document matrix; each cluster is then renamed to the majority
    coarse label of the references it attracts, so cluster assignment maps
    directly onto a vertical. A cluster that attracts no references falls
    back to the overall majority coarse label.
    """
    if not refs:
        raise TitlesimError("no references")
    for ref in refs:
        if ref.coarse_label is None:
            raise TitlesimError(f"ref '{ref.doc.id}' lacks a coarse label; cascade needs one")

    docs = [ref.doc for ref in refs]
    model, members = fit_cluster_model(docs, q=q, top_terms=top_terms)

    overall: dict[str, int] = {}
    for ref in refs:
        overall[ref.coarse_label] = overall.get(ref.coarse_label, 0) + 1
    fallback = min(overall, key=lambda lab: (-overall[lab], lab))

    per_cluster: list[dict[str, int]] = [dict() for _ in model.clusters]
    for ref, cluster_idx in zip(refs, members):
        tally = per_cluster[cluster_idx]
        tally[ref.coarse_label] = tally.get(ref.coarse_label, 0) + 1
    renamed = []
    for cluster, tally in zip(model.clusters, per_cluster):
        if tally:
            label = min(tally, key=lambda lab: (-tally[lab], lab))
        else:
            label = fallback
        renamed.append(cluster.with_label(label))
    coarse = ClusterModel(
        clusters=tuple(renamed), q=model.q, terms=model.terms, stats=model.stats
    )

    by_label: dict[str, list[LabeledRef]] = {}
    for ref in refs:
        by_label.setdefault(ref.coarse_label, []).append(ref)
    verticals = {
        label: build_index(group, strategy, stats=stats, table=table, docvecs=docvecs)
        for label, group in sorted(by_label.items())
    }
    return Cascade(coarse=coarse, verticals=verticals)


def route_cascade(
    coarse: ClusterModel, verticals: dict[str, KnnIndex], query_doc: Document
) -> KnnIndex:
    """Pick the vertical index a query belongs to via coarse cluster assignment."""
    if coarse.stats is None:
        raise TitlesimError("coarse model carries no corpus statistics")
    query_vec = tfidf(query_doc, coarse.stats)
    if not query_vec.entries:
        raise UnrepresentableError(
            f"query '{query_doc.id}' has a zero-weight coarse representation"
        )
    cluster_idx = assign(query_vec, coarse)
    label = coarse.clusters[cluster_idx].label
    vertical = verticals.get(label)
    if vertical is None:
        raise TitlesimError(f"no vertical index for coarse label '{label}'")
    return vertical


def classify_cascade(
    coarse: ClusterModel,
    verticals: dict[str, KnnIndex],
    query_doc: Document,
    k: int = 20,
    prefetch: int | None = None,
) -> Prediction:
    """Assign the query to a coarse cluster, then classify inside that vertical only."""
    vertical = route_cascade(coarse, verticals, query_doc)
    return classify(vertical, query_doc, k=k, prefetch=prefetch)
