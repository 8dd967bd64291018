"""Accuracy measurement, the k-sweep protocol, and CSV export.

The sweep searches each query once at the largest k and re-truncates the
neighbor list for every smaller k, so a 20-point sweep costs one search
pass. Queries that cannot be represented are excluded from the accuracy
denominator and reported separately.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import BinaryIO, Sequence

from .errors import TitlesimError, UnrepresentableError
from .knn import (
    Cascade,
    KnnIndex,
    Neighbor,
    default_prefetch,
    represent_query,
    route_cascade,
    search,
    search_wmd_pruned,
    vote_labels,
)
from .strategies import Strategy
from .text import Document

CSV_HEADER = "strategy,k,accuracy,n_queries,n_skipped"


@dataclass(frozen=True)
class EvalCase:
    """A labeled query: the document to classify and its gold label."""

    query: Document
    gold_label: str

    def __post_init__(self) -> None:
        if not self.gold_label:
            raise TitlesimError(f"empty gold_label for query '{self.query.id}'")


@dataclass(frozen=True)
class SweepRow:
    strategy: str
    k: int
    accuracy: float
    n_queries: int
    n_skipped: int


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]


def accuracy(
    predictions: Sequence[str | None], gold: Sequence[str]
) -> tuple[float, int]:
    """Exact-match fraction, with skipped (None) predictions excluded.

    Skipped queries leave the denominator; if everything was skipped the
    accuracy is reported as 0.0 rather than undefined.
    """
    if len(predictions) != len(gold):
        raise TitlesimError(
            f"{len(predictions)} predictions for {len(gold)} gold labels"
        )
    n_skipped = sum(1 for p in predictions if p is None)
    scored = len(gold) - n_skipped
    if scored == 0:
        return 0.0, n_skipped
    correct = sum(1 for p, g in zip(predictions, gold) if p is not None and p == g)
    return correct / scored, n_skipped


def _neighbors_at(
    target: KnnIndex | Cascade, query: Document, k: int, prefetch: int | None
) -> tuple[KnnIndex, list[Neighbor]]:
    """One full search for a query; returns the index voted against."""
    index = route_cascade(target.coarse, target.verticals, query) if isinstance(
        target, Cascade
    ) else target
    rep = represent_query(index, query)
    if index.strategy is Strategy.WMD:
        pf = default_prefetch(k) if prefetch is None else prefetch
        return index, search_wmd_pruned(index, rep.payload, k, pf)
    return index, search(index, rep, k)


def sweep_k(
    target: KnnIndex | Cascade,
    cases: Sequence[EvalCase],
    k_min: int = 1,
    k_max: int = 20,
    prefetch: int | None = None,
) -> SweepResult:
    """One accuracy row per k in [k_min, k_max].

    Neighbors are computed once per query at k_max; each row's predictions
    come from truncating those lists, which matches an independent
    classify-at-k run exactly.
    """
    if not cases:
        raise TitlesimError("no evaluation cases")
    if k_min < 1 or k_min > k_max:
        raise TitlesimError("need 1 <= k_min <= k_max")
    prepared: list[tuple[KnnIndex, list[Neighbor]] | None] = []
    for case in cases:
        try:
            prepared.append(_neighbors_at(target, case.query, k_max, prefetch))
        except UnrepresentableError:
            prepared.append(None)
    strategy_token = target.strategy.value
    gold = [case.gold_label for case in cases]
    rows = []
    for k in range(k_min, k_max + 1):
        predictions: list[str | None] = []
        for item in prepared:
            if item is None:
                predictions.append(None)
            else:
                index, neighbors = item
                predictions.append(vote_labels(index, neighbors[:k]).label)
        acc, n_skipped = accuracy(predictions, gold)
        rows.append(
            SweepRow(
                strategy=strategy_token,
                k=k,
                accuracy=acc,
                n_queries=len(cases),
                n_skipped=n_skipped,
            )
        )
    return SweepResult(rows=tuple(rows))


def export_csv(result: SweepResult, sink: BinaryIO) -> None:
    """Write rows as CSV: fixed header, accuracy at 6 decimals, no blank tail."""
    lines = [CSV_HEADER]
    for row in result.rows:
        lines.append(
            f"{row.strategy},{row.k},{row.accuracy:.6f},{row.n_queries},{row.n_skipped}"
        )
    sink.write(("\n".join(lines) + "\n").encode("utf-8"))
