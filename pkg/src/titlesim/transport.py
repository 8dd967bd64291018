"""Exact optimal transport over word-embedding ground distances.

The travel-cost distance between two documents is the minimum total cost of
moving one normalized bag-of-words onto the other, with per-unit cost equal
to the Euclidean distance between word vectors. The solver is an exact
successive-shortest-path min-cost flow (see ``_kernels``); the centroid
distance is the cheap lower bound used for search pruning.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .embeddings import EmbeddingTable
from .errors import TitlesimError, UnrepresentableError
from .text import NBow

#: Absolute tolerance on marginal feasibility. Document weights are ratios of
#: small token counts, so any legitimate imbalance is far below this.
MARGINAL_TOL = 1e-9


@dataclass(frozen=True)
class DiscreteDistribution:
    """Point masses in embedding space: (m, D) points with positive weights summing to 1."""

    points: np.ndarray
    weights: np.ndarray


@dataclass(frozen=True)
class TransportPlan:
    """An optimal flow matrix and its objective value."""

    flows: np.ndarray
    objective: float


def as_distribution(doc: NBow, table: EmbeddingTable) -> DiscreteDistribution:
    """Embed an NBow: drop out-of-vocabulary mass, renormalize the rest.

    Tokens are laid out in sorted order so the distribution (and every
    distance derived from it) is independent of token order in the source.
    """
    tokens = sorted(tok for tok in doc.entries if tok in table.vocab)
    if not tokens:
        raise UnrepresentableError("no embeddable tokens")
    raw = np.array([doc.entries[tok] for tok in tokens], dtype=np.float64)
    weights = raw / raw.sum()
    rows = [table.vocab[tok] for tok in tokens]
    points = np.ascontiguousarray(table.matrix[rows], dtype=np.float64)
    return DiscreteDistribution(points=points, weights=weights)


def ground_cost_matrix(src: DiscreteDistribution, dst: DiscreteDistribution) -> np.ndarray:
    """Euclidean distance between every source point and every destination point."""
    if src.points.shape[1] != dst.points.shape[1]:
        raise TitlesimError(
            f"dimension mismatch: {src.points.shape[1]} vs {dst.points.shape[1]}"
        )
    return _kernels.pairwise_euclidean(src.points, dst.points)


def solve_transport(supplies, demands, costs) -> TransportPlan:
    """Solve the balanced transportation problem exactly.

    The returned plan is feasible (row sums match supplies, column sums
    match demands, within 1e-9) and optimal; identical inputs always yield
    the identical plan.
    """
    supplies = np.ascontiguousarray(supplies, dtype=np.float64)
    demands = np.ascontiguousarray(demands, dtype=np.float64)
    costs = np.ascontiguousarray(costs, dtype=np.float64)
    if supplies.ndim != 1 or demands.ndim != 1 or costs.ndim != 2:
        raise TitlesimError("supplies and demands must be vectors, costs a matrix")
    if costs.shape != (supplies.shape[0], demands.shape[0]):
        raise TitlesimError(
            f"cost matrix shape {costs.shape} does not match "
            f"{supplies.shape[0]} supplies x {demands.shape[0]} demands"
        )
    if supplies.shape[0] == 0 or demands.shape[0] == 0:
        raise TitlesimError("empty distribution")
    if np.any(supplies <= 0.0) or np.any(demands <= 0.0):
        raise TitlesimError("weights must be positive")
    if np.any(costs < 0.0):
        raise TitlesimError("negative cost entry")
    gap = abs(float(supplies.sum()) - float(demands.sum()))
    if gap > MARGINAL_TOL:
        raise TitlesimError(f"infeasible marginals: sums differ by {gap:.3e}")
    flows, objective = _kernels.solve_transport_flows(supplies, demands, costs)
    return TransportPlan(flows=flows, objective=float(objective))


def wmd_between(src: DiscreteDistribution, dst: DiscreteDistribution) -> float:
    """Transport distance between two prepared distributions."""
    costs = ground_cost_matrix(src, dst)
    plan = solve_transport(src.weights, dst.weights, costs)
    return plan.objective


def wcd_between(src: DiscreteDistribution, dst: DiscreteDistribution) -> float:
    """Distance between the weighted centroids: a lower bound on wmd_between."""
    if src.points.shape[1] != dst.points.shape[1]:
        raise TitlesimError(
            f"dimension mismatch: {src.points.shape[1]} vs {dst.points.shape[1]}"
        )
    ca = _kernels.weighted_centroid(src.points, src.weights)
    cb = _kernels.weighted_centroid(dst.points, dst.weights)
    return float(_kernels.rows_euclidean(ca.reshape(1, -1), cb)[0])


def wmd(a: NBow, b: NBow, table: EmbeddingTable) -> float:
    """Word travel distance between two documents over `table`'s vectors."""
    return wmd_between(as_distribution(a, table), as_distribution(b, table))


def wcd(a: NBow, b: NBow, table: EmbeddingTable) -> float:
    """Centroid distance between two documents; never exceeds wmd(a, b, table)."""
    return wcd_between(as_distribution(a, table), as_distribution(b, table))
