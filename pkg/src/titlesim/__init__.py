"""titlesim: semantic similarity strategies for short-text classification.

A reference index of labeled titles is searched with one of four
interchangeable strategies (TF-IDF cosine, embedding-centroid cosine,
word travel distance over embeddings, or externally trained document
vectors), with majority-vote classification, an optional coarse-to-vertical
cascade, and a k-sweep evaluation harness.
"""

from ._backend import BACKEND, BACKEND_ENV_VAR, USING_NUMBA
from .embeddings import (
    DocVecTable,
    EmbeddingTable,
    analogy,
    centroid,
    load_docvecs,
    load_embeddings,
    nearest_words,
    save_embeddings,
)
from .errors import InputFormatError, TitlesimError, UnrepresentableError
from .evaluation import EvalCase, SweepResult, SweepRow, accuracy, export_csv, sweep_k
from .knn import (
    Cascade,
    KnnIndex,
    LabeledRef,
    Neighbor,
    Prediction,
    build_cascade,
    build_index,
    classify,
    classify_cascade,
    search,
    search_wmd_pruned,
)
from .lingo import ClusterModel, SvdFactors, assign, discover_clusters, fit_cluster_model, truncated_svd
from .strategies import DocRepresentation, Strategy, distance, represent
from .text import (
    CorpusStats,
    Document,
    NBow,
    SparseVector,
    build_corpus_stats,
    cosine_similarity,
    nbow,
    tfidf,
    tokenize,
)
from .transport import (
    DiscreteDistribution,
    TransportPlan,
    ground_cost_matrix,
    solve_transport,
    wcd,
    wmd,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BACKEND_ENV_VAR",
    "USING_NUMBA",
    "Cascade",
    "ClusterModel",
    "CorpusStats",
    "DiscreteDistribution",
    "DocRepresentation",
    "DocVecTable",
    "Document",
    "EmbeddingTable",
    "EvalCase",
    "InputFormatError",
    "KnnIndex",
    "LabeledRef",
    "NBow",
    "Neighbor",
    "Prediction",
    "SparseVector",
    "Strategy",
    "SvdFactors",
    "SweepResult",
    "SweepRow",
    "TitlesimError",
    "TransportPlan",
    "UnrepresentableError",
    "accuracy",
    "analogy",
    "assign",
    "build_cascade",
    "build_corpus_stats",
    "build_index",
    "centroid",
    "classify",
    "classify_cascade",
    "cosine_similarity",
    "discover_clusters",
    "distance",
    "export_csv",
    "fit_cluster_model",
    "ground_cost_matrix",
    "load_docvecs",
    "load_embeddings",
    "nbow",
    "nearest_words",
    "represent",
    "save_embeddings",
    "search",
    "search_wmd_pruned",
    "solve_transport",
    "sweep_k",
    "tfidf",
    "tokenize",
    "truncated_svd",
    "wcd",
    "wmd",
]
