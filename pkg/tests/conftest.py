import numpy as np
import pytest

from titlesim.embeddings import EmbeddingTable
from titlesim.text import Document


def make_table(vectors: dict[str, list[float] | np.ndarray]) -> EmbeddingTable:
    """Embedding table from an explicit word -> vector mapping (insertion order kept)."""
    words = tuple(vectors)
    matrix = np.array([np.asarray(vectors[w], dtype=np.float64) for w in words])
    return EmbeddingTable(
        dim=matrix.shape[1],
        vocab={w: i for i, w in enumerate(words)},
        matrix=matrix,
        words=words,
    )


def random_table(rng: np.random.Generator, n_words: int, dim: int) -> EmbeddingTable:
    words = tuple(f"w{i}" for i in range(n_words))
    matrix = rng.normal(size=(n_words, dim))
    return EmbeddingTable(
        dim=dim, vocab={w: i for i, w in enumerate(words)}, matrix=matrix, words=words
    )


def random_doc(rng: np.random.Generator, doc_id: str, words: tuple[str, ...],
               min_len: int = 1, max_len: int = 6) -> Document:
    length = int(rng.integers(min_len, max_len + 1))
    chosen = rng.choice(len(words), size=length, replace=True)
    return Document.from_text(doc_id, " ".join(words[i] for i in chosen))


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240817)
