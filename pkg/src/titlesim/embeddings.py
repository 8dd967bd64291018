"""Pretrained word vectors: interchange-file I/O, centroids, and analogies.

Vector training is out of scope; tables are loaded from the plain-text
interchange format (header ``V D``, then one ``word v1 ... vD`` line per
word) so any off-the-shelf trainer can feed this package.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from .errors import InputFormatError, TitlesimError, UnrepresentableError


@dataclass(frozen=True)
class EmbeddingTable:
    """Dense word vectors: dimension, word -> row map, and the row matrix."""

    dim: int
    vocab: dict[str, int]
    matrix: np.ndarray
    words: tuple[str, ...]

    def __contains__(self, word: str) -> bool:
        return word in self.vocab

    def vector(self, word: str) -> np.ndarray:
        row = self.vocab.get(word)
        if row is None:
            raise TitlesimError(f"word not in vocabulary: '{word}'")
        return self.matrix[row]


@dataclass(frozen=True)
class DocVecTable:
    """Externally trained per-document vectors keyed by document id."""

    dim: int
    vectors: dict[str, np.ndarray]


def _read_lines(source) -> list[str]:
    data = source.read()
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    return data.split("\n")


def _parse_vector_file(source) -> tuple[int, list[tuple[str, np.ndarray]]]:
    lines = _read_lines(source)
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise InputFormatError("line 1: missing header")
    header = lines[0].split(" ")
    if len(header) != 2:
        raise InputFormatError("line 1: header must be 'V D'")
    try:
        count, dim = int(header[0]), int(header[1])
    except ValueError:
        raise InputFormatError("line 1: header must be two integers 'V D'") from None
    if count < 0 or dim < 1:
        raise InputFormatError("line 1: header counts out of range")
    if len(lines) - 1 != count:
        raise InputFormatError(
            f"line {len(lines)}: declared {count} rows, found {len(lines) - 1}"
        )
    seen = set()
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(" ")
        if len(parts) != dim + 1:
            raise InputFormatError(
                f"line {lineno}: expected 1 word and {dim} values, found {len(parts)} fields"
            )
        word = parts[0]
        if not word:
            raise InputFormatError(f"line {lineno}: empty word")
        if word in seen:
            raise InputFormatError(f"line {lineno}: duplicate word '{word}'")
        seen.add(word)
        try:
            vec = np.array([float(p) for p in parts[1:]], dtype=np.float64)
        except ValueError:
            raise InputFormatError(f"line {lineno}: non-numeric value") from None
        rows.append((word, vec))
    return dim, rows


def load_embeddings(source) -> EmbeddingTable:
    """Load an embedding table from a text or byte stream in interchange format."""
    dim, rows = _parse_vector_file(source)
    words = tuple(word for word, _ in rows)
    vocab = {word: i for i, word in enumerate(words)}
    matrix = (
        np.vstack([vec for _, vec in rows])
        if rows
        else np.empty((0, dim), dtype=np.float64)
    )
    return EmbeddingTable(dim=dim, vocab=vocab, matrix=matrix, words=words)


def load_docvecs(source) -> DocVecTable:
    """Load per-document vectors; same file format with ids in place of words."""
    dim, rows = _parse_vector_file(source)
    return DocVecTable(dim=dim, vectors={doc_id: vec for doc_id, vec in rows})


def save_embeddings(table: EmbeddingTable, sink) -> None:
    """Write a table back out in interchange format, preserving word order."""
    buf = io.StringIO()
    buf.write(f"{len(table.words)} {table.dim}\n")
    for i, word in enumerate(table.words):
        values = " ".join(repr(float(v)) for v in table.matrix[i])
        buf.write(f"{word} {values}\n")
    data = buf.getvalue()
    try:
        sink.write(data.encode("utf-8"))
    except TypeError:
        sink.write(data)


def centroid(tokens, table: EmbeddingTable) -> np.ndarray:
    """Mean of the in-vocabulary token vectors, counted with multiplicity.

    Out-of-vocabulary tokens are skipped; accumulation runs over sorted
    unique tokens so the result is exactly permutation-invariant.
    """
    counts: dict[str, int] = {}
    total = 0
    for tok in tokens:
        if tok in table.vocab:
            counts[tok] = counts.get(tok, 0) + 1
            total += 1
    if total == 0:
        raise UnrepresentableError("no embeddable tokens")
    acc = np.zeros(table.dim, dtype=np.float64)
    for tok in sorted(counts):
        acc += counts[tok] * table.matrix[table.vocab[tok]]
    return acc / total


def nearest_words(
    query: np.ndarray, n: int, table: EmbeddingTable, exclude=frozenset()
) -> list[tuple[str, float]]:
    """Top-n vocabulary words by cosine similarity to `query`, ties lexicographic."""
    if n < 1:
        raise TitlesimError("n must be >= 1")
    query = np.asarray(query, dtype=np.float64)
    qnorm = float(np.linalg.norm(query))
    if qnorm == 0.0:
        raise TitlesimError("zero vector")
    norms = np.linalg.norm(table.matrix, axis=1)
    scored = []
    dots = table.matrix @ query
    for i, word in enumerate(table.words):
        if word in exclude or norms[i] == 0.0:
            continue
        scored.append((word, float(dots[i]) / (float(norms[i]) * qnorm)))
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored[:n]


def analogy(a: str, b: str, c: str, table: EmbeddingTable) -> str:
    """Solve "a is to b as c is to ?" by vector offset: nearest to v(b)-v(a)+v(c)."""
    query = table.vector(b) - table.vector(a) + table.vector(c)
    if float(np.linalg.norm(query)) == 0.0:
        raise TitlesimError("zero vector")
    results = nearest_words(query, 1, table, exclude={a, b, c})
    if not results:
        raise TitlesimError("no candidate words")
    return results[0][0]
