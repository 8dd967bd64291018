import math

import pytest

from titlesim.errors import TitlesimError, UnrepresentableError
from titlesim.text import (
    Document,
    SparseVector,
    build_corpus_stats,
    cosine_similarity,
    nbow,
    tfidf,
    tokenize,
)


class TestTokenize:
    def test_lowercases_and_splits_punctuation(self):
        assert tokenize("Senior Java Programmer, NY") == ["senior", "java", "programmer", "ny"]

    def test_alphanumeric_runs_stay_whole(self):
        assert tokenize("J2EE engineer") == ["j2ee", "engineer"]

    def test_hyphen_and_slash_split(self):
        assert tokenize("Entry-level C/C++ dev") == ["entry", "level", "c", "c", "dev"]

    def test_underscore_is_a_separator(self):
        assert tokenize("data_engineer") == ["data", "engineer"]

    def test_unicode_letters_kept(self):
        assert tokenize("Ingénieur logiciel") == ["ingénieur", "logiciel"]

    def test_empty_and_symbol_only(self):
        assert tokenize("") == []
        assert tokenize("+++ !!!") == []


class TestDocument:
    def test_from_text_normalizes(self):
        doc = Document.from_text("d1", "Java, Developer")
        assert doc.tokens == ("java", "developer")
        assert doc.raw == "Java, Developer"

    def test_rejects_inconsistent_tokens(self):
        with pytest.raises(TitlesimError):
            Document("d1", "Java Developer", ("java",))


class TestNbow:
    def test_weights_are_relative_frequencies(self):
        doc = Document.from_text("d", "java java developer")
        bag = nbow(doc)
        assert bag.entries == {"java": 2 / 3, "developer": 1 / 3}
        assert bag.support_size == 2

    def test_weights_sum_to_one(self):
        doc = Document.from_text("d", "a b b c c c")
        assert math.isclose(sum(nbow(doc).entries.values()), 1.0, abs_tol=1e-12)

    def test_empty_document_rejected(self):
        with pytest.raises(UnrepresentableError):
            nbow(Document.from_text("d", "!!!"))


class TestCorpusStats:
    def test_doc_freq_counts_documents_not_occurrences(self):
        docs = [
            Document.from_text("a", "java java java"),
            Document.from_text("b", "java matlab"),
        ]
        stats = build_corpus_stats(docs)
        assert stats.doc_count == 2
        assert stats.doc_freq == {"java": 2, "matlab": 1}

    def test_empty_corpus_rejected(self):
        with pytest.raises(TitlesimError):
            build_corpus_stats([])


class TestTfidf:
    def test_ubiquitous_terms_get_zero_weight(self):
        docs = [Document.from_text(str(i), "java x" + str(i)) for i in range(3)]
        stats = build_corpus_stats(docs)
        vec = tfidf(docs[0], stats)
        # java appears in every document: ln(3/3) = 0, entry dropped
        assert "java" not in vec.entries
        assert "x0" in vec.entries

    def test_result_is_unit_norm(self):
        docs = [
            Document.from_text("a", "java developer"),
            Document.from_text("b", "matlab programmer"),
        ]
        stats = build_corpus_stats(docs)
        assert math.isclose(tfidf(docs[0], stats).norm(), 1.0, abs_tol=1e-12)

    def test_unseen_token_gets_max_idf(self):
        docs = [
            Document.from_text("a", "java developer"),
            Document.from_text("b", "java engineer"),
        ]
        stats = build_corpus_stats(docs)
        vec = tfidf(Document.from_text("q", "java zorp"), stats)
        # df(zorp)=1 -> ln(2); df(java)=2 -> ln(1)=0
        assert set(vec.entries) == {"zorp"}
        assert math.isclose(vec.entries["zorp"], 1.0, abs_tol=1e-12)

    def test_counts_scale_term_weight(self):
        docs = [
            Document.from_text("a", "java java matlab"),
            Document.from_text("b", "ruby"),
        ]
        stats = build_corpus_stats(docs)
        vec = tfidf(docs[0], stats)
        assert math.isclose(vec.entries["java"] / vec.entries["matlab"], 2.0, rel_tol=1e-12)

    def test_all_zero_weights_give_empty_vector(self):
        docs = [Document.from_text(str(i), "java") for i in range(2)]
        stats = build_corpus_stats(docs)
        assert tfidf(docs[0], stats).entries == {}


class TestSparseVector:
    def test_zero_entries_rejected(self):
        with pytest.raises(TitlesimError):
            SparseVector(entries={"a": 0.0})

    def test_norm(self):
        assert math.isclose(SparseVector(entries={"a": 3.0, "b": 4.0}).norm(), 5.0)


class TestCosineSimilarity:
    def test_identical_sparse_vectors(self):
        v = SparseVector(entries={"a": 1.0, "b": 2.0})
        assert math.isclose(cosine_similarity(v, v), 1.0, abs_tol=1e-12)

    def test_disjoint_supports_are_orthogonal(self):
        a = SparseVector(entries={"a": 1.0})
        b = SparseVector(entries={"b": 1.0})
        assert cosine_similarity(a, b) == 0.0

    def test_known_dense_value(self):
        import numpy as np

        assert math.isclose(
            cosine_similarity(np.array([1.0, 2.0]), np.array([2.0, 1.0])), 0.8, abs_tol=1e-12
        )

    def test_scale_invariance(self):
        a = SparseVector(entries={"a": 1.0, "b": 2.0})
        b = SparseVector(entries={"a": 5.0, "b": 10.0})
        assert math.isclose(cosine_similarity(a, b), 1.0, abs_tol=1e-12)

    def test_zero_vector_rejected(self):
        a = SparseVector(entries={"a": 1.0})
        with pytest.raises(TitlesimError):
            cosine_similarity(a, SparseVector(entries={}))

    def test_clamped_to_valid_range(self):
        import numpy as np

        big = np.full(64, 1e154)
        assert cosine_similarity(big, big) <= 1.0
