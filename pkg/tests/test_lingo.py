import numpy as np
import pytest

from oracles import singular_values_gram
from titlesim.errors import TitlesimError, UnrepresentableError
from titlesim.lingo import (
    Cluster,
    ClusterModel,
    assign,
    discover_clusters,
    fit_cluster_model,
    term_document_matrix,
    truncated_svd,
)
from titlesim.text import Document, SparseVector


def block_corpus():
    """Two groups with disjoint vocabularies; each block is rank one."""
    docs = []
    for i in range(3):
        docs.append(Document.from_text(f"a{i}", "alpha beta"))
    for i in range(3):
        docs.append(Document.from_text(f"b{i}", "gamma delta"))
    return docs


class TestTruncatedSvd:
    def test_identity_matrix(self):
        factors = truncated_svd(np.eye(2), r_max=2)
        assert np.allclose(factors.singular_values, [1.0, 1.0])

    def test_rank_one_drops_null_direction(self):
        factors = truncated_svd(np.array([[1.0, 1.0], [1.0, 1.0]]), r_max=2)
        assert factors.singular_values.shape == (1,)
        assert factors.singular_values[0] == pytest.approx(2.0, rel=1e-12)

    def test_matches_gram_oracle(self, rng):
        for trial in range(20):
            matrix = rng.normal(size=(10, 8))
            factors = truncated_svd(matrix, r_max=8)
            expected = singular_values_gram(matrix)
            assert factors.singular_values == pytest.approx(expected, rel=1e-6, abs=1e-6)

    def test_values_non_increasing(self, rng):
        factors = truncated_svd(rng.normal(size=(7, 5)), r_max=5)
        assert np.all(np.diff(factors.singular_values) <= 0.0)

    def test_r_max_truncates(self, rng):
        factors = truncated_svd(rng.normal(size=(6, 6)), r_max=2)
        assert factors.singular_values.shape == (2,)
        assert factors.term_basis.shape == (6, 2)
        assert factors.doc_coords.shape == (6, 2)

    def test_term_basis_orthonormal(self, rng):
        factors = truncated_svd(rng.normal(size=(9, 6)), r_max=6)
        gram = factors.term_basis.T @ factors.term_basis
        assert np.allclose(gram, np.eye(factors.rank), atol=1e-6)

    def test_sign_convention_first_nonzero_positive(self, rng):
        for trial in range(10):
            factors = truncated_svd(rng.normal(size=(8, 5)), r_max=5)
            for j in range(factors.rank):
                col = factors.term_basis[:, j]
                magnitudes = np.abs(col)
                first = np.nonzero(magnitudes > 1e-12 * magnitudes.max())[0][0]
                assert col[first] > 0.0

    def test_reconstruction_with_all_triples(self, rng):
        matrix = rng.normal(size=(6, 5))
        factors = truncated_svd(matrix, r_max=5)
        rebuilt = factors.term_basis @ factors.doc_coords.T
        assert np.allclose(rebuilt, matrix, atol=1e-6)

    def test_empty_matrix_rejected(self):
        with pytest.raises(TitlesimError):
            truncated_svd(np.zeros((0, 3)), r_max=1)

    def test_zero_matrix_rejected(self):
        with pytest.raises(TitlesimError):
            truncated_svd(np.zeros((3, 3)), r_max=1)

    def test_term_count_mismatch_rejected(self, rng):
        with pytest.raises(TitlesimError):
            truncated_svd(rng.normal(size=(3, 2)), r_max=1, terms=("a", "b"))


class TestDiscoverClusters:
    def test_full_retention_keeps_every_nonzero_value(self, rng):
        factors = truncated_svd(rng.normal(size=(6, 4)), r_max=4)
        model = discover_clusters(factors, q=1.0)
        assert len(model.clusters) == factors.rank

    def test_rank_one_gives_single_cluster(self):
        factors = truncated_svd(np.array([[1.0, 1.0], [1.0, 1.0]]), r_max=2)
        for q in (0.1, 0.5, 1.0):
            assert len(discover_clusters(factors, q=q).clusters) == 1

    def test_block_orthogonal_corpus_gives_two_clusters(self):
        matrix, terms, _ = term_document_matrix(block_corpus())
        factors = truncated_svd(matrix, r_max=min(matrix.shape), terms=terms)
        model = discover_clusters(factors, q=0.9)
        assert len(model.clusters) == 2

    def test_monotone_in_q(self, rng):
        factors = truncated_svd(rng.normal(size=(8, 6)), r_max=6)
        sizes = [len(discover_clusters(factors, q=q).clusters) for q in np.linspace(0.05, 1.0, 12)]
        assert sizes == sorted(sizes)

    def test_labels_use_heaviest_terms(self):
        # the two in-block weights are mathematically tied, so only the
        # token set is pinned down, not their order within the label
        matrix, terms, _ = term_document_matrix(block_corpus())
        factors = truncated_svd(matrix, r_max=min(matrix.shape), terms=terms)
        model = discover_clusters(factors, q=0.9, top_terms=2)
        labels = {frozenset(c.label.split()) for c in model.clusters}
        assert labels == {frozenset({"alpha", "beta"}), frozenset({"gamma", "delta"})}

    def test_label_order_weight_descending_then_lexicographic(self):
        from titlesim.lingo import SvdFactors

        factors = SvdFactors(
            singular_values=np.array([1.0]),
            term_basis=np.array([[0.1], [0.7], [0.1], [0.7]]),
            doc_coords=np.zeros((0, 1)),
            terms=("dd", "cc", "bb", "aa"),
        )
        model = discover_clusters(factors, q=1.0, top_terms=3)
        # weight 0.7 ties: aa before cc; then weight 0.1 ties: bb before dd
        assert model.clusters[0].label == "aa cc bb"

    def test_member_counts_sum_to_corpus_size(self):
        docs = block_corpus()
        matrix, terms, _ = term_document_matrix(docs)
        factors = truncated_svd(matrix, r_max=min(matrix.shape), terms=terms)
        model = discover_clusters(factors, q=0.9)
        assert sum(c.member_count for c in model.clusters) == len(docs)
        assert sorted(c.member_count for c in model.clusters) == [3, 3]

    def test_invalid_q_rejected(self, rng):
        factors = truncated_svd(rng.normal(size=(3, 3)), r_max=3)
        for q in (0.0, -0.3, 1.5):
            with pytest.raises(TitlesimError):
                discover_clusters(factors, q=q)

    def test_directions_unit_norm(self, rng):
        factors = truncated_svd(rng.normal(size=(7, 4)), r_max=4)
        model = discover_clusters(factors, q=1.0)
        for cluster in model.clusters:
            assert np.linalg.norm(cluster.basis_direction) == pytest.approx(1.0, abs=1e-6)


def two_direction_model() -> ClusterModel:
    terms = ("x", "y")
    return ClusterModel(
        clusters=(
            Cluster(label="cx", basis_direction=np.array([1.0, 0.0]), member_count=1),
            Cluster(label="cy", basis_direction=np.array([0.0, 1.0]), member_count=1),
        ),
        q=0.8,
        terms=terms,
    )


class TestAssign:
    def test_doc_on_a_basis_direction(self):
        model = two_direction_model()
        assert assign(SparseVector(entries={"x": 2.0}), model) == 0
        assert assign(SparseVector(entries={"y": 0.5}), model) == 1

    def test_negative_alignment_counts(self):
        model = two_direction_model()
        assert assign(SparseVector(entries={"y": -3.0}), model) == 1

    def test_exact_tie_goes_to_lower_index(self):
        model = ClusterModel(
            clusters=(
                Cluster(label="c0", basis_direction=np.array([1.0, 0.0]), member_count=1),
                Cluster(label="c1", basis_direction=np.array([1.0, 0.0]), member_count=1),
            ),
            q=0.8,
            terms=("x", "y"),
        )
        assert assign(SparseVector(entries={"x": 1.0}), model) == 0

    def test_scale_invariance(self, rng):
        model = two_direction_model()
        vec = {"x": 0.4, "y": 0.9}
        base = assign(SparseVector(entries=vec), model)
        scaled = assign(SparseVector(entries={t: 100.0 * w for t, w in vec.items()}), model)
        assert base == scaled

    def test_unknown_terms_contribute_nothing(self):
        model = two_direction_model()
        assert assign(SparseVector(entries={"x": 1.0, "zzz": 9.0}), model) == 0

    def test_zero_vector_rejected(self):
        with pytest.raises(UnrepresentableError):
            assign(SparseVector(entries={}), two_direction_model())


class TestTermDocumentMatrix:
    def test_shape_and_terms_sorted(self):
        docs = [Document.from_text("a", "java x"), Document.from_text("b", "java y")]
        matrix, terms, stats = term_document_matrix(docs)
        assert terms == tuple(sorted(terms))
        assert matrix.shape == (len(terms), 2)
        assert stats.doc_count == 2

    def test_empty_doc_contributes_zero_column(self):
        docs = [Document.from_text("a", "java x"), Document.from_text("b", "!!!")]
        matrix, terms, _ = term_document_matrix(docs)
        assert matrix.shape[1] == 2
        assert np.all(matrix[:, 1] == 0.0)


class TestFitClusterModel:
    def test_members_align_with_input_order(self):
        docs = block_corpus()
        model, members = fit_cluster_model(docs, q=0.9)
        assert len(members) == len(docs)
        # the two vocabulary groups land in different clusters
        assert len({members[0], members[3]}) == 2
        assert members[0] == members[1] == members[2]
        assert members[3] == members[4] == members[5]

    def test_stats_attached_for_query_vectorizing(self):
        model, _ = fit_cluster_model(block_corpus(), q=0.9)
        assert model.stats is not None
        assert model.stats.doc_count == 6
