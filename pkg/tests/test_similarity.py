import math

import numpy as np
import pytest

from langalloc.errors import AlignmentError, InputError, InsufficientDataError
from langalloc.similarity import (
    EmbeddingSet,
    SimilarityMatrix,
    build_similarity_matrix,
    cosine_gap,
    load_embedding_file,
    write_embedding_file,
)


def cosine_gap_double_loop(source, target):
    """Independent O(n^2) oracle over explicit cosine pairs."""
    S, T = source.vectors, target.vectors
    n = S.shape[0]
    aligned = sum(float(S[i] @ T[i]) for i in range(n)) / n
    mis = [float(S[i] @ T[j]) for i in range(n) for j in range(n) if i != j]
    return aligned - sum(mis) / len(mis)


def random_set(rng, lang, n, d):
    return EmbeddingSet.from_rows(lang, rng.standard_normal((n, d)))


def test_identical_vector_gap_is_zero():
    v = [1.0, 0.0, 0.0]
    a = EmbeddingSet.from_rows("a", [v, v, v, v])
    b = EmbeddingSet.from_rows("b", [v, v, v, v])
    assert cosine_gap(a, b) == pytest.approx(0.0, abs=1e-12)


def test_orthonormal_pair_gap_is_one():
    rows = [[1.0, 0.0], [0.0, 1.0]]
    a = EmbeddingSet.from_rows("a", rows)
    b = EmbeddingSet.from_rows("b", rows)
    assert cosine_gap(a, b) == pytest.approx(1.0, abs=1e-12)


def test_matches_double_loop_oracle():
    rng = np.random.default_rng(0)
    for _ in range(50):
        n = int(rng.integers(2, 65))
        d = int(rng.integers(1, 17))
        a = random_set(rng, "a", n, d)
        b = random_set(rng, "b", n, d)
        assert cosine_gap(a, b) == pytest.approx(
            cosine_gap_double_loop(a, b), abs=1e-9
        )


def test_joint_row_permutation_invariance():
    rng = np.random.default_rng(1)
    a = random_set(rng, "a", 16, 5)
    b = random_set(rng, "b", 16, 5)
    perm = rng.permutation(16)
    ap = EmbeddingSet.from_rows("a", a.vectors[perm])
    bp = EmbeddingSet.from_rows("b", b.vectors[perm])
    assert cosine_gap(ap, bp) == pytest.approx(cosine_gap(a, b), abs=1e-9)


def test_single_set_permutation_keeps_all_pairs_mean():
    rng = np.random.default_rng(2)
    a = random_set(rng, "a", 12, 4)
    b = random_set(rng, "b", 12, 4)
    perm = rng.permutation(12)
    bp = EmbeddingSet.from_rows("b", b.vectors[perm])
    total = float(a.vectors.sum(axis=0) @ b.vectors.sum(axis=0))
    total_p = float(a.vectors.sum(axis=0) @ bp.vectors.sum(axis=0))
    assert total == pytest.approx(total_p, abs=1e-9)


def test_row_scaling_before_load_is_neutral():
    rng = np.random.default_rng(3)
    rows = rng.standard_normal((10, 6))
    scales = rng.uniform(0.1, 50.0, size=(10, 1))
    a1 = EmbeddingSet.from_rows("a", rows)
    a2 = EmbeddingSet.from_rows("a", rows * scales)
    b = random_set(rng, "b", 10, 6)
    assert cosine_gap(a1, b) == pytest.approx(cosine_gap(a2, b), abs=1e-9)


def test_rows_unit_normalized_on_load():
    rng = np.random.default_rng(4)
    es = EmbeddingSet.from_rows("x", rng.standard_normal((8, 3)) * 10)
    norms = np.linalg.norm(es.vectors, axis=1)
    assert np.all(np.abs(norms - 1.0) < 1e-6)


def test_dimension_mismatch_raises():
    a = EmbeddingSet.from_rows("a", [[1.0, 0.0], [0.0, 1.0]])
    b = EmbeddingSet.from_rows("b", [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    with pytest.raises(AlignmentError):
        cosine_gap(a, b)


def test_too_few_sentences_raise():
    with pytest.raises(InsufficientDataError):
        EmbeddingSet.from_rows("a", [[1.0, 0.0]])


def test_matrix_identical_sets_score_equals_self_score():
    rng = np.random.default_rng(5)
    rows = rng.standard_normal((10, 4))
    a = EmbeddingSet.from_rows("aa", rows)
    b = EmbeddingSet.from_rows("bb", rows)
    m = build_similarity_matrix([a, b])
    assert m.score("aa", "bb") == pytest.approx(m.score("aa", "aa"), abs=1e-12)


def test_matrix_matches_per_pair_oracle_and_symmetry():
    rng = np.random.default_rng(6)
    sets = [random_set(rng, lang, 9, 4) for lang in ("aa", "bb", "cc")]
    m = build_similarity_matrix(sets)
    for i, si in enumerate(sets):
        for j, sj in enumerate(sets):
            if i == j:
                expected = cosine_gap(si, si)
            else:
                expected = 0.5 * (cosine_gap(si, sj) + cosine_gap(sj, si))
            assert m.score(si.language, sj.language) == pytest.approx(
                expected, abs=1e-12
            )
    assert np.max(np.abs(m.scores - m.scores.T)) < 1e-12


def test_matrix_rejects_duplicates_and_size_mismatch():
    rng = np.random.default_rng(7)
    a = random_set(rng, "aa", 6, 3)
    with pytest.raises(InputError):
        build_similarity_matrix([a, random_set(rng, "aa", 6, 3)])
    with pytest.raises(AlignmentError):
        build_similarity_matrix([a, random_set(rng, "bb", 7, 3)])


def test_embedding_file_roundtrip(tmp_path):
    rng = np.random.default_rng(8)
    es = random_set(rng, "hau", 5, 3)
    path = tmp_path / "hau.txt"
    write_embedding_file(str(path), es, comments=["source: unit test"])
    loaded = load_embedding_file(str(path))
    assert loaded.language == "hau"
    assert loaded.n == 5 and loaded.d == 3
    assert np.max(np.abs(loaded.vectors - es.vectors)) < 1e-12


def test_embedding_file_header_validation(tmp_path):
    path = tmp_path / "bad.txt"
    path.write_text("xx 3 2\n1.0 0.0\n0.0 1.0\n")
    with pytest.raises(InputError):
        load_embedding_file(str(path))


def test_similarity_csv_roundtrip(tmp_path):
    rng = np.random.default_rng(9)
    sets = [random_set(rng, lang, 8, 4) for lang in ("aa", "bb", "cc")]
    m = build_similarity_matrix(sets, provenance="unit-test embeddings")
    path = tmp_path / "sim.csv"
    m.save_csv(str(path))
    loaded = SimilarityMatrix.load_csv(str(path))
    assert loaded.languages == m.languages
    assert loaded.provenance == "unit-test embeddings"
    assert np.max(np.abs(loaded.scores - m.scores)) < 1e-12
