import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from partfam import (
    PartCodeMatrix,
    Partition,
    attribute_similarity,
    distance_matrix,
    family_score,
    objective,
    pairwise_similarity,
    similarity_matrix,
)
from partfam.similarity import SymmetricMatrix

from conftest import exact_objective, exact_similarity, fams, p2_distance_matrix


@pytest.mark.parametrize("a, b, r, expected", [
    (5, 5, 9, 1.0),
    (9, 0, 9, 0.0),
    (1, 2, 9, 8 / 9),
])
def test_attribute_similarity(a, b, r, expected):
    assert attribute_similarity(a, b, r) == pytest.approx(expected, abs=1e-15)


def test_attribute_similarity_bad_range():
    with pytest.raises(ValueError):
        attribute_similarity(1, 2, 0)


def test_attribute_terms_average_to_distance(datasets):
    # d(p1,p3) is the mean of the nine per-attribute distances
    codes = datasets["P2"].codes
    per_attr = [1 - attribute_similarity(a, b) for a, b in zip(codes[0], codes[2])]
    assert np.mean(per_attr) == pytest.approx(0.098765, abs=5e-7)


@pytest.mark.parametrize("i, j, expected", [(0, 0, 1.0), (0, 1, 1 - 0.185185), (6, 9, 1 - 0.08642)])
def test_pairwise_similarity(datasets, i, j, expected):
    c = datasets["P2"].codes
    assert pairwise_similarity(c[i], c[j], [9] * 9) == pytest.approx(expected, abs=5e-7)


def test_pairwise_length_mismatch():
    with pytest.raises(ValueError):
        pairwise_similarity([1, 2], [1, 2, 3])
    with pytest.raises(ValueError):
        pairwise_similarity([1, 2], [1, 2], [9])


def test_similarity_matrix_matches_pairwise_bitwise(datasets):
    m = datasets["P5"]
    s = similarity_matrix(m)
    for i, j in itertools.combinations(range(m.m), 2):
        assert s[i, j] == pairwise_similarity(m.codes[i], m.codes[j])


def test_similarity_matrix_entries(datasets):
    s = similarity_matrix(datasets["P2"])
    assert s[0, 4] == pytest.approx(0.938272, abs=5e-7)
    assert s[7, 8] == pytest.approx(0.629630, abs=5e-7)


def test_distance_matrix_golden_values(datasets):
    d = distance_matrix(similarity_matrix(datasets["P2"]))
    np.testing.assert_allclose(d.values, p2_distance_matrix(), atol=5e-7, rtol=0)


def test_similarity_against_exact_rationals(datasets):
    m = datasets["P5"]
    exact = exact_similarity(m.codes)
    s = similarity_matrix(m).values
    for i, j in itertools.product(range(m.m), repeat=2):
        assert s[i, j] == pytest.approx(float(exact[i][j]), abs=1e-15)


def test_identical_rows():
    m = PartCodeMatrix(("a", "b"), np.array([[3, 4, 5], [3, 4, 5]]))
    s = similarity_matrix(m)
    assert s[0, 1] == 1.0
    assert np.all(distance_matrix(s).values == 0.0)


def test_distance_twice_rejected(datasets):
    d = distance_matrix(similarity_matrix(datasets["P1"]))
    with pytest.raises(TypeError):
        distance_matrix(d)


def test_symmetric_matrix_validation():
    with pytest.raises(ValueError):
        SymmetricMatrix(np.array([[1.0, 0.2], [0.3, 1.0]]))
    with pytest.raises(ValueError):
        SymmetricMatrix(np.array([[0.0, 0.2], [0.2, 0.0]]), "similarity")
    with pytest.raises(ValueError):
        SymmetricMatrix(np.eye(2), "angle")


def test_observed_range_mode(datasets):
    m = datasets["P2"]
    s = similarity_matrix(m, "observed")
    # column a1 is constant (all zero) and must count as full agreement
    r = m.codes.max(0) - m.codes.min(0)
    i, j = 0, 7
    expected = np.mean([1.0 if rk == 0 else 1 - abs(int(a) - int(b)) / rk
                        for a, b, rk in zip(m.codes[i], m.codes[j], r)])
    assert s[i, j] == pytest.approx(expected, abs=1e-15)
    assert np.all(np.diag(s.values) == 1.0)


def test_explicit_ranges_validation(datasets):
    with pytest.raises(ValueError):
        similarity_matrix(datasets["P1"], [9] * 8)
    with pytest.raises(ValueError):
        similarity_matrix(datasets["P1"], [9] * 8 + [0])


def test_matrix_csv_export(datasets):
    d = distance_matrix(similarity_matrix(datasets["P2"]))
    lines = d.to_csv().splitlines()
    assert lines[0] == ",p1,p2,p3,p4,p5,p6,p7,p8,p9,p10"
    assert lines[1].split(",")[2] == "0.185185"
    assert lines[7].split(",")[10] == "0.086420"


# values frozen from the rational oracle in conftest.exact_objective
def test_family_score_values(datasets):
    sim2 = similarity_matrix(datasets["P2"])
    assert family_score([0, 2, 3, 4], sim2) == pytest.approx(0.8640535219, abs=1e-9)
    assert round(family_score([0, 2, 3, 4], sim2), 4) == 0.8641
    assert family_score([1], sim2) == 0.0
    assert family_score([0, 4], sim2) == pytest.approx(0.9373342707, abs=1e-9)


def test_family_score_oracle(datasets):
    m = datasets["P2"]
    exact = exact_similarity(m.codes)
    sim = similarity_matrix(m)
    for fam in ([0, 2, 3, 4], [0, 4], [6, 8, 9], list(range(10))):
        assert family_score(fam, sim) == pytest.approx(float(exact_objective([fam], exact)), abs=1e-14)


def test_two_member_score_is_exact(datasets):
    sim = similarity_matrix(datasets["P5"])
    for i, j in itertools.combinations(range(27), 2):
        assert family_score([i, j], sim) == sim[i, j] / 1.001


def test_family_score_errors(datasets):
    sim = similarity_matrix(datasets["P1"])
    with pytest.raises(ValueError):
        family_score([], sim)
    with pytest.raises(IndexError):
        family_score([0, 5], sim)


def test_objective_published_partitions(datasets):
    sim = similarity_matrix(datasets["P1"])
    assert objective(fams([2, 3, 4], [1, 5]), sim) == pytest.approx(1.7559914261, abs=1e-9)
    assert objective(fams([2], [1, 3, 4, 5]), sim) == pytest.approx(0.8640535219, abs=1e-9)


def test_objective_single_identical_family():
    m = PartCodeMatrix(tuple("abcd"), np.tile([1, 2, 3], (4, 1)))
    f = objective(Partition((1, 1, 1, 1), 1), similarity_matrix(m))
    assert f == pytest.approx(6 / 6.001, abs=1e-15)
    assert f < 1.0


def test_objective_ignores_empty_families(datasets):
    sim = similarity_matrix(datasets["P1"])
    with_empty = Partition((1, 2, 1, 1, 2), 3)
    assert with_empty.empty_families == [3]
    assert objective(with_empty, sim) == objective(Partition((1, 2, 1, 1, 2), 2), sim)


def test_objective_size_mismatch(datasets):
    with pytest.raises(ValueError):
        objective(Partition((1, 2), 2), similarity_matrix(datasets["P1"]))


@given(st.data())
def test_objective_against_oracle(data):
    m = data.draw(st.integers(2, 7))
    rows = data.draw(st.lists(st.lists(st.integers(0, 9), min_size=4, max_size=4),
                              min_size=m, max_size=m))
    n = data.draw(st.integers(1, m))
    labels = data.draw(st.lists(st.integers(1, n), min_size=m, max_size=m))
    mat = PartCodeMatrix(tuple(f"q{i}" for i in range(m)), np.array(rows))
    part = Partition(tuple(labels), n)
    got = objective(part, similarity_matrix(mat))
    want = exact_objective(part.families(), exact_similarity(rows))
    assert got == pytest.approx(float(want), abs=1e-12)
