import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from partfam import DatasetError, PartCodeMatrix, builtin_dataset, load_matrix, parse_matrix

P1_TAB_TEXT = """\
\ta1\ta2\ta3\ta4\ta5\ta6\ta7\ta8\ta9
p1\t0\t0\t1\t0\t0\t9\t1\t3\t6
p2\t0\t0\t1\t0\t1\t2\t6\t5\t6
p3\t0\t0\t2\t0\t0\t6\t2\t1\t7
p4\t0\t0\t2\t3\t0\t4\t1\t6\t9
p5\t0\t0\t3\t0\t0\t8\t0\t3\t5
"""


def test_parse_tab_table_with_blank_corner():
    m = parse_matrix(P1_TAB_TEXT)
    assert (m.m, m.K) == (5, 9)
    assert m.part_ids == ("p1", "p2", "p3", "p4", "p5")
    assert m.attribute_names == tuple(f"a{i}" for i in range(1, 10))
    assert m == builtin_dataset("P1")


def test_parse_bare_digits():
    m = parse_matrix("0,0,1\n1,2,3\n")
    assert m.part_ids == ("p1", "p2")
    assert m.codes.tolist() == [[0, 0, 1], [1, 2, 3]]


def test_parse_whitespace_delimited():
    m = parse_matrix("x 1 2\ny 3 4\n")
    assert m.part_ids == ("x", "y")
    assert m.codes.tolist() == [[1, 2], [3, 4]]


def test_single_row_rejected():
    with pytest.raises(DatasetError, match="m=1"):
        parse_matrix("0,0,0,0,0,0,0,0,0")


def test_out_of_range_digit_position():
    with pytest.raises(DatasetError, match=r"digit out of range at \(2,3\)"):
        parse_matrix("1,2,3\n4,5,12\n")


@pytest.mark.parametrize("text, msg", [
    ("1,2,3\n4,x,6\n", r"non-integer cell 'x' at \(2,2\)"),
    ("1,2,3\n4,5\n", "ragged row at line 2"),
    ("p,1,2\np,3,4\n", "duplicate part id 'p' at row 2"),
    ("1,2.5\n3,4\n", "non-integer"),
    ("part,a1\np1,A\np2,1\n", "non-integer"),
])
def test_validation_errors(text, msg):
    with pytest.raises(DatasetError, match=msg):
        parse_matrix(text)


def test_constructor_validates():
    with pytest.raises(DatasetError):
        PartCodeMatrix(("a", "b"), np.array([[1, -1], [0, 0]]))
    with pytest.raises(DatasetError):
        PartCodeMatrix(("a", "a"), np.array([[1], [0]]))


def test_immutable():
    m = builtin_dataset("P1")
    with pytest.raises(ValueError):
        m.codes[0, 0] = 5


@pytest.mark.parametrize("name, row, expected", [
    ("P2", 0, [0, 0, 1, 0, 0, 9, 1, 3, 6]),
    ("P5", 26, [6, 5, 4, 4, 3, 6, 0, 7, 0]),
    ("P5", 20, [7, 0, 0, 0, 3, 0, 7, 8, 0]),
])
def test_builtin_rows(name, row, expected):
    assert builtin_dataset(name).codes[row].tolist() == expected


@pytest.mark.parametrize("name, m", [("P1", 5), ("P2", 10), ("P3", 15), ("P4", 20), ("P5", 27)])
def test_builtin_sizes(name, m):
    d = builtin_dataset(name)
    assert (d.m, d.K) == (m, 9)


def test_builtins_are_nested_prefixes(datasets):
    # each figure is transcribed separately; the shared rows must agree
    for small, big in [("P1", "P2"), ("P2", "P3"), ("P3", "P4"), ("P4", "P5"), ("P3", "P5")]:
        s = datasets[small]
        assert datasets[big].head(s.m) == s


def test_unknown_builtin():
    with pytest.raises(DatasetError):
        builtin_dataset("P9")


def test_json_round_trip_and_shape():
    m = builtin_dataset("P2")
    data = json.loads(m.to_json())
    assert data["parts"][0] == {"id": "p1", "code": [0, 0, 1, 0, 0, 9, 1, 3, 6]}
    assert PartCodeMatrix.from_json(m.to_json()) == m


def test_load_matrix_files(tmp_path):
    m = builtin_dataset("P3")
    (tmp_path / "a.csv").write_text(m.to_csv())
    (tmp_path / "a.json").write_text(m.to_json())
    assert load_matrix(tmp_path / "a.csv") == m
    assert load_matrix(tmp_path / "a.json") == m


codes = st.integers(2, 8).flatmap(
    lambda m: st.integers(1, 12).flatmap(
        lambda k: st.lists(st.lists(st.integers(0, 9), min_size=k, max_size=k),
                           min_size=m, max_size=m)))


@given(codes, st.booleans())
def test_csv_round_trip(rows, custom_ids):
    ids = tuple(f"part-{i}" for i in range(len(rows))) if custom_ids else tuple(
        f"p{i + 1}" for i in range(len(rows)))
    m = PartCodeMatrix(ids, np.array(rows))
    assert parse_matrix(m.to_csv()) == m
