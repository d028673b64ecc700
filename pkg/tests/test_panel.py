import io

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from panelhet.errors import DuplicateCell, EmptyInput, NonNumericValue, PanelTooShort, UnbalancedPanel
from panelhet.panel import PanelData, half_blocks, load_csv, split_half, split_thirds, third_blocks


def _csv(text):
    return io.BytesIO(text.encode("utf-8"))


def test_long_single_unit():
    p = load_csv(_csv("unit,time,value\nu1,1,1.0\nu1,2,2.0\nu1,3,3.0\n"), "long")
    assert (p.N, p.T) == (1, 3)
    np.testing.assert_array_equal(p.values, [[1, 2, 3]])


def test_wide_two_units():
    p = load_csv(_csv("unit,1,2\nu1,1,2\nu2,3,4\n"), "wide")
    assert (p.N, p.T) == (2, 2)
    np.testing.assert_array_equal(p.values, [[1, 2], [3, 4]])


def test_long_missing_cell_names_unit():
    with pytest.raises(UnbalancedPanel) as exc:
        load_csv(_csv("unit,time,value\nu1,1,1.0\nu2,1,1.0\nu2,2,2.0\n"), "long")
    assert exc.value.units == ("u1",)
    assert "u1" in str(exc.value)


def test_long_order_is_normalized():
    p = load_csv(_csv("unit,time,value\nb,2,4\na,2,2\nb,1,3\na,1,1\n"))
    assert p.unit_ids == ("a", "b")
    assert p.time_ids == (1, 2)
    np.testing.assert_array_equal(p.values, [[1, 2], [3, 4]])


def test_numeric_time_labels_sort_numerically():
    p = load_csv(_csv("unit,time,value\na,10,3\na,2,2\na,1,1\n"))
    assert p.time_ids == (1, 2, 10)
    np.testing.assert_array_equal(p.values, [[1, 2, 3]])


def test_wide_unordered_time_columns():
    p = load_csv(_csv("unit,3,1,2\nx,30,10,20\n"), "wide")
    assert p.time_ids == (1, 2, 3)
    np.testing.assert_array_equal(p.values, [[10, 20, 30]])


@pytest.mark.parametrize(
    "text, layout, err",
    [
        ("unit,time,value\nu1,1,1\nu1,1,2\n", "long", DuplicateCell),
        ("unit,time,value\nu1,1,abc\n", "long", NonNumericValue),
        ("unit,time,value\nu1,1,nan\n", "long", NonNumericValue),
        ("unit,time,value\n", "long", EmptyInput),
        ("", "long", EmptyInput),
        ("unit,1,2\nu1,1,\n", "wide", UnbalancedPanel),
        ("unit,1,2\nu1,1,2\nu1,3,4\n", "wide", DuplicateCell),
        ("unit,1,2\nu1,1,x\n", "wide", NonNumericValue),
        ("unit,time\nu1,1\n", "long", EmptyInput),
    ],
)
def test_load_errors(text, layout, err):
    with pytest.raises(err):
        load_csv(_csv(text), layout)


def test_load_from_path_and_bom(tmp_path):
    f = tmp_path / "p.csv"
    f.write_bytes("﻿unit,time,value\nu,1,5\n".encode("utf-8"))
    assert load_csv(f).values[0, 0] == 5.0


def test_panel_is_immutable():
    p = PanelData(("a",), (1, 2), [[1.0, 2.0]])
    with pytest.raises(ValueError):
        p.values[0, 0] = 3.0


@pytest.mark.parametrize(
    "T, blocks",
    [
        (6, ((1, 3), (4, 6))),
        (7, ((1, 4), (4, 7))),
        (2, ((1, 1), (2, 2))),
    ],
)
def test_half_blocks(T, blocks):
    assert half_blocks(T) == blocks


def test_half_odd_lengths_equal():
    a, b = half_blocks(7)
    assert a[1] - a[0] + 1 == 4 and b[1] - b[0] + 1 == 4


@pytest.mark.parametrize(
    "T, blocks",
    [
        (6, ((1, 2), (3, 4), (5, 6))),
        (7, ((1, 3), (3, 5), (5, 7))),
        (3, ((1, 1), (2, 2), (3, 3))),
    ],
)
def test_third_blocks(T, blocks):
    assert third_blocks(T) == blocks


def test_short_panels():
    p1 = PanelData(("a",), (1,), [[1.0]])
    with pytest.raises(PanelTooShort):
        split_half(p1)
    p2 = PanelData(("a",), (1, 2), [[1.0, 2.0]])
    with pytest.raises(PanelTooShort):
        split_thirds(p2)


def test_split_values_follow_blocks():
    p = PanelData(("a", "b"), tuple(range(1, 8)), np.arange(14.0).reshape(2, 7))
    s = split_half(p)
    np.testing.assert_array_equal(s.panels[0].values, p.values[:, :4])
    np.testing.assert_array_equal(s.panels[1].values, p.values[:, 3:])
    assert s.panels[1].time_ids == (4, 5, 6, 7)
    t = split_thirds(p)
    assert [sp.T for sp in t] == [3, 3, 3]


@given(st.integers(min_value=2, max_value=500))
def test_half_blocks_cover_and_lengths(T):
    blocks = half_blocks(T)
    covered = set()
    for a, b in blocks:
        assert b - a + 1 in (T // 2, -(-T // 2))
        covered |= set(range(a, b + 1))
    assert covered == set(range(1, T + 1))


@given(st.integers(min_value=3, max_value=500))
def test_third_blocks_cover(T):
    blocks = third_blocks(T)
    covered = set()
    for a, b in blocks:
        assert b - a + 1 == -(-T // 3)
        covered |= set(range(a, b + 1))
    assert covered == set(range(1, T + 1))
    assert blocks[0][0] == 1 and blocks[-1][1] == T


@settings(max_examples=50)
@given(
    st.integers(min_value=1, max_value=5),
    st.integers(min_value=1, max_value=6),
    st.randoms(use_true_random=False),
)
def test_long_csv_round_trip(n, t, rnd):
    vals = np.array([[rnd.uniform(-1e6, 1e6) for _ in range(t)] for _ in range(n)])
    p = PanelData(tuple(f"u{i}" for i in range(n)), tuple(range(1, t + 1)), vals)
    q = load_csv(p.to_long_csv().encode("utf-8"))
    assert q.unit_ids == p.unit_ids and q.time_ids == p.time_ids
    np.testing.assert_array_equal(q.values, p.values)
