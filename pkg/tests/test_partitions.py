import pytest
from hypothesis import given, settings, strategies as st

from crystal_kagome.errors import BeyondBound
from crystal_kagome.partitions import (BoxCoord, PlanePartition, addable_boxes,
                                       enumerate_partitions, macmahon_coeffs,
                                       removable_boxes)
from oracles import macmahon_by_products, plane_partition_heights

# frozen from macmahon_by_products(10) and plane_partition_heights
MACMAHON_10 = [1, 1, 3, 6, 13, 24, 48, 86, 160, 282, 500]

ONE_BOX = PlanePartition.from_boxes([(0, 0, 0)])


def test_empty_enumeration():
    assert enumerate_partitions(0) == [PlanePartition.empty()]


def test_two_box_count():
    assert len(enumerate_partitions(2)) == 3


def test_four_box_count():
    assert len(enumerate_partitions(4)) == 13


def test_enumeration_matches_brute_force_heights():
    for n in range(7):
        ours = sorted(tuple(map(tuple, pp.heights())) for pp in enumerate_partitions(n))
        brute = set()
        for h in plane_partition_heights(n):
            brute.add(tuple(map(tuple, PlanePartition.from_heights(h).heights())))
        assert ours == sorted(brute)


def test_beyond_bound():
    with pytest.raises(BeyondBound):
        enumerate_partitions(13)
    assert len(enumerate_partitions(13, max_boxes=13)) == macmahon_coeffs(13)[13]


def test_enumeration_is_deterministic_and_duplicate_free():
    a = enumerate_partitions(6)
    assert a == enumerate_partitions(6)
    assert len(set(a)) == len(a)


def test_addable_examples():
    assert addable_boxes(PlanePartition.empty()) == {BoxCoord(0, 0, 0)}
    assert len(addable_boxes(ONE_BOX)) == 3
    stacked = PlanePartition.from_boxes([(0, 0, 0), (0, 0, 1)])
    assert addable_boxes(stacked) == {BoxCoord(1, 0, 0), BoxCoord(0, 1, 0), BoxCoord(0, 0, 2)}


def test_removable_examples():
    assert removable_boxes(PlanePartition.empty()) == set()
    assert removable_boxes(ONE_BOX) == {BoxCoord(0, 0, 0)}
    for pp in enumerate_partitions(2):
        (outer,) = removable_boxes(pp)
        assert outer != BoxCoord(0, 0, 0)


def test_macmahon_values():
    assert macmahon_coeffs(0).coeffs == (1,)
    assert list(macmahon_coeffs(4).coeffs) == [1, 1, 3, 6, 13]
    assert list(macmahon_coeffs(10).coeffs) == MACMAHON_10
    assert MACMAHON_10 == macmahon_by_products(10)


def test_macmahon_equals_enumeration():
    coeffs = macmahon_coeffs(10)
    for n in range(11):
        assert len(enumerate_partitions(n)) == coeffs[n]


def test_macmahon_nondecreasing():
    c = macmahon_coeffs(15).coeffs
    assert c[0] == 1
    assert all(c[n] >= c[n - 1] for n in range(1, len(c)))


def test_heights_round_trip():
    for n in range(6):
        for pp in enumerate_partitions(n):
            assert PlanePartition.from_heights(pp.heights()) == pp


def test_invalid_partition_rejected():
    with pytest.raises(ValueError):
        PlanePartition.from_boxes([(0, 0, 1)])


def test_closure_under_growth():
    for n in range(6):
        grown = {pp.add(c) for pp in enumerate_partitions(n) for c in addable_boxes(pp)}
        assert grown == set(enumerate_partitions(n + 1))


@st.composite
def partitions_up_to(draw, n_max=8):
    n = draw(st.integers(0, n_max))
    level = enumerate_partitions(n)
    return level[draw(st.integers(0, len(level) - 1))]


@settings(max_examples=150, deadline=None)
@given(partitions_up_to())
def test_add_then_remove_round_trip(pp):
    for c in addable_boxes(pp):
        assert c in removable_boxes(pp.add(c))


@settings(max_examples=150, deadline=None)
@given(partitions_up_to())
def test_addable_nonempty_removable_empty_iff_vacuum(pp):
    assert addable_boxes(pp)
    assert (not removable_boxes(pp)) == (len(pp) == 0)


@settings(max_examples=100, deadline=None)
@given(partitions_up_to())
def test_sorted_boxes_is_growth_order(pp):
    seen = set()
    for b in pp.sorted_boxes():
        assert all(p in seen for p in b.predecessors())
        seen.add(b)
