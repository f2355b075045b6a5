import random

import pytest
from hypothesis import given, settings, strategies as st

from crystal_kagome.errors import IllegalFlip, NotAPartitionState, WindowTooSmall
from crystal_kagome.hexagons import BY_LABEL, classify, violates_embargo
from crystal_kagome.lattice import (CREATE_FROM, CREATE_TO, HexagonConfig, LatticeState, SiteId,
                                    Window, box_to_hexagon, flip_hexagon, hexagon_at,
                                    hexagon_sites, hexagons_in_class, occupied,
                                    partition_to_state, state_to_partition, vacuum_state)
from crystal_kagome.partitions import (PlanePartition, addable_boxes, enumerate_partitions,
                                       removable_boxes)

W2 = Window.for_boxes(2)
VAC = vacuum_state(W2)
ONE = PlanePartition.from_boxes([(0, 0, 0)])
ONE_FLIPS = {SiteId.y(0, 1), SiteId.y(0, 3), SiteId.y(-1, 1), SiteId.y(-1, 3),
             SiteId.x(0, 0), SiteId.x(0, 2)}


def one_box_state():
    return partition_to_state(ONE, W2)


def test_window_too_small():
    with pytest.raises(WindowTooSmall):
        vacuum_state(Window(-1, 2, -4, 4))


def test_vacuum_occupations():
    assert occupied(VAC, SiteId.x(0, 2))
    assert not occupied(VAC, SiteId.x(0, 0))
    assert occupied(VAC, SiteId.y(0, 1))
    assert not occupied(VAC, SiteId.y(0, 3))


def test_vacuum_hexagons():
    assert hexagon_at(VAC, 0, 0).positions == CREATE_FROM
    # hand-read from the staggered pattern: Y rows 0 and -1 occupied at r = -7/2
    assert classify(hexagon_at(VAC, 0, -4)) == BY_LABEL["2_15"]


def test_vacuum_has_single_addable_hexagon_in_wide_window():
    wide = vacuum_state(Window(-10, 10, -20, 20))
    assert hexagons_in_class(wide, CREATE_FROM) == [(0, 0)]
    assert hexagons_in_class(wide, CREATE_TO) == []


def test_vacuum_hexagons_all_allowed():
    wide = vacuum_state(Window(-10, 10, -20, 20))
    for a, m in wide.window.anchors():
        assert classify(hexagon_at(wide, a, m)) is not None


def test_one_box_state():
    s = one_box_state()
    assert s.flips == ONE_FLIPS
    assert occupied(s, SiteId.y(0, 3))
    assert not occupied(s, SiteId.x(0, 2))
    assert hexagon_at(s, 0, 0).positions == CREATE_TO


def test_two_box_states_from_hexagon_flips():
    one = one_box_state()
    # the three addable hexagons of the 1-box state
    expected = {one.toggled(hexagon_sites(a, m)) for a, m in [(-1, 1), (1, 1), (0, -2)]}
    got = {partition_to_state(pp, W2) for pp in enumerate_partitions(2)}
    assert got == expected


def test_flip_examples():
    assert flip_hexagon(VAC, 0, 0, "create") == one_box_state()
    assert flip_hexagon(one_box_state(), 0, 0, "annihilate") == VAC
    with pytest.raises(IllegalFlip):
        flip_hexagon(VAC, 0, 0, "annihilate")


def test_state_to_partition_examples():
    assert state_to_partition(VAC) == PlanePartition.empty()
    assert state_to_partition(one_box_state()) == ONE
    with pytest.raises(NotAPartitionState):
        state_to_partition(LatticeState(W2, frozenset({SiteId.y(0, 1)})))


def test_hexagon_at_errors():
    with pytest.raises(WindowTooSmall):
        hexagon_at(VAC, 50, 0)
    with pytest.raises(ValueError):
        hexagon_at(VAC, 0, 1)


def test_site_validation():
    with pytest.raises(ValueError):
        SiteId.x(0, 1).validate()
    with pytest.raises(ValueError):
        SiteId.y(0, 2).validate()


def test_state_json_round_trip():
    s = partition_to_state(PlanePartition.from_heights([[2, 1], [1]]))
    assert LatticeState.from_json(s.to_json()) == s


def test_box_to_hexagon_origin():
    assert box_to_hexagon((0, 0, 0)) == (0, 0)


def _embargo_free(state):
    occ = {s for s in state.window.sites() if occupied(state, s)}
    for s in occ:
        if s.kind == "Y":
            if SiteId.y(s.row, s.pos + 2) in occ:
                return False
        else:
            # X site m touches Y rows a and a-1 at m -/+ 1/2
            for row in (s.row, s.row - 1):
                for r2 in (2 * s.pos - 1, 2 * s.pos + 1):
                    if SiteId.y(row, r2) in occ:
                        return False
    return True


def test_distance_embargo_on_partition_states():
    for n in range(7):
        for pp in enumerate_partitions(n):
            assert _embargo_free(partition_to_state(pp))


def test_round_trip_up_to_eight_boxes():
    for n in range(9):
        for pp in enumerate_partitions(n):
            assert state_to_partition(partition_to_state(pp)) == pp


def test_class_counts_match_partition_moves():
    for n in range(7):
        for pp in enumerate_partitions(n):
            s = partition_to_state(pp)
            assert len(hexagons_in_class(s, CREATE_FROM)) == len(addable_boxes(pp))
            assert len(hexagons_in_class(s, CREATE_TO)) == len(removable_boxes(pp))


def test_all_hexagons_of_partition_states_allowed():
    for n in range(5):
        for pp in enumerate_partitions(n):
            s = partition_to_state(pp)
            for a, m in s.window.anchors():
                assert not violates_embargo(hexagon_at(s, a, m))


@st.composite
def partitions_up_to(draw, n_max=7):
    n = draw(st.integers(0, n_max))
    level = enumerate_partitions(n)
    return level[draw(st.integers(0, len(level) - 1))]


@settings(max_examples=80, deadline=None)
@given(partitions_up_to(), st.integers(0, 2**32 - 1))
def test_growth_order_independence(pp, seed):
    rng = random.Random(seed)
    remaining, seen, order = set(pp.boxes), set(), []
    while remaining:
        ready = sorted(b for b in remaining if all(p in seen for p in b.predecessors()))
        b = rng.choice(ready)
        order.append(b)
        seen.add(b)
        remaining.remove(b)
    assert partition_to_state(pp, order=order) == partition_to_state(pp)


@settings(max_examples=80, deadline=None)
@given(partitions_up_to())
def test_flip_involution(pp):
    s = partition_to_state(pp, Window.for_boxes(len(pp) + 1))
    for a, m in hexagons_in_class(s, CREATE_FROM):
        assert flip_hexagon(flip_hexagon(s, a, m, "create"), a, m, "annihilate") == s


def test_hexagon_config_layout():
    cfg = HexagonConfig.from_positions([1, 4, 5])
    assert cfg.bits == (True, False, False, True, True, False)
    assert cfg[4] and not cfg[3]
