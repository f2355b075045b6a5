import pytest
from hypothesis import given, settings, strategies as st

from crystal_kagome.lattice import Window, partition_to_state, state_to_partition, vacuum_state
from crystal_kagome.operators import (CouplingParams, WeightedStateSum, apply_annihilate,
                                      apply_create, count_addable, count_removable,
                                      hamiltonian_action, jw_hamiltonian_action)
from crystal_kagome.partitions import (PlanePartition, addable_boxes, enumerate_partitions,
                                       removable_boxes)

W = Window.for_boxes(7)
UNIT = CouplingParams(1.0, 1.0, 1.0)
EMPTY = PlanePartition.empty()
ONE = PlanePartition.from_boxes([(0, 0, 0)])


def st_of(pp, window=W):
    return partition_to_state(pp, window)


def as_partitions(wsum):
    return {state_to_partition(s): amp for s, amp in wsum.items()}


def test_couplings_validation():
    with pytest.raises(ValueError):
        CouplingParams(q=0.0)
    with pytest.raises(ValueError):
        CouplingParams(J=float("inf"))


def test_weighted_sum_drops_zeros():
    w = WeightedStateSum()
    w.add("a", 1.0)
    w.add("a", -1.0)
    assert len(w) == 0


def test_counts_small_states():
    assert count_addable(st_of(EMPTY)) == 1
    assert count_addable(st_of(ONE)) == 3
    assert count_removable(st_of(EMPTY)) == 0
    assert count_removable(st_of(ONE)) == 1
    for pp in enumerate_partitions(2):
        assert count_removable(st_of(pp)) == 1
    stair = PlanePartition.from_heights([[2, 1], [1]])
    assert count_addable(st_of(stair)) == len(addable_boxes(stair))


def test_create_annihilate_small():
    assert as_partitions(apply_create(st_of(EMPTY))) == {ONE: 1}
    assert as_partitions(apply_create(st_of(ONE))) == {pp: 1 for pp in enumerate_partitions(2)}
    assert len(apply_annihilate(st_of(EMPTY))) == 0
    assert as_partitions(apply_annihilate(st_of(ONE))) == {EMPTY: 1}


def test_growth_images_match_partition_moves_up_to_six_boxes():
    for n in range(7):
        for pp in enumerate_partitions(n):
            s = st_of(pp)
            up = as_partitions(apply_create(s))
            down = as_partitions(apply_annihilate(s))
            assert up == {pp.add(b): 1 for b in addable_boxes(pp)}
            assert down == {pp.remove(b): 1 for b in removable_boxes(pp)}


def test_hamiltonian_examples():
    h0 = as_partitions(hamiltonian_action(st_of(EMPTY), UNIT))
    assert h0 == {ONE: -1, EMPTY: 1}
    h1 = as_partitions(hamiltonian_action(st_of(ONE), UNIT))
    expected = {EMPTY: -1, ONE: 4}
    expected.update({pp: -1 for pp in enumerate_partitions(2)})
    assert h1 == expected


def test_all_couplings_off_gives_empty_sum():
    off = CouplingParams(J=0.0, V=0.0, q=1.0)
    for n in range(4):
        for pp in enumerate_partitions(n):
            assert len(hamiltonian_action(st_of(pp), off)) == 0
            assert len(jw_hamiltonian_action(st_of(pp), off)) == 0


@pytest.mark.parametrize("params", [UNIT, CouplingParams(0.7, -1.3, 0.4), CouplingParams(2.0, 0.5, 2.5)])
def test_spin_form_matches_fermionic_form(params):
    window = Window.for_boxes(5)
    for n in range(5):
        for pp in enumerate_partitions(n):
            s = st_of(pp, window)
            a = hamiltonian_action(s, params)
            b = jw_hamiltonian_action(s, params)
            assert set(a) == set(b)
            for k in a:
                assert abs(a[k] - b[k]) < 1e-12


@st.composite
def partition_states(draw, n_max=6):
    n = draw(st.integers(0, n_max))
    level = enumerate_partitions(n)
    return level[draw(st.integers(0, len(level) - 1))]


@settings(max_examples=60, deadline=None)
@given(partition_states())
def test_grading(pp):
    s = st_of(pp)
    assert all(len(state_to_partition(t)) == len(pp) + 1 for t in apply_create(s))
    assert all(len(state_to_partition(t)) == len(pp) - 1 for t in apply_annihilate(s))
    params = CouplingParams(J=0.0, V=1.0, q=0.5)
    assert set(hamiltonian_action(s, params)) <= {s}


@settings(max_examples=60, deadline=None)
@given(partition_states(5), st.floats(0.1, 3.0), st.floats(-2, 2), st.floats(-2, 2))
def test_hermiticity_pairwise(pp, q, J, V):
    params = CouplingParams(J, V, q)
    s = st_of(pp)
    for t, amp in hamiltonian_action(s, params).items():
        assert hamiltonian_action(t, params).terms.get(s, 0) == pytest.approx(amp)
