from collections import Counter

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from flatblock import (
    FieldDescriptor,
    decompose_direction,
    det_pair_test,
    direction_scan,
    fixture,
    pure_periodicity_check,
    rational_ratio,
    two_cylinder_witness,
)
from flatblock.cylinders import IncompleteDecomposition
from oracles import L3_RIGHT, L3_UP, origami_cycles

K2 = FieldDescriptor(2)


@pytest.mark.parametrize("d,perm", [((1, 0), L3_RIGHT), ((0, 1), L3_UP)])
def test_l3_axis_directions_match_origami(d, perm):
    dec = decompose_direction(fixture("L3"), d)
    assert dec.complete
    got = Counter((c.width, c.height) for c in dec.cylinders)
    want = Counter((mpq(len(c)), mpq(1)) for c in origami_cycles(perm))
    assert got == want


@given(st.integers(-4, 4), st.integers(1, 4))
@settings(max_examples=15, deadline=None)
def test_square_tiled_directions_complete(p, q):
    # every rational direction on a square-tiled surface is completely periodic
    S = fixture("L3")
    dec = decompose_direction(S, (p, q))
    assert dec.complete
    assert sum(c.area for c in dec.cylinders) == S.area
    assert pure_periodicity_check(dec).kind == "purely-periodic"


def test_l3_period():
    v = pure_periodicity_check(decompose_direction(fixture("L3"), (1, 0)))
    assert sorted(v.multipliers) == [1, 2]
    assert v.base_width == 1
    assert v.period == 2
    assert v.minimal_period == 2


def test_lg_horizontal_incommensurable():
    S = fixture("LG")
    v = pure_periodicity_check(decompose_direction(S, (1, 0)))
    assert v.kind == "incommensurable"
    assert rational_ratio(*v.widths) is None
    assert set(v.widths) == {S.field(1), S.field(mpq(1, 2), mpq(1, 2))}


def test_lq2_horizontal_pair():
    v = pure_periodicity_check(decompose_direction(fixture("LQ2"), (1, 0)))
    assert set(v.widths) == {K2(2), K2(0, 1)}


def test_witness_found_on_lg():
    w = two_cylinder_witness(fixture("LG"), L=2)
    assert w is not None
    assert rational_ratio(*w.widths) is None


def test_no_witness_on_l3():
    assert two_cylinder_witness(fixture("L3"), L=3) is None


def test_incomplete_direction_on_lx():
    S = fixture("LX")
    dec = decompose_direction(S, (2, 1))
    assert not dec.complete
    assert dec.cylinders
    with pytest.raises(IncompleteDecomposition):
        pure_periodicity_check(dec)


@pytest.mark.parametrize("name", ["L3", "LG"])
def test_det_pair(name):
    S = fixture(name)
    a, b, ca, cb = det_pair_test(S, (1, 0))
    assert a.holonomy[1] == 0 and b.holonomy[1] == 0


def test_scan_counts_and_bound():
    r = direction_scan(fixture("LG"), 3)
    assert r.bound_ok
    assert sum(r.counts.values()) == len(r.directions)
    # Veech surface: every saddle connection direction decomposes
    assert r.counts["incomplete"] == 0


def test_cap_undetermined():
    dec = decompose_direction(fixture("LQ2"), (1, 1), cap=mpq(1, 100))
    assert not dec.complete
