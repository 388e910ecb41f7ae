from fractions import Fraction
from types import SimpleNamespace

import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from flatblock import (
    blocked_fraction,
    blocking_probe,
    build_teepee,
    clearance,
    fixture,
    geodesics_between,
    midpoint_census,
    normalize_for_teepee,
)
from flatblock.blocking import _fraction_in_cylinder, geodesic_incidence, min_hitting_set, polygon_coordinates
from flatblock.flow import prepare_endpoints
from oracles import brute_force_hitting_set, torus_half_midpoints, torus_midpoints_same_point

HALF = (mpq(1, 2), mpq(1, 2))


def _coords(report_or_T, S, pts):
    T = report_or_T
    out = set()
    for p in pts:
        _, (x, y) = polygon_coordinates(T, S, p)
        out.add((Fraction(int(x.numerator), int(x.denominator)) % 1, Fraction(int(y.numerator), int(y.denominator)) % 1))
    return out


# -- hitting sets --------------------------------------------------------------

instances = st.integers(1, 7).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.lists(st.sets(st.integers(0, n - 1), min_size=1, max_size=n), min_size=1, max_size=7),
    )
)


@given(instances)
@settings(max_examples=150, deadline=None)
def test_exact_hitting_set_matches_brute_force(inst):
    n, sets = inst
    sets = sets + [{e} for e in range(n)]  # ensure coverable
    chosen, method = min_hitting_set(sets, n)
    assert method == "exact"
    assert set().union(*(sets[i] for i in chosen)) == set(range(n))
    assert len(chosen) == brute_force_hitting_set(sets, n)


@given(instances)
@settings(max_examples=100, deadline=None)
def test_greedy_never_beats_exact(inst):
    n, sets = inst
    sets = sets + [{e} for e in range(n)]
    g, _ = min_hitting_set(sets, n, exact=False)
    e, _ = min_hitting_set(sets, n)
    assert len(e) <= len(g)


def test_uncoverable():
    with pytest.raises(ValueError):
        min_hitting_set([{0}], 2)


def test_budget_falls_back_to_greedy():
    n = 30
    sets = [{i, (i + 1) % n, (i + 7) % n} for i in range(n)]
    chosen, method = min_hitting_set(sets, n, node_budget=5)
    assert method == "greedy"
    assert set().union(*(sets[i] for i in chosen)) == set(range(n))


# -- torus oracle ----------------------------------------------------------------


@pytest.mark.parametrize("L", [2, 5, 8])
def test_torus_midpoints_vs_oracle(L):
    S = fixture("T1")
    rows, T = midpoint_census(S, (0, (0, 0)), (0, (0, 0)), L, doublings=0)
    assert _coords(T, S, rows[0].midpoints) == torus_midpoints_same_point(L)


@pytest.mark.parametrize("L", [2, 5])
def test_torus_half_midpoints_vs_oracle(L):
    S = fixture("T1")
    rows, T = midpoint_census(S, (0, (0, 0)), (0, HALF), L, doublings=0)
    assert _coords(T, S, rows[0].midpoints) == torus_half_midpoints(L)


def test_torus_block_small():
    S = fixture("T1")
    r = blocking_probe(S, (0, (0, 0)), (0, (0, 0)), 6, doublings=1)
    assert [row.size for row in r.rows] == [3, 3]
    assert r.rows[0].method == "exact"
    assert r.rows[1].carried
    assert _coords(r.triangulation, S, r.rows[0].blockers) == torus_midpoints_same_point(6)


def test_torus_block_half_small():
    S = fixture("T1")
    r = blocking_probe(S, (0, (0, 0)), (0, HALF), 6, doublings=0)
    assert r.rows[0].size == 4
    assert _coords(r.triangulation, S, r.rows[0].blockers) == torus_half_midpoints(6)


def test_endpoints_never_block():
    S = fixture("LQ2")
    O, A = (0, (mpq(1, 3), mpq(1, 2))), (1, (mpq(1, 2), mpq(3, 2)))
    r = blocking_probe(S, O, A, 3, doublings=0)
    T = r.triangulation
    for b in r.rows[0].blockers:
        assert T.classify(b)[0] != "vertex"


def test_exact_not_larger_than_greedy():
    S = fixture("LQ2")
    O, A = (0, (mpq(1, 3), mpq(1, 2))), (1, (mpq(1, 2), mpq(3, 2)))
    e = blocking_probe(S, O, A, 3, doublings=0).rows[0]
    g = blocking_probe(S, O, A, 3, mode="greedy", doublings=0).rows[0]
    assert e.size <= g.size


def test_incidence_consistent_with_blocking():
    S = fixture("T1")
    T, cO, cA = prepare_endpoints(S, (0, (0, 0)), (0, HALF))
    geos = geodesics_between(None, None, None, 4, prepared=(T, cO, cA))
    pts = [T.locate_in_polygon(0, (mpq(a, 4), mpq(b, 4))) for a in (1, 3) for b in (1, 3)]
    inc = geodesic_incidence(T, geos, pts)
    assert set().union(*inc) == set(range(len(geos)))


# -- teepees -------------------------------------------------------------------


@pytest.fixture(scope="module")
def lx_setup():
    return normalize_for_teepee(fixture("LX"), (2, 1))


def test_clearance_lx(lx_setup):
    assert clearance(lx_setup) == 2


@pytest.mark.parametrize("k", [0, 1, 2])
def test_teepee_bound_and_members(lx_setup, k):
    s = clearance(lx_setup)
    tp = build_teepee(lx_setup, s / 2**k)
    assert tp.rectangle.case == "singularity"
    assert tp.wraps <= 1
    assert tp.card >= tp.bound
    assert tp.validate() == []


def test_no_teepee_on_complete_direction():
    assert normalize_for_teepee(fixture("L3"), (1, 0)) is None


def test_blocked_fraction_on_member(lx_setup):
    s = clearance(lx_setup)
    tp = build_teepee(lx_setup, s / 4)
    xA, yA = tp.A_dev
    k = tp.ks[len(tp.ks) // 2]
    h = mpq(1, 2)
    x = k + (xA - k) * (1 - h) / (1 + yA)
    fr = blocked_fraction(tp, tp.cylinder_point(x, h))
    assert fr.region == "cylinder"
    assert fr.count >= 1
    assert fr.fraction <= 1 if fr.q is None else fr.bound_ok


def test_blocked_fraction_rejects_endpoints(lx_setup):
    tp = build_teepee(lx_setup, clearance(lx_setup))
    with pytest.raises(ValueError):
        blocked_fraction(tp, tp.O)


def test_thales_five_eighths():
    # y = 1/3, depth 1/2: ratio (1/2 + 1/3)/(1 + 1/3) = 5/8
    card = 40
    stub = SimpleNamespace(card=card, y=mpq(1, 3), A_dev=(mpq(0), mpq(1, 3)), ks=list(range(card)))
    fr = _fraction_in_cylinder(stub, mpq(0), mpq(1, 2))
    assert fr.rho == mpq(5, 8)
    assert fr.q % 8 == 0
    assert fr.count == card // 8
    assert fr.bound_ok
    assert fr.fraction <= mpq(1, fr.q) + mpq(1, card)
