"""Acceptance criteria 1-12.

Each test wraps its checks in ``criterion(n)``; the terminal summary then
prints one PASS / FAIL / INCONCLUSIVE line per criterion.
"""

import json
import random
from fractions import Fraction

import pytest
from gmpy2 import mpq

from conftest import Inconclusive, criterion
from flatblock import (
    CaltaTuple,
    FieldDescriptor,
    blocked_fraction,
    build_teepee,
    calta_h11_check,
    clearance,
    decompose_direction,
    det_pair_test,
    direction_scan,
    fixture,
    holonomy_qrank,
    normalize_for_teepee,
    perturb_edge_pair,
    pure_periodicity_check,
    rational_ratio,
    regular_polygon,
    stratum,
    torus_cover_normalize,
    two_cylinder_witness,
    zk_unfold,
)
from flatblock.blocking import blocking_probe
from flatblock.cli import run_command
from flatblock.fixtures import NAMES
from flatblock.homology import NotACaltaTuple
from oracles import torus_half_midpoints, torus_midpoints_same_point

K2 = FieldDescriptor(2)
K5 = FieldDescriptor(5)
H2 = ("L3", "LG", "LQ2", "O8")


def _frac(s):
    return Fraction(s) % 1


def test_criterion_1_stratum_and_genus():
    with criterion(1):
        assert stratum(fixture("T1"))[0] == []
        assert fixture("T1").genus == 1
        for name in H2:
            S = fixture(name)
            assert stratum(S)[0] == [2], name
            assert S.genus == 2
        assert stratum(fixture("SPLIT"))[0] == [1, 1]
        assert fixture("SPLIT").genus == 2
        for name in NAMES:
            S = fixture(name)
            ks = stratum(S)[0]
            assert sum(ks) == 2 * S.genus - 2
            assert Fraction(2 + sum(ks), 2) == S.genus


def test_criterion_2_cylinder_count_bound():
    with criterion(2):
        for name, bound in [(n, 2) for n in H2] + [("SPLIT", 3)]:
            code, rep = run_command(["scan", name, "--length", "4"])
            assert code == 0, name
            Ks = [r["cylinders"] for r in rep["directions"] if r["status"].startswith("complete")]
            assert Ks, name
            assert max(Ks) <= bound, (name, max(Ks))
            assert rep["bound_ok"]


def test_criterion_3_l3_period():
    with criterion(3):
        dec = decompose_direction(fixture("L3"), (1, 0))
        assert sorted(c.width for c in dec.cylinders) == [1, 2]
        v = pure_periodicity_check(dec)
        assert v.kind == "purely-periodic"
        # product formula: base width times the product of the multipliers
        prod = 1
        for p in v.multipliers:
            prod *= p
        assert v.period == v.base_width * prod == 2


def test_criterion_4_incommensurable_pairs():
    with criterion(4):
        a = K5(mpq(1, 2), mpq(1, 2))
        v = pure_periodicity_check(decompose_direction(fixture("LG"), (1, 0)))
        assert v.kind == "incommensurable"
        assert set(v.widths) == {a, K5(1)}
        assert rational_ratio(*v.widths) is None
        v = pure_periodicity_check(decompose_direction(fixture("LQ2"), (1, 0)))
        assert set(v.widths) == {K2(2), K2(0, 1)}
        assert rational_ratio(*v.widths) is None


def test_criterion_5_qrank():
    with criterion(5):
        assert holonomy_qrank(fixture("T1")) == 2
        assert holonomy_qrank(fixture("L3")) == 2
        assert torus_cover_normalize(fixture("L3"))[1] == 1
        assert holonomy_qrank(fixture("LG")) == 4
        got = {n: holonomy_qrank(zk_unfold(regular_polygon(n))) for n in (4, 3, 6, 5)}
        assert got == {4: 2, 3: 2, 6: 2, 5: 4}


def _block(to):
    code, rep = run_command(["block", "T1", "--from", "0,0", "--to", to, "--length", "50", "--doublings", "1", "--exact"])
    assert code == 0
    return rep


@pytest.mark.slow
def test_criterion_6_torus_blocking():
    with criterion("6a"):
        rep = _block("0,0")
        pts = {(_frac(b["x"]), _frac(b["y"])) for b in rep["blockers"]}
        assert pts == torus_midpoints_same_point(50)
        assert len(pts) == 3
        assert rep["stable"]
        assert [r["size"] for r in rep["rows"]] == [3, 3]
        assert all(r["method"] == "exact" for r in rep["rows"])
    with criterion("6b"):
        rep = _block("1/2,1/2")
        pts = {(_frac(b["x"]), _frac(b["y"])) for b in rep["blockers"]}
        assert len(pts) == 4
        assert pts == torus_half_midpoints(50)
        assert rep["stable"]
        assert all(r["method"] == "exact" for r in rep["rows"])


def test_criterion_7_growth_on_lq2():
    with criterion(7):
        S = fixture("LQ2")
        O, A = (0, (mpq(1, 3), mpq(1, 2))), (1, (mpq(1, 2), mpq(3, 2)))
        r = blocking_probe(S, O, A, 3, mode="greedy", doublings=2)
        sizes = [row.size for row in r.rows]
        assert all(a < b for a, b in zip(sizes, sizes[1:])), sizes


# -- criterion 8 --------------------------------------------------------------

BLOCKER_SAMPLES = [(mpq(1, 7), mpq(1, 2)), (mpq(2, 7), mpq(1, 3)), (mpq(3, 7), mpq(2, 3)), (mpq(4, 7), mpq(1, 4)), (mpq(5, 7), mpq(3, 4))]


def _teepee_suite(S, directions):
    """Rectangles, teepees and fractions per direction; returns q per sampled blocker."""
    q_rows = []
    for dv in directions:
        setup = normalize_for_teepee(S, dv)
        assert setup is not None, dv.vector
        s = clearance(setup)
        tps = []
        for k in range(6):
            tp = build_teepee(setup, s / 2**k)
            assert tp.rectangle.case == "singularity" and tp.wraps <= 1, (dv.vector, k)
            assert tp.card >= tp.bound, (dv.vector, k, tp.card, tp.bound)
            tps.append(tp)
        for bx, depth in BLOCKER_SAMPLES:
            row = []
            for tp in tps:
                fr = blocked_fraction(tp, tp.cylinder_point(bx, depth))
                bound = (mpq(1, fr.q) if fr.q else 0) + mpq(1, tp.card)
                assert fr.fraction <= bound, (dv.vector, bx, depth)
                row.append(fr.q)
            q_rows.append((dv.vector, (bx, depth), row))
    return q_rows


def _incomplete(S, L):
    return [dv for dv, st, _ in direction_scan(S, L).directions if st == "incomplete"]


def test_criterion_8_teepee_suite_lq2():
    with criterion(8):
        S = fixture("LQ2")
        dirs = _incomplete(S, 8) or _incomplete(S, 16)
        if not dirs:
            raise Inconclusive("no incomplete periodic direction on LQ2 up to holonomy length 16")
        _check_q_increasing(_teepee_suite(S, dirs))


def _check_q_increasing(q_rows):
    for vec, B, row in q_rows:
        assert all(q is not None for q in row), f"q undefined (irrational Thales ratio) for B={B} in direction {vec}"
        assert all(a < b for a, b in zip(row, row[1:])), f"q not strictly increasing for B={B}: {row}"


@pytest.mark.slow
def test_criterion_8_supplementary_lx():
    """The same suite on LX, which has incomplete periodic directions."""
    S = fixture("LX")
    dirs = _incomplete(S, 4)
    with criterion("8-LX rectangles, card bound, fraction bound"):
        assert len(dirs) >= 1
        q_rows = _teepee_suite(S, dirs)
    with criterion("8-LX q strictly increasing"):
        _check_q_increasing(q_rows)


def test_criterion_9_det_pairs():
    with criterion(9):
        for name in ("L3", "LG"):
            S = fixture(name)
            r = direction_scan(S, 3)
            seen = 0
            for dv, st, _ in r.directions:
                if not st.startswith("complete"):
                    continue
                res = det_pair_test(S, dv)
                assert res is not None, (name, dv.vector)
                a, b, ca, cb = res
                assert a.holonomy[0] * b.holonomy[1] - a.holonomy[1] * b.holonomy[0] == 0
                seen += 1
            assert seen > 0


def test_criterion_10_calta():
    with criterion(10):
        verdict, _, _ = calta_h11_check(CaltaTuple(K5(1), K5(0, 1), K5(1, 1), K5(1, mpq(1, 5)), K5))
        assert verdict == "consistent"
        rng = random.Random(20261019)

        def q(lo, hi):
            return mpq(rng.randint(lo, hi), rng.randint(1, 10))

        for i in range(100):
            f = (K2, K5)[i % 2]
            w2 = f(q(1, 30))
            w1 = w2 * q(1, 20)  # rational ratio
            s1 = f(q(-30, 30), q(-30, 30))
            if i % 4 < 2:
                # the linear relation forces s2 = -(w1/w2) s1
                s2 = -(w1 / w2) * s1
            else:
                s2 = f(q(-30, 30), q(-30, 30))
            try:
                verdict, _, _ = calta_h11_check(CaltaTuple(w1, w2, s1, s2, f))
            except NotACaltaTuple:
                continue
            assert verdict != "consistent"


def _deltas():
    out = []
    for q in range(2, 12):
        for p in (1, -1):
            out.append(mpq(p, q))
    return out[:20]


def test_criterion_11_perturbed_l3():
    with criterion(11):
        S = fixture("L3")
        deltas = _deltas()
        assert len(deltas) == 20
        for c in deltas:
            d = K2(-c, c)  # c (sqrt2 - 1)
            U = perturb_edge_pair(S, ("R", 1), (d, 0))
            w = two_cylinder_witness(U, dirs=[(1, 0)])
            assert w is not None, c
            assert w.direction.vector == (1, 0)
            assert set(w.widths) == {K2(2) + d, K2(1)}
            assert rational_ratio(*w.widths) is None


@pytest.mark.slow
def test_criterion_12_determinism():
    with criterion(12):
        for name in NAMES:
            a = run_command(["scan", name, "--length", "3", "--jobs", "1"])
            b = run_command(["scan", name, "--length", "3", "--jobs", "8"])
            assert json.dumps(a, indent=2) == json.dumps(b, indent=2), name
