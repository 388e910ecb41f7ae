import math
from collections import Counter

import pytest
from gmpy2 import mpq

from flatblock import holonomy_qrank, regular_polygon, stratum, zk_unfold
from flatblock.billiard import BilliardError, RationalPolygon, group_order, rectangle_table


def cone_oracle(angles):
    """Multiplicities of the unfolded surface straight from the angles.

    A corner of angle pi m/n (lowest terms) gives N/n points of cone
    angle 2 pi m, where N is the lcm of the denominators.
    """
    fr = [(int(a.numerator), int(a.denominator)) for a in map(mpq, angles)]
    N = 1
    for _, n in fr:
        N = N * n // math.gcd(N, n)
    ks = Counter()
    for m, n in fr:
        ks[m - 1] += N // n
    nonremovable = sorted(k for k, c in ks.items() if k > 0 for _ in range(c))
    return nonremovable, ks[0], N


@pytest.mark.parametrize("n", [3, 4, 5, 6, 8])
def test_regular_polygons_vs_angle_oracle(n):
    P = regular_polygon(n)
    U = zk_unfold(P)
    ks, removable, N = cone_oracle(P.angles)
    assert P.N == N
    assert group_order(P) == 2 * N
    assert len(U.polygons) == 2 * N
    assert stratum(U) == (ks, removable)
    assert 2 * U.genus - 2 == sum(ks)


@pytest.mark.parametrize("n,q", [(3, 2), (4, 2), (6, 2), (5, 4), (8, 4)])
def test_qrank_trichotomy(n, q):
    assert holonomy_qrank(zk_unfold(regular_polygon(n))) == q


def test_rectangle_area():
    U = zk_unfold(rectangle_table(2, 1))
    assert U.area == 8
    assert stratum(U) == ([], 4)


def test_right_triangle():
    P = RationalPolygon((mpq(1, 2), mpq(1, 4), mpq(1, 4)), ((0, 0), (1, 0), (0, 1)))
    U = zk_unfold(P)
    assert (stratum(U), U.genus) == ((sorted(cone_oracle(P.angles)[0]), cone_oracle(P.angles)[1]), 1)


def test_angle_sum_rejected():
    with pytest.raises(BilliardError, match="sum"):
        RationalPolygon((mpq(1, 2),) * 3, ((0, 0), (1, 0), (0, 1)))


def test_measured_angle_mismatch():
    # angles sum correctly but do not match the drawn triangle
    with pytest.raises(BilliardError, match="measured"):
        RationalPolygon((mpq(1, 3), mpq(1, 3), mpq(1, 3)), ((0, 0), (1, 0), (0, 1)))
