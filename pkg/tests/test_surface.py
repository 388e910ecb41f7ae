import pytest
from gmpy2 import mpq

from flatblock import fixture, stratum, validate
from flatblock.fixtures import NAMES
from flatblock.surface import Polygon, SurfaceError, apply_gl2, erase_removable

SQUARE = Polygon("S", ((0, 0), (1, 0), (1, 1), (0, 1)))


def test_torus():
    S = validate([SQUARE], [(("S", 0), ("S", 2)), (("S", 1), ("S", 3))])
    assert stratum(S) == ([], 1)
    assert S.genus == 1
    assert S.area == 1


@pytest.mark.parametrize("name", NAMES)
def test_gauss_bonnet(name):
    S = fixture(name)
    ks, _ = stratum(S)
    assert sum(ks) == 2 * S.genus - 2


@pytest.mark.parametrize(
    "name,area",
    [("T1", mpq(1)), ("L3", mpq(3)), ("SPLIT", mpq(2))],
)
def test_rational_areas(name, area):
    assert fixture(name).area == area


def test_unglued_edge():
    with pytest.raises(SurfaceError, match="unglued"):
        validate([SQUARE], [(("S", 0), ("S", 2))])


def test_vector_mismatch():
    with pytest.raises(SurfaceError, match="mismatch"):
        validate([SQUARE], [(("S", 0), ("S", 1)), (("S", 2), ("S", 3))])


def test_self_glue():
    with pytest.raises(SurfaceError, match="itself"):
        validate([SQUARE], [(("S", 0), ("S", 0)), (("S", 1), ("S", 3))])


def test_clockwise_polygon_rejected():
    cw = Polygon("S", ((0, 0), (0, 1), (1, 1), (1, 0)))
    with pytest.raises(SurfaceError):
        validate([cw], [(("S", 0), ("S", 2)), (("S", 1), ("S", 3))])


def test_disconnected():
    other = Polygon("U", SQUARE.vertices)
    glue = [(("S", 0), ("S", 2)), (("S", 1), ("S", 3)), (("U", 0), ("U", 2)), (("U", 1), ("U", 3))]
    with pytest.raises(SurfaceError, match="disconnected"):
        validate([SQUARE, other], glue)


@pytest.mark.parametrize("m", [((2, 1), (1, 1)), ((1, 0), (0, -1)), ((0, 1), (1, 0))])
def test_gl2_keeps_stratum(m):
    S = fixture("L3")
    U = apply_gl2(S, m)
    assert stratum(U) == stratum(S)
    d = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    assert U.area == abs(d) * S.area


def test_erase_removable():
    S = erase_removable(fixture("T1"))
    assert S.unmarked
    assert stratum(S) == ([], 1)
