"""Unfolding rational billiard tables into translation surfaces.

Tables are given by exact vertices and interior angles as fractions of pi.
Two coordinate frames are supported:

* ``euclidean``: ordinary coordinates.  Edge reflections are computed
  directly and must have entries in the table's field.
* ``skew``: the table is the image under a linear map that turns the
  rotation by ``2 pi / N`` into ``[[0, -1], [1, 2 cos(2 pi / N)]]``.  This
  lets e.g. the regular pentagon live over Q(sqrt 5).  The unfolded surface
  is the same linear image of the Euclidean unfolding, which preserves
  every affine invariant (strata, holonomy ranks, periodicity).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from gmpy2 import mpq

from .exact import QQ, FieldDescriptor, FieldMismatch, sign, to_scalar
from .fileformat import BilliardSpec
from .geometry import apply_matrix, det, dot, mat_inv, mat_mul, norm2, polygon_area2, sub
from .surface import Polygon, SurfaceError, TranslationSurface, _check_simple

__all__ = [
    "BilliardError",
    "RationalPolygon",
    "group_order",
    "unfolding_group",
    "zk_unfold",
    "regular_polygon",
    "rectangle_table",
]


class BilliardError(ValueError):
    pass


_COS_2PI_OVER = {
    # 2 cos(2 pi / N) as (rational, sqrt part, d)
    3: (mpq(-1), mpq(0), None),
    4: (mpq(0), mpq(0), None),
    5: (mpq(-1, 2), mpq(1, 2), 5),
    6: (mpq(1), mpq(0), None),
    8: (mpq(0), mpq(1), 2),
    10: (mpq(1, 2), mpq(1, 2), 5),
    12: (mpq(0), mpq(1), 3),
}


def _two_cos(N, field):
    if N not in _COS_2PI_OVER:
        raise BilliardError(f"2cos(2pi/{N}) is not quadratic")
    a, b, d = _COS_2PI_OVER[N]
    if d is None:
        return field(a)
    if field.d != d:
        raise BilliardError(f"skew frame for N={N} needs field sqrt {d}")
    return field(a, b)


@dataclass
class RationalPolygon:
    angles: tuple  # interior angles as fractions of pi
    vertices: tuple
    field: FieldDescriptor = QQ
    frame: str = "euclidean"

    def __post_init__(self):
        m = len(self.vertices)
        if m < 3 or len(self.angles) != m:
            raise BilliardError("need one angle per vertex and at least 3 vertices")
        self.angles = tuple(mpq(a) for a in self.angles)
        self.vertices = tuple((self.field.coerce(x), self.field.coerce(y)) for x, y in self.vertices)
        if any(a <= 0 or a >= 2 for a in self.angles):
            raise BilliardError("angles must lie strictly between 0 and 2 pi")
        if sum(self.angles) != m - 2:
            raise BilliardError(f"angles sum to {sum(self.angles)} pi, expected {m - 2} pi")
        try:
            _check_simple(Polygon("table", self.vertices))
        except SurfaceError as exc:
            raise BilliardError(str(exc)) from None
        if self.frame not in ("euclidean", "skew"):
            raise BilliardError(f"unknown frame {self.frame!r}")
        self._check_angles()

    @property
    def N(self):
        n = 1
        for a in self.angles:
            q = int(a.denominator)
            n = n * q // math.gcd(n, q)
        return n

    def edge(self, i):
        m = len(self.vertices)
        return sub(self.vertices[(i + 1) % m], self.vertices[i])

    def metric(self):
        """Float Gram matrix of the frame (identity for Euclidean)."""
        if self.frame == "euclidean":
            return ((1.0, 0.0), (0.0, 1.0))
        c = math.cos(2 * math.pi / self.N)
        return ((1.0, c), (c, 1.0))

    def rotation(self):
        """Frame matrix of the rotation by 2 pi / N (skew) or pi / 2 (Euclidean)."""
        f = self.field
        if self.frame == "euclidean":
            return ((f(0), f(-1)), (f(1), f(0)))
        if self.N < 3:
            raise BilliardError("skew frame needs N >= 3")
        return ((f(0), f(-1)), (f(1), _two_cos(self.N, f)))

    def reflection(self, i):
        """Linear part of the reflection in edge i, in the frame."""
        e = self.edge(i)
        if self.frame == "euclidean":
            n2 = norm2(e)
            a, b = e
            return ((2 * a * a / n2 - 1, 2 * a * b / n2), (2 * a * b / n2, 2 * b * b / n2 - 1))
        R = self.rotation()
        Ri = mat_inv(R)
        Re, Rie = apply_matrix(R, e), apply_matrix(Ri, e)
        src = ((e[0], Re[0]), (e[1], Re[1]))
        dst = ((e[0], Rie[0]), (e[1], Rie[1]))
        return mat_mul(dst, mat_inv(src))

    def _check_angles(self):
        G = self.metric()
        m = len(self.vertices)

        def ip(u, v):
            u = (float(u[0]), float(u[1]))
            v = (float(v[0]), float(v[1]))
            return sum(G[i][j] * u[i] * v[j] for i in range(2) for j in range(2))

        for i in range(m):
            a = self.edge(i)
            b = self.edge((i - 1) % m)
            back = (-b[0], -b[1])
            cosang = ip(a, back) / math.sqrt(ip(a, a) * ip(back, back))
            ang = math.acos(max(-1.0, min(1.0, cosang)))
            crossz = float(b[0]) * float(a[1]) - float(b[1]) * float(a[0])
            if crossz < 0:  # reflex corner
                ang = 2 * math.pi - ang
            if abs(ang - float(self.angles[i]) * math.pi) > 1e-9:
                raise BilliardError(
                    f"vertex {i}: measured angle {ang / math.pi:.9f} pi, declared {self.angles[i]} pi"
                )

    @classmethod
    def from_spec(cls, spec: BilliardSpec, field: FieldDescriptor):
        return cls(tuple(spec.angles), tuple(spec.vertices), field, spec.frame)


def group_order(P: RationalPolygon) -> int:
    return 2 * P.N


def _key(M):
    return tuple(to_scalar(x) for row in M for x in row)


def unfolding_group(P: RationalPolygon):
    """Elements of the group generated by the edge reflections, BFS order.

    Returns (elements, generators) where elements[0] is the identity.
    """
    m = len(P.vertices)
    try:
        gens = [P.reflection(i) for i in range(m)]
    except FieldMismatch as exc:
        raise BilliardError(str(exc)) from None
    f = P.field
    ident = ((f(1), f(0)), (f(0), f(1)))
    elems = [ident]
    index = {_key(ident): 0}
    k = 0
    limit = 4 * group_order(P)
    while k < len(elems):
        g = elems[k]
        for r in gens:
            h = mat_mul(g, r)
            key = _key(h)
            if key not in index:
                index[key] = len(elems)
                elems.append(h)
                if len(elems) > limit:
                    raise BilliardError("reflection group is larger than expected")
        k += 1
    if len(elems) != group_order(P):
        raise BilliardError(f"reflection group has order {len(elems)}, expected {group_order(P)}")
    return elems, gens, index


def zk_unfold(P: RationalPolygon, name="ZK") -> TranslationSurface:
    """One chart per group element; edge i of g is glued to edge i of g r_i."""
    elems, gens, index = unfolding_group(P)
    m = len(P.vertices)
    polys = []
    flip = []
    for n, g in enumerate(elems):
        pts = [apply_matrix(g, v) for v in P.vertices]
        neg = sign(det(g)) < 0
        if neg:
            pts = [pts[0]] + pts[:0:-1]
        polys.append(Polygon(f"C{n}", tuple(pts)))
        flip.append(neg)

    def local(n, i):
        return (-i - 1) % m if flip[n] else i

    glue = {}
    for n, g in enumerate(elems):
        for i in range(m):
            other = index[_key(mat_mul(g, gens[i]))]
            a, b = (n, local(n, i)), (other, local(other, i))
            if a not in glue:
                glue[a] = b
                glue[b] = a
    pairs = sorted({tuple(sorted((a, b))) for a, b in glue.items()})
    S = TranslationSurface(polys, pairs, field=P.field, name=name)
    expect = group_order(P) * mpq(1, 2) * polygon_area2(P.vertices)
    if sign(S.area - expect) != 0:
        raise AssertionError("unfolded area mismatch")
    return S


def regular_polygon(n: int) -> RationalPolygon:
    """Regular n-gon table with unit circumradius vertices in a quadratic field."""
    ang = mpq(n - 2, n)
    if n == 4:
        return RationalPolygon((mpq(1, 2),) * 4, ((0, 0), (1, 0), (1, 1), (0, 1)))
    if n == 3:
        f = FieldDescriptor(3)
        return RationalPolygon((ang,) * 3, ((0, 0), (1, 0), (mpq(1, 2), f(0, mpq(1, 2)))), f)
    if n == 6:
        f = FieldDescriptor(3)
        h = f(0, mpq(1, 2))
        pts = ((0, 0), (1, 0), (mpq(3, 2), h), (1, 2 * h), (0, 2 * h), (mpq(-1, 2), h))
        return RationalPolygon((ang,) * 6, pts, f)
    if n == 8:
        f = FieldDescriptor(2)
        s = f(0, mpq(1, 2))
        pts = ((0, 0), (1, 0), (1 + s, s), (1 + s, 1 + s), (1, 1 + 2 * s), (0, 1 + 2 * s), (-s, 1 + s), (-s, s))
        return RationalPolygon((ang,) * 8, pts, f)
    if n == 5:
        # skew frame: vertices C^k (1, 0) with C the frame rotation by 2 pi / 5
        f = FieldDescriptor(5)
        C = ((f(0), f(-1)), (f(1), _two_cos(5, f)))
        v = (f(1), f(0))
        pts = []
        for _ in range(5):
            pts.append(v)
            v = apply_matrix(C, v)
        return RationalPolygon((ang,) * 5, tuple(pts), f, "skew")
    raise BilliardError(f"no exact quadratic model for the regular {n}-gon")


def rectangle_table(w, h, field: FieldDescriptor = QQ) -> RationalPolygon:
    return RationalPolygon((mpq(1, 2),) * 4, ((0, 0), (w, 0), (w, h), (0, h)), field)
