"""Straight-line flow on triangulated translation surfaces.

Rays are followed through developed copies of triangles: a copy is a
triangle id plus a translation ``off`` so that its developed vertices are
``pts + off``.  Every incidence decision is an exact sign test.

Saddle connections and point-to-point geodesics are enumerated by
developing visibility wedges from each corner of the source vertex.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

from gmpy2 import mpq

from .exact import rational_part, sign, sqrt_part, to_scalar
from .geometry import add, cross, dot, norm2, point_in_triangle, sub
from .triangulation import SurfacePoint, Triangulation

__all__ = [
    "Direction",
    "direction",
    "TraceResult",
    "SaddleConnection",
    "GeodesicPath",
    "trace_ray",
    "trace_from_corner",
    "outgoing_separatrices",
    "saddle_connections",
    "geodesics_between",
    "prepare_endpoints",
]


@dataclass(frozen=True)
class Direction:
    """Primitive representative of a direction modulo pi.

    Vertical directions are ``(0, 1)``.  Otherwise ``x`` is the smallest
    positive integer for which ``y`` has integer rational and sqrt parts, so
    rational slopes give primitive integer vectors.
    """

    x: object
    y: object

    @property
    def vector(self):
        return (self.x, self.y)

    def __iter__(self):
        return iter((self.x, self.y))


def direction(v):
    """Canonical :class:`Direction` of v and the orientation flag (+1/-1)."""
    x, y = to_scalar(v[0]), to_scalar(v[1])
    sx, sy = sign(x), sign(y)
    if sx == 0 and sy == 0:
        raise ValueError("zero vector has no direction")
    flag = 1 if (sx > 0 or (sx == 0 and sy > 0)) else -1
    if sx == 0:
        return Direction(mpq(1) * 0, mpq(1)), flag
    m = y / x
    parts = [rational_part(m), sqrt_part(m)]
    den = 1
    for q in parts:
        den = den * q.denominator // _gcd(den, q.denominator)
    if sqrt_part(m) == 0:
        # rational slope: primitive integer vector
        n = int(rational_part(m) * den)
        g = _gcd(den, abs(n))
        return Direction(mpq(den // g), mpq(n // g)), flag
    return Direction(mpq(den), m * den), flag


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


@dataclass
class TraceResult:
    """Outcome of following a ray.

    ``kind`` is ``"singularity"`` (``cls`` is the vertex class hit),
    ``"closed"`` (returned to the start point), ``"barrier"`` (stopped by a
    caller-supplied wall, ``end`` holds its tag) or ``"capped"``.  ``length2``
    is the exact squared length travelled; for ``capped`` it is the length
    at the last chart crossing, which is where ``point`` sits.
    """

    kind: str
    length2: object
    cls: int | None = None
    point: SurfacePoint | None = None
    chain: list = dc_field(default_factory=list)
    corner: tuple | None = None  # arrival corner for singularity hits
    end: tuple | None = None  # developed position of the hit vertex

    @property
    def hit(self):
        return self.kind == "singularity"


class _Ray:
    __slots__ = ("T", "P0", "d", "d2", "cap2", "until", "reps", "barrier")

    def __init__(self, T, P0, d, cap2, until=None, reps=None, barrier=None):
        self.T = T
        self.P0 = P0
        self.d = d
        self.d2 = norm2(d)
        self.cap2 = cap2  # squared length bound
        self.until = until  # stop at this unnormalized parameter
        self.reps = reps
        # barrier(t, off, cur, ray) -> (s, info) for the first wall beyond cur
        self.barrier = barrier

    def beyond(self, s):
        # length = s / |d|; compare s^2 / |d|^2 with cap^2
        return self.cap2 is not None and sign(s * s - self.cap2 * self.d2) > 0

    def run(self, t, off, cur, chain):
        T, P0, d = self.T, self.P0, self.d
        while True:
            chain.append((t, off))
            tri = T.tris[t]
            V = [add(p, off) for p in tri.pts]
            rel = [sub(v, P0) for v in V]
            s = [sign(cross(d, r)) for r in rel]
            if self.reps is not None:
                for rt, loc in self.reps:
                    if rt != t:
                        continue
                    X = sub(add(loc, off), P0)
                    if sign(cross(d, X)) == 0:
                        sx = dot(d, X)
                        if sign(sx - cur) > 0:
                            if self.beyond(sx):
                                return self._capped(t, off, cur, chain)
                            return TraceResult("closed", sx * sx / self.d2, chain=chain)
            wall = self.barrier(t, off, cur, self) if self.barrier is not None else None
            ahead = None
            for i in range(3):
                if s[i] == 0:
                    si = dot(d, rel[i])
                    if sign(si - cur) > 0:
                        ahead = (i, si)
            if ahead is not None:
                i, si = ahead
                if wall is not None and sign(wall[0] - si) <= 0:
                    return self._wall(t, off, wall, chain)
                if self.until is not None and sign(self.until - si) < 0:
                    return self._point(t, off, chain)
                if self.beyond(si):
                    return self._capped(t, off, cur, chain)
                cls = tri.cls[i]
                vc = T.classes[cls]
                if self.until is not None and sign(self.until - si) == 0:
                    return self._point(t, off, chain)
                if vc.stop or vc.multiplicity > 0:
                    return TraceResult(
                        "singularity", si * si / self.d2, cls=cls, chain=chain, corner=(t, i), end=V[i]
                    )
                corners = T.corners_for_direction(cls, d)
                if len(corners) != 1:
                    raise AssertionError("regular vertex with %d outgoing copies" % len(corners))
                t, k = corners[0]
                off = sub(V[i], T.tris[t].pts[k])
                cur = si
                continue
            for i in range(3):
                if s[i] < 0 and s[(i + 1) % 3] > 0:
                    break
            else:
                raise AssertionError("ray does not leave the triangle")
            e = sub(V[(i + 1) % 3], V[i])
            tau = cross(rel[i], e) / cross(d, e)
            se = tau * self.d2
            if wall is not None and sign(wall[0] - se) <= 0:
                return self._wall(t, off, wall, chain)
            if self.until is not None and sign(self.until - se) <= 0:
                return self._point(t, off, chain)
            if self.beyond(se):
                return self._capped(t, off, cur, chain)
            t2, j = T.glue[(t, i)]
            tri2 = T.tris[t2]
            off = sub(V[i], tri2.pts[(j + 1) % 3])
            t = t2
            cur = se

    def _wall(self, t, off, wall, chain):
        sw, info = wall
        tau = sw / self.d2
        X = add(self.P0, (tau * self.d[0], tau * self.d[1]))
        return TraceResult("barrier", sw * sw / self.d2, point=SurfacePoint(t, sub(X, off)), chain=chain, end=info)

    def _point(self, t, off, chain):
        tau = self.until / self.d2
        X = add(self.P0, (tau * self.d[0], tau * self.d[1]))
        loc = sub(X, off)
        return TraceResult("capped", self.until * self.until / self.d2, point=SurfacePoint(t, loc), chain=chain)

    def _capped(self, t, off, cur, chain):
        tau = cur / self.d2
        X = add(self.P0, (tau * self.d[0], tau * self.d[1]))
        return TraceResult("capped", cur * cur / self.d2, point=SurfacePoint(t, sub(X, off)), chain=chain)


def _as_triangulation(obj) -> Triangulation:
    return obj if isinstance(obj, Triangulation) else obj.triangulation


def _cap2(cap):
    return None if cap is None else to_scalar(cap) * to_scalar(cap)


def trace_from_corner(T, corner, d, cap=None, until=None):
    """Follow the ray leaving vertex ``corner = (t, k)`` in direction d."""
    t, k = corner
    P0 = T.tris[t].pts[k]
    ray = _Ray(T, P0, d, _cap2(cap), until)
    return ray.run(t, (T.field(0), T.field(0)), T.field(0), [])


def trace_ray(surface, start, d, cap=None, until=None, barrier=None):
    """Trace the straight line from ``start`` in direction ``d``.

    ``start`` is a :class:`SurfacePoint` or a corner ``(t, k)``.  ``cap``
    bounds the length; ``until`` (an unnormalized parameter ``s`` with the
    stopping point ``start + s / |d|^2 * d``) stops early and reports the
    point reached.
    """
    T = _as_triangulation(surface)
    d = (to_scalar(d[0]), to_scalar(d[1]))
    if isinstance(start, tuple):
        return trace_from_corner(T, start, d, cap, until)
    kind, k = T.classify(start)
    zero = (T.field(0), T.field(0))
    if kind == "vertex":
        cls = T.tris[start.tri].cls[k]
        corners = T.corners_for_direction(cls, d)
        if len(corners) != 1:
            raise ValueError(
                f"direction is not a unique outgoing ray at vertex class {cls} ({len(corners)} copies)"
            )
        return trace_from_corner(T, corners[0], d, cap, until)
    reps = T.representations(start)
    t = start.tri
    if kind == "edge":
        tri = T.tris[t]
        if sign(cross(tri.edge(k), d)) < 0:
            t2, j = T.glue[(t, k)]
            t, loc = next((rt, loc) for rt, loc in reps if rt == t2)
            start = SurfacePoint(t, loc)
    # with walls the caller detects returns itself (the start lies on a wall)
    ray = _Ray(T, start.xy, d, _cap2(cap), until, None if barrier else reps, barrier)
    return ray.run(t, zero, T.field(0), [])


def outgoing_separatrices(surface, cls, d):
    """Corners carrying the k+1 copies of direction d at vertex class cls."""
    T = _as_triangulation(surface)
    return T.corners_for_direction(cls, (to_scalar(d[0]), to_scalar(d[1])))


@dataclass
class SaddleConnection:
    start: int
    end: int
    holonomy: tuple
    corner: tuple  # outgoing corner (t, k) at the start
    chain: list = dc_field(default_factory=list, repr=False)

    @property
    def length2(self):
        return norm2(self.holonomy)

    def sort_key(self):
        return (self.length2, self.holonomy[0], self.holonomy[1], self.corner)


@dataclass
class GeodesicPath(SaddleConnection):
    """A geodesic between two marked points (stored as a saddle connection
    of the triangulation where both points are vertices)."""

    triangulation: Triangulation | None = dc_field(default=None, repr=False)


def _seg_dist2(a, b):
    """Squared distance from the origin to the segment [a, b]."""
    e = sub(b, a)
    t_num = -dot(a, e)
    e2 = norm2(e)
    if sign(t_num) <= 0:
        return norm2(a)
    if sign(t_num - e2) >= 0:
        return norm2(b)
    c = cross(a, e)
    return c * c / e2


def _unlink(node):
    out = []
    while node is not None:
        out.append((node[0], node[1]))
        node = node[2]
    out.reverse()
    return out


def _develop_corner(T, corner, L2, targets):
    """Saddle connections from one corner with squared length <= L2.

    Returns tuples (end class, holonomy, chain)."""
    t0, k0 = corner
    tri0 = T.tris[t0]
    zero = T.field(0)
    off0 = (zero - tri0.pts[k0][0], zero - tri0.pts[k0][1])
    origin = (zero, zero)
    found = []

    def record(res, hol):
        if res.kind == "singularity" and (targets is None or res.cls in targets):
            found.append((res.cls, hol, res.chain))

    # boundary ray along the corner's first edge
    u = tri0.edge(k0)
    if sign(norm2(u) - L2) <= 0:
        ray = _Ray(T, origin, u, L2)
        res = ray.run(t0, off0, zero, [])
        if res.kind == "singularity":
            record(res, res.end)
    wa = u
    wb = sub(tri0.pts[(k0 + 2) % 3], tri0.pts[k0])
    # hot loop: plain scalars and comparison operators (exact for mpq and Quad)
    pts = [tri.pts for tri in T.tris]
    cls_of = [tri.cls for tri in T.tris]
    glue = T.glue
    stopping = [c.stop or c.multiplicity > 0 for c in T.classes]
    # stack items: (t, ox, oy, edge to cross, wa, wb, chain); chains are
    # parent-linked nodes (t, off, parent), expanded on demand
    stack = [(t0, off0[0], off0[1], (k0 + 1) % 3, wa[0], wa[1], wb[0], wb[1], (t0, off0, None))]
    pop, push = stack.pop, stack.append
    while stack:
        t, ox, oy, i, wax, way, wbx, wby, chain = pop()
        P = pts[t]
        p, q = P[i], P[(i + 1) % 3]
        ax, ay = p[0] + ox, p[1] + oy
        bx, by = q[0] + ox, q[1] + oy
        ex, ey = bx - ax, by - ay
        tn = -(ax * ex + ay * ey)
        if tn <= 0:
            if ax * ax + ay * ay > L2:
                continue
        else:
            e2 = ex * ex + ey * ey
            if tn >= e2:
                if bx * bx + by * by > L2:
                    continue
            else:
                cr = ax * ey - ay * ex
                if cr * cr > L2 * e2:
                    continue
        t2, j = glue[(t, i)]
        P2 = pts[t2]
        r = P2[(j + 1) % 3]
        ox2, oy2 = ax - r[0], ay - r[1]
        v = P2[(j + 2) % 3]
        cx, cy = v[0] + ox2, v[1] + oy2
        chain2 = (t2, (ox2, oy2), chain)
        ca = wax * cy - way * cx
        cb = cx * wby - cy * wbx
        if ca > 0 and cb > 0:
            if cx * cx + cy * cy <= L2:
                cc = cls_of[t2][(j + 2) % 3]
                c = (cx, cy)
                if stopping[cc]:
                    if targets is None or cc in targets:
                        found.append((cc, c, _unlink(chain2)))
                else:
                    t3, k3 = T.corners_for_direction(cc, c)[0]
                    off3 = sub(c, T.tris[t3].pts[k3])
                    ray = _Ray(T, origin, c, L2)
                    res = ray.run(t3, off3, norm2(c), _unlink(chain2))
                    if res.kind == "singularity":
                        record(res, res.end)
            push((t2, ox2, oy2, (j + 2) % 3, cx, cy, wbx, wby, chain2))
            push((t2, ox2, oy2, (j + 1) % 3, wax, way, cx, cy, chain2))
        elif cb <= 0:
            push((t2, ox2, oy2, (j + 1) % 3, wax, way, wbx, wby, chain2))
        else:
            push((t2, ox2, oy2, (j + 2) % 3, wax, way, wbx, wby, chain2))
    return found


def _enumerate(T, sources, L, targets, jobs=1):
    L2 = to_scalar(L) * to_scalar(L)
    corners = []
    for s in sources:
        corners.extend((s, c) for c in T.rings()[s])
    args = [(T, c, L2, targets) for _, c in corners]
    if jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            results = list(ex.map(_develop_star, args))
    else:
        results = [_develop_star(a) for a in args]
    out = []
    for (s, c), found in zip(corners, results):
        for end, hol, chain in found:
            out.append(SaddleConnection(s, end, hol, c, chain))
    out.sort(key=SaddleConnection.sort_key)
    return out


def _develop_star(args):
    return _develop_corner(*args)


def saddle_connections(surface, L, jobs=1):
    """All saddle connections of holonomy length <= L, sorted.

    Singular points are the marked vertex classes of the surface; regular
    unmarked vertices are transparent.
    """
    T = _as_triangulation(surface)
    if sign(to_scalar(L)) <= 0:
        return []
    stops = [c.index for c in T.classes if c.stop or c.multiplicity > 0]
    return _enumerate(T, stops, L, None, jobs)


def prepare_endpoints(surface, O, A):
    """Triangulation with O and A inserted as stopping vertices.

    Points are SurfacePoints of the surface's triangulation or
    ``(polygon index, (x, y))`` pairs.  Removable vertex classes other than
    O and A become transparent.  Returns (triangulation, class O, class A).
    """
    T = _as_triangulation(surface)
    f = T.field

    def where(T, p):
        if isinstance(p, SurfacePoint):
            return p
        poly, xy = p
        return T.locate_in_polygon(poly, (f.coerce(xy[0]), f.coerce(xy[1])))

    pO = where(T, O)
    pA = where(T, A)
    T1, cO = T.insert_point(pO, True, "O")
    # relocate A in the refined triangulation through its chart coordinates
    pA1 = _relocate(T, T1, pA)
    T2, cA = T1.insert_point(pA1, True, "A")
    stops = {c.index for c in T2.classes if c.multiplicity > 0} | {cO, cA}
    return T2.with_stops(stops), cO, cA


def _relocate(T_old, T_new, pt):
    poly = T_old.tris[pt.tri].poly
    for t, tri in enumerate(T_new.tris):
        if tri.poly == poly and point_in_triangle(pt.xy, *tri.pts) >= 0:
            return SurfacePoint(t, pt.xy)
    raise AssertionError("point lost during refinement")


def geodesics_between(surface, O, A, L, jobs=1, prepared=None):
    """Geodesics from O to A of length <= L avoiding singularities inside."""
    T, cO, cA = prepared if prepared is not None else prepare_endpoints(surface, O, A)
    if sign(to_scalar(L)) <= 0:
        return []
    found = _enumerate(T, [cO], L, {cA}, jobs)
    return [
        GeodesicPath(g.start, g.end, g.holonomy, g.corner, g.chain, triangulation=T) for g in found
    ]
