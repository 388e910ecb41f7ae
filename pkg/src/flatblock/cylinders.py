"""Cylinder decompositions and periodicity verdicts.

Units: for a direction with primitive vector ``d``, a saddle connection of
holonomy ``lam * d`` has width ``lam``, and heights are measured so that
width times height is the true area.  For ``d = (1, 0)`` both are the
usual Euclidean lengths.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field
from fractions import Fraction

from gmpy2 import mpq

from .exact import is_rational, rational_part, rational_rank, rational_ratio, sign, to_scalar
from .flow import Direction, SaddleConnection, direction, trace_from_corner, trace_ray
from .geometry import add, cross, dot, in_sector, neg, norm2, point_in_triangle, scale, sub
from .triangulation import SurfacePoint

__all__ = [
    "Cylinder",
    "CylinderDecomposition",
    "PurelyPeriodic",
    "Incommensurable",
    "NotDecomposed",
    "FbpFailureWitness",
    "IncompleteDecomposition",
    "decompose_direction",
    "pure_periodicity_check",
    "two_cylinder_witness",
    "det_pair_test",
    "direction_scan",
]


class IncompleteDecomposition(ValueError):
    pass


@dataclass
class Cylinder:
    direction: Direction
    width: object
    height: object
    bottom: tuple  # saddle connections on the lower boundary
    top: tuple
    core: SurfacePoint | None = None  # a point on the core curve
    verified: bool = False

    @property
    def area(self):
        return self.width * self.height

    @property
    def modulus(self):
        return self.height / self.width


@dataclass
class CylinderDecomposition:
    direction: Direction
    cylinders: list
    complete: bool
    saddle_connections: list = dc_field(default_factory=list)
    free: list = dc_field(default_factory=list)  # connections not bounding a cylinder on both sides
    area: object = None

    def adjacency(self):
        """Pairs (i, j, sc) of cylinders sharing a boundary saddle connection."""
        owner_top, owner_bottom = {}, {}
        for i, c in enumerate(self.cylinders):
            for s in c.top:
                owner_top[id(s)] = i
            for s in c.bottom:
                owner_bottom[id(s)] = i
        out = []
        for s in self.saddle_connections:
            i, j = owner_top.get(id(s)), owner_bottom.get(id(s))
            if i is not None and j is not None and i != j:
                out.append((min(i, j), max(i, j), s))
        return out


@dataclass
class PurelyPeriodic:
    base_width: object
    multipliers: tuple
    period: object  # w * p_1 * ... * p_K
    minimal_period: object  # w * lcm(p_i)
    kind: str = "purely-periodic"


@dataclass
class Incommensurable:
    first: int
    second: int
    widths: tuple
    kind: str = "incommensurable"


@dataclass
class NotDecomposed:
    reason: str
    kind: str = "not-decomposed"


@dataclass
class FbpFailureWitness:
    direction: Direction
    cylinders: tuple
    widths: tuple
    shared: SaddleConnection


def _stops(T):
    stops = [c.index for c in T.classes if c.stop or c.multiplicity > 0]
    if not stops:
        stops = [0]
        T = T.with_stops(stops)
    return T, stops


def _default_cap(surface):
    return 64 * (math.isqrt(int(math.ceil(float(surface.area)))) + 1)


class _Walls:
    """Saddle connection pieces indexed by triangle, used as trace barriers."""

    def __init__(self, T, d):
        self.T = T
        self.d = d
        self.by_tri = {}

    def add(self, tag, origin, length_param, chain):
        # origin: developed start point; pieces run origin + mu * d, 0 <= mu <= length_param
        seen = set()
        for t, off in chain:
            key = (t, off)
            if key in seen:
                continue
            seen.add(key)
            self.by_tri.setdefault(t, []).append((tag, sub(origin, off), length_param))

    def __call__(self, t, off, cur, ray):
        best = None
        d = self.d
        for tag, base, lp in self.by_tri.get(t, ()):
            b = add(base, off)
            s = cross(d, sub(b, ray.P0))
            # pieces lying on the entry edge count (s == cur), the start does not
            if sign(s) <= 0 or sign(s - cur) < 0:
                continue
            X = add(ray.P0, scale(s / ray.d2, ray.d))
            mu = dot(sub(X, b), d)
            if sign(mu) < 0 or sign(mu - lp) > 0:
                continue
            interior = sign(mu) > 0 and sign(mu - lp) < 0
            if best is None or sign(s - best[0]) < 0:
                best = (s, (tag, interior, s))
        return best


def _approx_len(x2):
    # wall extent only needs to be a lower bound of the traced length
    return mpq(math.isqrt(int(float(x2))))


def _ray_cycle(T, cls, d):
    """Rays along +d (+1) and -d (-1) at a vertex class, in CCW order."""
    out = []
    md = neg(d)
    for c in T.rings()[cls]:
        u, v = T.sector(c)
        if in_sector(d, u, v):
            out.append((c, 1))
        elif in_sector(md, u, v):
            out.append((c, -1))
    return out


def _arrival_corner(T, corner, back):
    t, i = corner
    if in_sector(back, *T.sector(corner)):
        return corner
    return T.next_corner(corner)


def decompose_direction(surface, dir, cap=None) -> CylinderDecomposition:
    """Cut the surface along the saddle connections in direction ``dir``."""
    dvec = direction(dir)[0] if not isinstance(dir, Direction) else dir
    d = dvec.vector
    T, stops = _stops(surface.triangulation)
    cap = _default_cap(surface) if cap is None else cap
    d2 = norm2(d)
    # east/west rays and their cyclic positions
    cycles = {c: _ray_cycle(T, c, d) for c in stops}
    pos = {}
    for c, cyc in cycles.items():
        for k, (corner, s) in enumerate(cyc):
            pos[(corner, s)] = (c, k)
    walls = _Walls(T, d)
    scs, east_sc, west_sc = [], {}, {}
    lam = {}
    capped = []
    for c in stops:
        for corner, s in cycles[c]:
            if s != 1:
                continue
            res = trace_from_corner(T, corner, d, cap)
            t, k = corner
            P0 = T.tris[t].pts[k]
            if res.kind != "singularity":
                capped.append((corner, 1, res))
                walls.add(None, P0, _approx_len(res.length2 * d2), res.chain)
                continue
            hol = sub(res.end, P0)
            sc = SaddleConnection(c, res.cls, hol, corner, res.chain)
            arrive = _arrival_corner(T, res.corner, neg(d))
            scs.append(sc)
            east_sc[(corner, 1)] = sc
            west_sc[(arrive, -1)] = sc
            lam[id(sc)] = dot(hol, d) / d2
            walls.add(sc, P0, dot(hol, d), res.chain)
    west_missing = [(corner, s) for c in stops for corner, s in cycles[c] if s == -1 and (corner, s) not in west_sc]
    for corner, s in west_missing:
        res = trace_from_corner(T, corner, neg(d), cap)
        t, k = corner
        P0 = T.tris[t].pts[k]
        capped.append((corner, -1, res))
        if res.kind == "singularity":
            # arrival of an east ray that was capped earlier cannot happen; keep as wall
            walls.add(None, res.end, dot(sub(P0, res.end), d), res.chain)
        else:
            lp = _approx_len(res.length2 * d2)
            start = sub(P0, scale(lp / d2, d))
            walls.add(None, start, lp, res.chain)

    sc_arrival = {id(sc): key for key, sc in west_sc.items()}

    def neighbour(sc, step):
        c, k = pos[sc_arrival[id(sc)]]
        cyc = cycles[c]
        ray = cyc[(k + step) % len(cyc)]
        return east_sc.get(ray)

    def cycle_of(sc, step):
        out = [sc]
        nxt = neighbour(sc, step)
        while nxt is not None and nxt is not sc:
            if any(nxt is x for x in out):
                return None
            out.append(nxt)
            nxt = neighbour(nxt, step)
        return tuple(out) if nxt is sc else None

    bottoms, seen = [], set()
    for sc in sorted(scs, key=lambda s: s.sort_key()):
        if id(sc) in seen:
            continue
        cyc = cycle_of(sc, -1)
        if cyc is None:
            continue
        seen.update(id(x) for x in cyc)
        bottoms.append(cyc)

    dperp = (-d[1], d[0])
    cylinders = []
    used_top = set()
    for cyc in bottoms:
        cyl = _sweep(T, walls, cyc, d, dperp, lam, neighbour, cap)
        if cyl is None:
            continue
        cyl = Cylinder(dvec, *cyl)
        if not any(id(s) in used_top for s in cyl.top):
            used_top.update(id(s) for s in cyl.top)
            cylinders.append(cyl)
    cylinders.sort(key=lambda c: (-c.width, -c.height))
    total = sum((c.area for c in cylinders), T.field(0))
    bounded = {id(s) for c in cylinders for s in c.bottom} & {id(s) for c in cylinders for s in c.top}
    free = [s for s in scs if id(s) not in bounded]
    complete = not capped and not free and sign(total - surface.area) == 0
    return CylinderDecomposition(dvec, cylinders, complete, sorted(scs, key=lambda s: s.sort_key()), free, total)


_FRACTIONS = [mpq(1, 2), mpq(1, 3), mpq(2, 3), mpq(1, 5), mpq(2, 5), mpq(3, 7), mpq(5, 11)]


def _sweep(T, walls, bottom, d, dperp, lam, neighbour, cap):
    """Grow the band above a bottom cycle; returns cylinder fields or None."""
    width = sum((lam[id(s)] for s in bottom), T.field(0))
    d2 = norm2(d)
    for s0 in bottom:
        t0, k0 = s0.corner
        origin = add(T.tris[t0].pts[k0], s0.chain[0][1])
        for f in _FRACTIONS:
            M = add(origin, scale(f, s0.holonomy))
            start = None
            for t, off in s0.chain:
                loc = sub(M, off)
                if point_in_triangle(loc, *T.tris[t].pts) >= 0:
                    start = SurfacePoint(t, loc)
                    break
            if start is None:
                continue
            res = trace_ray(T, start, dperp, cap=cap, barrier=walls)
            if res.kind == "singularity":
                continue  # the sweep ran into a vertex, try another foot point
            if res.kind != "barrier":
                return None
            tag, interior, height = res.end
            if tag is None:
                return None
            if not interior:
                continue
            # top cycle runs eastward through the hit connection
            top = [tag]
            nxt = neighbour(tag, 1)
            while nxt is not None and nxt is not tag:
                if any(nxt is x for x in top):
                    return None
                top.append(nxt)
                nxt = neighbour(nxt, 1)
            if nxt is None:
                return None
            top_width = sum((lam[id(s)] for s in top), T.field(0))
            if sign(top_width - width) != 0:
                return None
            mid = trace_ray(T, start, dperp, until=height / 2)
            core = mid.point
            loop = trace_ray(T, core, d, until=2 * width * d2)
            ok = loop.kind == "closed" and sign(loop.length2 - width * width * d2) == 0
            if not ok:
                return None
            return width, height, tuple(bottom), tuple(top), core, True
    return None


def pure_periodicity_check(decomp: CylinderDecomposition):
    if not decomp.complete:
        raise IncompleteDecomposition("decomposition is incomplete")
    cyl = decomp.cylinders
    ratio = {0: mpq(1)}
    adj = {}
    for i, j, s in decomp.adjacency():
        adj.setdefault(i, []).append(j)
        adj.setdefault(j, []).append(i)
    queue = [0]
    while queue:
        i = queue.pop(0)
        for j in sorted(adj.get(i, [])):
            r = rational_ratio(cyl[j].width, cyl[i].width)
            if r is None:
                a, b = sorted((i, j))
                return Incommensurable(a, b, (cyl[a].width, cyl[b].width))
            if j not in ratio:
                ratio[j] = r * ratio[i]
                queue.append(j)
    if len(ratio) != len(cyl):
        # disconnected adjacency cannot occur on a connected surface
        for j in range(len(cyl)):
            r = rational_ratio(cyl[j].width, cyl[0].width)
            if r is None:
                return Incommensurable(0, j, (cyl[0].width, cyl[j].width))
            ratio[j] = r
    rs = [Fraction(int(ratio[j].numerator), int(ratio[j].denominator)) for j in range(len(cyl))]
    num = 0
    den = 1
    for r in rs:
        num = math.gcd(num, r.numerator)
        den = den * r.denominator // math.gcd(den, r.denominator)
    g = mpq(num, den)
    base = cyl[0].width * g
    mult = tuple(int(mpq(r.numerator, r.denominator) / g) for r in rs)
    for c, p in zip(cyl, mult):
        if sign(c.width - p * base) != 0:
            raise AssertionError("width is not a multiple of the base width")
    prod = 1
    l = 1
    for p in mult:
        prod *= p
        l = l * p // math.gcd(l, p)
    return PurelyPeriodic(base, mult, base * prod, base * l)


def _directions_up_to(surface, L, jobs=1):
    from .flow import saddle_connections

    seen = {}
    for sc in saddle_connections(surface, L, jobs=jobs):
        dv, _ = direction(sc.holonomy)
        seen.setdefault(dv, sc.sort_key())
    return sorted(seen, key=lambda dv: seen[dv])


def two_cylinder_witness(surface, dirs=None, cap=None, L=4, jobs=1):
    if dirs is None:
        dirs = _directions_up_to(surface, L, jobs)
    for dv in dirs:
        dec = decompose_direction(surface, dv, cap)
        for i, j, s in dec.adjacency():
            a, b = dec.cylinders[i], dec.cylinders[j]
            if rational_ratio(a.width, b.width) is None:
                return FbpFailureWitness(dec.direction, (a, b), (a.width, b.width), s)
    return None


def det_pair_test(surface, dir, cap=None, decomp=None):
    from .homology import homology_basis, saddle_connection_class

    dec = decomp or decompose_direction(surface, dir, cap)
    if not dec.complete:
        raise IncompleteDecomposition("decomposition is incomplete")
    basis = homology_basis(surface)
    T = surface.triangulation
    coords = [saddle_connection_class(basis, T, s) for s in dec.saddle_connections]
    scs = dec.saddle_connections
    for i in range(len(scs)):
        for j in range(i + 1, len(scs)):
            if sign(cross(scs[i].holonomy, scs[j].holonomy)) != 0:
                continue
            if rational_rank([coords[i], coords[j]]) == 2:
                return scs[i], scs[j], coords[i], coords[j]
    return None


@dataclass
class ScanReport:
    directions: list  # (Direction, status, K)
    counts: dict
    bound_ok: bool


def _scan_one(args):
    surface, dv, cap = args
    dec = decompose_direction(surface, dv, cap)
    if not dec.complete:
        status = "incomplete" if dec.cylinders else "undetermined-by-cap"
        return dv, status, len(dec.cylinders)
    verdict = pure_periodicity_check(dec)
    status = "complete+commensurable" if verdict.kind == "purely-periodic" else "complete+incommensurable"
    return dv, status, len(dec.cylinders)


def direction_scan(surface, L, cap=None, jobs=1):
    dirs = _directions_up_to(surface, L, jobs)
    work = [(surface, dv, cap) for dv in dirs]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            rows = list(ex.map(_scan_one, work))
    else:
        rows = [_scan_one(w) for w in work]
    counts = {k: 0 for k in ("complete+commensurable", "complete+incommensurable", "incomplete", "undetermined-by-cap")}
    g = surface.genus
    n = len(surface.marked_classes)
    bound_ok = True
    for dv, status, K in rows:
        counts[status] += 1
        if status.startswith("complete") and g >= 2 and K > 2 * g + n - 3:
            bound_ok = False
    return ScanReport(rows, counts, bound_ok)
