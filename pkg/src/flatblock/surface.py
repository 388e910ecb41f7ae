"""Translation surfaces given by polygons glued along edges by translations."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from .exact import QQ, FieldDescriptor, sign
from .geometry import (
    angle_cmp,
    apply_matrix,
    det,
    neg,
    orient,
    polygon_area2,
    segments_intersect,
    sub,
    vec_eq,
)

__all__ = [
    "Polygon",
    "Singularity",
    "SurfaceError",
    "TranslationSurface",
    "validate",
    "stratum",
    "genus_area",
    "apply_gl2",
    "erase_removable",
]


class SurfaceError(ValueError):
    """An invalid surface description."""


@dataclass(frozen=True)
class Polygon:
    name: str
    vertices: tuple

    def __len__(self):
        return len(self.vertices)

    def edge(self, i):
        n = len(self.vertices)
        return sub(self.vertices[(i + 1) % n], self.vertices[i])


@dataclass(frozen=True)
class Singularity:
    """A vertex class; cone angle is ``2 (multiplicity + 1) pi``."""

    index: int
    multiplicity: int
    corners: tuple
    marked: bool = True

    @property
    def removable(self) -> bool:
        return self.multiplicity == 0

    @property
    def cone_angle_over_pi(self) -> int:
        return 2 * (self.multiplicity + 1)


def _check_simple(poly: Polygon):
    pts = poly.vertices
    n = len(pts)
    if n < 3:
        raise SurfaceError(f"polygon {poly.name}: fewer than 3 vertices")
    for i in range(n):
        if vec_eq(pts[i], pts[(i + 1) % n]):
            raise SurfaceError(f"polygon {poly.name}: repeated vertex {i}")
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        for j in range(i + 1, n):
            c, d = pts[j], pts[(j + 1) % n]
            if j == i + 1 or (i == 0 and j == n - 1):
                # adjacent edges may only meet at the shared vertex
                shared = b if j == i + 1 else a
                other = d if j == i + 1 else c
                far = a if j == i + 1 else b
                if orient(far, shared, other) == 0 and sign(
                    (far[0] - shared[0]) * (other[0] - shared[0])
                    + (far[1] - shared[1]) * (other[1] - shared[1])
                ) > 0:
                    raise SurfaceError(f"polygon {poly.name}: edges {i},{j} fold back")
                continue
            if segments_intersect(a, b, c, d):
                raise SurfaceError(f"polygon {poly.name}: not simple (edges {i},{j})")
    if sign(polygon_area2(pts)) <= 0:
        raise SurfaceError(f"polygon {poly.name}: not counterclockwise / zero area")


class TranslationSurface:
    """Validated polygons + translation gluings, with derived vertex data.

    ``gluings`` maps ``(polygon index, edge index)`` to its partner, in both
    directions.  ``unmarked`` holds removable vertex classes that are not
    treated as singular points.
    """

    def __init__(self, polygons, gluings, field: FieldDescriptor = QQ, unmarked=(), name=None):
        self.field = field
        self.name = name
        self.polygons = tuple(
            Polygon(p.name, tuple((field.coerce(x), field.coerce(y)) for x, y in p.vertices))
            for p in polygons
        )
        self.gluings = self._normalize_gluings(gluings)
        self._validate()
        self.unmarked = frozenset(unmarked)
        for c in self.unmarked:
            if self.singularities[c].multiplicity != 0:
                raise SurfaceError(f"vertex class {c} is not removable")

    def _normalize_gluings(self, gluings):
        names = {p.name: i for i, p in enumerate(self.polygons)}

        def ref(r):
            p, e = r
            if not isinstance(p, int):
                if p not in names:
                    raise SurfaceError(f"unknown polygon {p!r}")
                p = names[p]
            if not 0 <= p < len(self.polygons) or not 0 <= e < len(self.polygons[p]):
                raise SurfaceError(f"edge reference {r!r} out of range")
            return (p, e)

        pairs = gluings.items() if isinstance(gluings, dict) else gluings
        out = {}
        for a, b in pairs:
            a, b = ref(a), ref(b)
            if a == b:
                raise SurfaceError(f"edge {a} glued to itself")
            for x, y in ((a, b), (b, a)):
                if x in out and out[x] != y:
                    raise SurfaceError(f"edge {x} glued twice")
                out[x] = y
        return out

    def _validate(self):
        for poly in self.polygons:
            _check_simple(poly)
        for p, poly in enumerate(self.polygons):
            for e in range(len(poly)):
                if (p, e) not in self.gluings:
                    raise SurfaceError(f"edge {poly.name}.e{e} is unglued")
        for (p, e), (q, f) in self.gluings.items():
            u = self.polygons[p].edge(e)
            v = self.polygons[q].edge(f)
            if not vec_eq(u, neg(v)):
                raise SurfaceError(
                    f"edge-vector mismatch: {self.polygons[p].name}.e{e} vs {self.polygons[q].name}.e{f}"
                )
        parent = list(range(len(self.polygons)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for (p, _), (q, _) in self.gluings.items():
            parent[find(p)] = find(q)
        if len({find(i) for i in range(len(self.polygons))}) != 1:
            raise SurfaceError("surface is disconnected")
        self.singularities  # corner walk raises on inconsistent angles
        g_formula, g_euler = self._genus_pair()
        if g_formula != g_euler:
            raise SurfaceError(f"genus formula {g_formula} disagrees with Euler characteristic {g_euler}")

    # -- vertex classes -------------------------------------------------

    def next_corner(self, corner):
        """Counterclockwise successor of a polygon corner around its vertex."""
        p, i = corner
        n = len(self.polygons[p])
        return self.gluings[(p, (i - 1) % n)]

    @cached_property
    def singularities(self) -> tuple:
        seen = {}
        classes = []
        for p, poly in enumerate(self.polygons):
            for i in range(len(poly)):
                if (p, i) in seen:
                    continue
                ring = []
                c = (p, i)
                turns = 0
                while c not in seen:
                    seen[c] = len(classes)
                    ring.append(c)
                    q, j = c
                    pq = self.polygons[q]
                    u = pq.edge(j)
                    v = neg(pq.edge((j - 1) % len(pq)))
                    if angle_cmp(u, v) > 0:
                        turns += 1
                    c = self.next_corner(c)
                if c != (p, i):
                    raise SurfaceError("corner walk did not close")
                if turns < 1:
                    raise SurfaceError("vertex class with total angle below 2 pi")
                classes.append(Singularity(len(classes), turns - 1, tuple(ring)))
        self._corner_class = seen
        return tuple(classes)

    @property
    def corner_class(self) -> dict:
        self.singularities
        return self._corner_class

    def _genus_pair(self):
        ks = [s.multiplicity for s in self.singularities]
        if sum(ks) % 2:
            raise SurfaceError("odd total multiplicity")
        g_formula = 1 + sum(ks) // 2
        V = len(self.singularities)
        E = len(self.gluings) // 2
        F = len(self.polygons)
        chi = V - E + F
        if chi % 2:
            raise SurfaceError("odd Euler characteristic")
        return g_formula, (2 - chi) // 2

    @property
    def marked_classes(self) -> tuple:
        return tuple(s.index for s in self.singularities if s.index not in self.unmarked)

    @property
    def genus(self) -> int:
        return self._genus_pair()[0]

    @cached_property
    def area(self):
        total = self.field(0)
        for poly in self.polygons:
            total = total + polygon_area2(poly.vertices)
        return total / 2

    @cached_property
    def triangulation(self):
        from .triangulation import Triangulation

        return Triangulation.from_surface(self)

    def polygon_index(self, name) -> int:
        for i, p in enumerate(self.polygons):
            if p.name == name:
                return i
        raise KeyError(name)

    def gluing_pairs(self):
        return sorted((a, b) for a, b in self.gluings.items() if a < b)

    def __repr__(self):
        label = self.name or "TranslationSurface"
        return f"<{label}: {len(self.polygons)} polygons, stratum {stratum(self)[0]}, field {self.field}>"


def validate(polygons, gluings, field: FieldDescriptor = QQ, name=None) -> TranslationSurface:
    return TranslationSurface(polygons, gluings, field=field, name=name)


def stratum(surface: TranslationSurface):
    """Sorted non-removable multiplicities and the number of removable classes."""
    ks = sorted(s.multiplicity for s in surface.singularities if s.multiplicity > 0)
    removable = sum(1 for s in surface.singularities if s.multiplicity == 0)
    return ks, removable


def genus_area(surface: TranslationSurface):
    return surface.genus, surface.area


def apply_gl2(surface: TranslationSurface, m) -> TranslationSurface:
    """Image of the surface under the linear map ``m`` (rows of a 2x2 matrix)."""
    f = surface.field
    m = tuple(tuple(f.coerce(x) for x in row) for row in m)
    dt = det(m)
    if sign(dt) == 0:
        raise SurfaceError("singular matrix")
    polys = []
    remap = {}
    for p, poly in enumerate(surface.polygons):
        pts = [apply_matrix(m, v) for v in poly.vertices]
        n = len(pts)
        if sign(dt) < 0:
            pts = [pts[(-k) % n] for k in range(n)]
            for i in range(n):
                remap[(p, i)] = (p, (-i - 1) % n)
        else:
            for i in range(n):
                remap[(p, i)] = (p, i)
        polys.append(Polygon(poly.name, tuple(pts)))
    glue = [(remap[a], remap[b]) for a, b in surface.gluing_pairs()]
    out = TranslationSurface(polys, glue, field=f, name=surface.name)
    if sign(dt) > 0:
        out_unmarked = surface.unmarked
    else:
        old = {c: surface.corner_class[c] for c in surface.corner_class}
        # a reversed polygon's corner k sits at old vertex -k
        cls_map = {}
        for (p, i), c in old.items():
            n = len(surface.polygons[p])
            cls_map[c] = out.corner_class[(p, (-i) % n)]
        out_unmarked = {cls_map[c] for c in surface.unmarked}
    return TranslationSurface(out.polygons, glue, field=f, unmarked=out_unmarked, name=surface.name)


def erase_removable(surface: TranslationSurface) -> TranslationSurface:
    """Stop treating removable vertex classes as singular points."""
    gone = {s.index for s in surface.singularities if s.multiplicity == 0}
    return TranslationSurface(
        surface.polygons, surface.gluing_pairs(), field=surface.field, unmarked=gone, name=surface.name
    )
