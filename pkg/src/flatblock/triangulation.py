"""Triangulated charts of a translation surface.

Every polygon is ear-clipped into triangles; polygon edges keep their
gluings and diagonals are glued internally.  Extra points (blocking
endpoints, marked points) can be inserted as new vertices.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .geometry import (
    add,
    angle_cmp,
    in_sector,
    on_segment,
    orient,
    point_in_triangle,
    scale,
    sub,
    vec_eq,
)

__all__ = ["Tri", "VertexClass", "Triangulation", "SurfacePoint"]


@dataclass(frozen=True)
class Tri:
    pts: tuple  # three CCW vertices in chart coordinates
    cls: tuple  # vertex class of each corner
    poly: int  # polygon the triangle came from (-1 for none)

    def edge(self, i):
        return sub(self.pts[(i + 1) % 3], self.pts[i])


@dataclass(frozen=True)
class VertexClass:
    index: int
    multiplicity: int
    stop: bool  # True if geodesics end here
    label: str = ""


@dataclass(frozen=True)
class SurfacePoint:
    """A point of the surface in the chart of triangle ``tri``."""

    tri: int
    xy: tuple


def _ear_clip(pts):
    idx = list(range(len(pts)))
    out = []
    while len(idx) > 3:
        n = len(idx)
        for k in range(n):
            i0, i1, i2 = idx[(k - 1) % n], idx[k], idx[(k + 1) % n]
            a, b, c = pts[i0], pts[i1], pts[i2]
            if orient(a, b, c) <= 0:
                continue
            if any(
                point_in_triangle(pts[j], a, b, c) >= 0 for j in idx if j not in (i0, i1, i2)
            ):
                continue
            out.append((i0, i1, i2))
            idx.pop(k)
            break
        else:
            raise ValueError("ear clipping failed (polygon not simple?)")
    out.append(tuple(idx))
    return out


class Triangulation:
    def __init__(self, tris, glue, classes, field):
        self.tris = list(tris)
        self.glue = dict(glue)
        self.classes = list(classes)
        self.field = field
        self._rings = None

    # -- construction ---------------------------------------------------

    @classmethod
    def from_surface(cls, surface):
        tris = []
        glue = {}
        poly_edge = {}
        corner_cls = surface.corner_class
        for p, poly in enumerate(surface.polygons):
            n = len(poly.vertices)
            diag = {}
            for i0, i1, i2 in _ear_clip(poly.vertices):
                t = len(tris)
                tri_idx = (i0, i1, i2)
                tris.append(
                    Tri(
                        tuple(poly.vertices[i] for i in tri_idx),
                        tuple(corner_cls[(p, i)] for i in tri_idx),
                        p,
                    )
                )
                for e in range(3):
                    a, b = tri_idx[e], tri_idx[(e + 1) % 3]
                    if b == (a + 1) % n:
                        poly_edge[(p, a)] = (t, e)
                    else:
                        diag[(a, b)] = (t, e)
            for (a, b), te in diag.items():
                glue[te] = diag[(b, a)]
        for pe, qf in surface.gluings.items():
            glue[poly_edge[pe]] = poly_edge[qf]
        classes = [
            VertexClass(s.index, s.multiplicity, s.index not in surface.unmarked)
            for s in surface.singularities
        ]
        tri = cls(tris, glue, classes, surface.field)
        tri.poly_edge = poly_edge
        return tri

    def copy(self):
        out = Triangulation(self.tris, self.glue, self.classes, self.field)
        out.poly_edge = getattr(self, "poly_edge", {})
        return out

    def with_stops(self, stops):
        """Copy whose stop set is exactly the given vertex classes."""
        out = self.copy()
        stops = set(stops)
        out.classes = [replace(c, stop=c.index in stops) for c in self.classes]
        return out

    # -- vertex rings ---------------------------------------------------

    def next_corner(self, corner):
        t, k = corner
        return self.glue[(t, (k - 1) % 3)]

    def rings(self):
        if self._rings is None:
            rings = {c.index: [] for c in self.classes}
            seen = set()
            for t in range(len(self.tris)):
                for k in range(3):
                    if (t, k) in seen:
                        continue
                    c = (t, k)
                    ring = []
                    while c not in seen:
                        seen.add(c)
                        ring.append(c)
                        c = self.next_corner(c)
                    rings[self.tris[t].cls[k]].append(ring)
            # a class always forms a single ring; the list guards construction bugs
            for key, rs in rings.items():
                if len(rs) != 1:
                    raise ValueError(f"vertex class {key} has {len(rs)} rings")
            self._rings = {k: rs[0] for k, rs in rings.items()}
        return self._rings

    def sector(self, corner):
        t, k = corner
        tri = self.tris[t]
        return tri.edge(k), sub(tri.pts[(k + 2) % 3], tri.pts[k])

    def corners_for_direction(self, cls_index, d):
        """Corners of the vertex class whose half-open sector contains d."""
        return [c for c in self.rings()[cls_index] if in_sector(d, *self.sector(c))]

    # -- point location -------------------------------------------------

    def locate_in_polygon(self, poly_index, xy):
        """SurfacePoint for a point given in polygon coordinates."""
        for t, tri in enumerate(self.tris):
            if tri.poly == poly_index and point_in_triangle(xy, *tri.pts) >= 0:
                return SurfacePoint(t, xy)
        raise ValueError(f"point {xy} not in polygon {poly_index}")

    def classify(self, pt: SurfacePoint):
        """('vertex', k) / ('edge', e) / ('face', None) inside pt.tri."""
        tri = self.tris[pt.tri]
        for k in range(3):
            if vec_eq(pt.xy, tri.pts[k]):
                return "vertex", k
        for e in range(3):
            if on_segment(pt.xy, tri.pts[e], tri.pts[(e + 1) % 3]):
                return "edge", e
        if point_in_triangle(pt.xy, *tri.pts) < 0:
            raise ValueError("point outside its triangle")
        return "face", None

    def representations(self, pt: SurfacePoint):
        """All (triangle, chart point) pairs describing the same surface point."""
        kind, k = self.classify(pt)
        if kind == "face":
            return [(pt.tri, pt.xy)]
        if kind == "edge":
            t2, e2 = self.glue[(pt.tri, k)]
            tri, tri2 = self.tris[pt.tri], self.tris[t2]
            # partner edge runs backwards: its end matches our start
            other = add(tri2.pts[(e2 + 1) % 3], sub(pt.xy, tri.pts[k]))
            return sorted({(pt.tri, pt.xy), (t2, other)}, key=_rep_key)
        cls = self.tris[pt.tri].cls[k]
        return sorted(((t, self.tris[t].pts[j]) for t, j in self.rings()[cls]), key=_rep_key)

    def canonical(self, pt: SurfacePoint):
        """Hashable key identifying a surface point."""
        kind, k = self.classify(pt)
        if kind == "vertex":
            return ("v", self.tris[pt.tri].cls[k])
        t, xy = self.representations(pt)[0]
        return ("p", t, xy[0], xy[1])

    def vertex_class_of(self, pt: SurfacePoint):
        kind, k = self.classify(pt)
        return self.tris[pt.tri].cls[k] if kind == "vertex" else None

    # -- insertion ------------------------------------------------------

    def insert_point(self, pt: SurfacePoint, stop=True, label=""):
        """New triangulation with pt as a vertex; returns (triangulation, class)."""
        kind, k = self.classify(pt)
        if kind == "vertex":
            cls = self.tris[pt.tri].cls[k]
            out = self.copy()
            if stop and not out.classes[cls].stop:
                out.classes[cls] = replace(out.classes[cls], stop=True)
            return out, cls
        if kind == "face":
            return self._split_face(pt.tri, pt.xy, stop, label)
        t2, e2 = self.glue[(pt.tri, k)]
        if t2 == pt.tri:
            # both sides of the edge live in one triangle: cut it first
            tri = self.tris[pt.tri]
            centroid = scale(self.field(1) / 3, add(add(tri.pts[0], tri.pts[1]), tri.pts[2]))
            pre, _ = self._split_face(pt.tri, centroid, False, "aux")
            for t, tri2 in enumerate(pre.tris):
                for e in range(3):
                    if on_segment(pt.xy, tri2.pts[e], tri2.pts[(e + 1) % 3]) and t in (
                        pt.tri,
                        len(self.tris),
                        len(self.tris) + 1,
                    ):
                        return pre.insert_point(SurfacePoint(t, pt.xy), stop, label)
            raise AssertionError("lost point during auxiliary split")
        return self._split_edge(pt.tri, k, pt.xy, stop, label)

    def _new_class(self, stop, label):
        c = VertexClass(len(self.classes), 0, stop, label)
        return c

    def _rebuild(self, replaced, new_tris, edge_map, internal, newcls):
        """Replace triangles and rewire gluings.

        ``replaced`` lists old triangle ids (reused in order for the first new
        triangles), ``edge_map`` maps an old edge to the new edge(s) covering
        it (pieces listed in the old edge's direction) and ``internal`` lists
        new glued pairs.
        """
        tris = list(self.tris)
        ids = list(replaced) + list(range(len(tris), len(tris) + len(new_tris) - len(replaced)))
        for tid, tri in zip(ids, new_tris):
            if tid < len(tris):
                tris[tid] = tri
            else:
                tris.append(tri)

        def remap(e):
            pieces = edge_map.get(e)
            if pieces is None:
                return [e]
            return [(ids[j], f) for j, f in pieces]

        glue = {}
        done = set()
        for a, b in self.glue.items():
            if (b, a) in done:
                continue
            done.add((a, b))
            pa, pb = remap(a), remap(b)
            if len(pa) != len(pb):
                raise AssertionError("edge split on one side only")
            for x, y in zip(pa, reversed(pb)):
                glue[x] = y
                glue[y] = x
        for (j, f), (j2, f2) in internal:
            glue[(ids[j], f)] = (ids[j2], f2)
            glue[(ids[j2], f2)] = (ids[j], f)
        out = Triangulation(tris, glue, self.classes + [newcls], self.field)
        out.poly_edge = getattr(self, "poly_edge", {})
        return out, newcls.index

    def _split_face(self, t, p, stop, label):
        tri = self.tris[t]
        newcls = self._new_class(stop, label)
        c = newcls.index
        new = []
        for i in range(3):
            a, b = tri.pts[i], tri.pts[(i + 1) % 3]
            new.append(Tri((a, b, p), (tri.cls[i], tri.cls[(i + 1) % 3], c), tri.poly))
        edge_map = {(t, i): [(i, 0)] for i in range(3)}
        internal = [((i, 1), ((i + 1) % 3, 2)) for i in range(3)]
        return self._rebuild([t], new, edge_map, internal, newcls)

    def _split_edge(self, t, i, p, stop, label):
        t2, j = self.glue[(t, i)]
        tri, tri2 = self.tris[t], self.tris[t2]
        p2 = add(tri2.pts[(j + 1) % 3], sub(p, tri.pts[i]))
        newcls = self._new_class(stop, label)
        c = newcls.index
        new = []
        for T, e, q in ((tri, i, p), (tri2, j, p2)):
            v0, v1, v2 = T.pts[e], T.pts[(e + 1) % 3], T.pts[(e + 2) % 3]
            c0, c1, c2 = T.cls[e], T.cls[(e + 1) % 3], T.cls[(e + 2) % 3]
            # (v0, q, v2) and (q, v1, v2)
            new.append(Tri((v0, q, v2), (c0, c, c2), T.poly))
            new.append(Tri((q, v1, v2), (c, c1, c2), T.poly))
        # local edges: first piece tri A=(v0,q,v2): e0=v0->q, e1=q->v2, e2=v2->v0
        #              tri B=(q,v1,v2): e0=q->v1, e1=v1->v2, e2=v2->q
        edge_map = {}
        for base, T, e, told in ((0, tri, i, t), (2, tri2, j, t2)):
            edge_map[(told, e)] = [(base, 0), (base + 1, 0)]
            edge_map[(told, (e + 1) % 3)] = [(base + 1, 1)]
            edge_map[(told, (e + 2) % 3)] = [(base, 2)]
        internal = [((0, 1), (1, 2)), ((2, 1), (3, 2))]
        # the split edge pair itself is rewired by _rebuild via reversed pieces
        return self._rebuild([t, t2], new, edge_map, internal, newcls)


def _rep_key(rep):
    t, xy = rep
    return (t, xy[0], xy[1])


def class_angle_turns(triangulation, cls):
    """Total angle of a vertex class in units of 2 pi (exact turn count)."""
    turns = 0
    for corner in triangulation.rings()[cls]:
        u, v = triangulation.sector(corner)
        if angle_cmp(u, v) > 0:
            turns += 1
    return turns
