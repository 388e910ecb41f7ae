"""Relative homology, holonomy and period coordinates.

Homology is computed on the triangulated cell complex: vertex classes,
glued edge pairs and triangles.  A tree-cotree decomposition yields a basis
of H_1(S, V; Z) made of ``n - 1`` primal-tree edges (relative part) and
``2g`` closed loops (absolute part).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field as dc_field
from math import gcd

from gmpy2 import mpq

from .exact import (
    FieldDescriptor,
    conjugate,
    is_rational,
    qspan_rank,
    rational_part,
    rational_rank,
    sign,
    sqrt_part,
    to_scalar,
)
from .geometry import add, cross, mat_inv, scale, sub, vec_eq
from .surface import Polygon, SurfaceError, TranslationSurface

__all__ = [
    "ChainComplex",
    "HomologyBasis",
    "chain_complex",
    "homology_basis",
    "holonomy",
    "period_coordinates",
    "holonomy_qrank",
    "torus_cover_normalize",
    "saddle_connection_class",
    "CaltaTuple",
    "NotACaltaTuple",
    "calta_h11_check",
    "n_set_membership",
    "perturb_edge_pair",
]


@dataclass
class ChainComplex:
    """Cells of the triangulated surface and integer boundary matrices."""

    edges: list  # canonical (t, i) per edge id
    edge_index: dict  # (t, i) -> (edge id, +1/-1)
    vectors: list  # holonomy of each edge
    endpoints: list  # (start class, end class)
    n_vertices: int
    n_faces: int

    def boundary1(self):
        m = [[0] * len(self.edges) for _ in range(self.n_vertices)]
        for e, (a, b) in enumerate(self.endpoints):
            m[b][e] += 1
            m[a][e] -= 1
        return m

    def boundary2(self):
        m = [[0] * self.n_faces for _ in range(len(self.edges))]
        for t in range(self.n_faces):
            for i in range(3):
                e, s = self.edge_index[(t, i)]
                m[e][t] += s
        return m


def chain_complex(surface) -> ChainComplex:
    T = surface.triangulation if isinstance(surface, TranslationSurface) else surface
    edges, index, vectors, ends = [], {}, [], []
    for t, tri in enumerate(T.tris):
        for i in range(3):
            if (t, i) in index:
                continue
            eid = len(edges)
            edges.append((t, i))
            index[(t, i)] = (eid, 1)
            index[T.glue[(t, i)]] = (eid, -1)
            vectors.append(tri.edge(i))
            ends.append((tri.cls[i], tri.cls[(i + 1) % 3]))
    return ChainComplex(edges, index, vectors, ends, len(T.classes), len(T.tris))


@dataclass
class HomologyBasis:
    """Basis of H_1(S, V; Z) as integer edge chains."""

    complex: ChainComplex
    chains: list  # dict edge id -> coefficient
    absolute: list  # bool per element
    coords_of_edge: list = dc_field(repr=False, default_factory=list)  # edge id -> coordinate vector

    def __len__(self):
        return len(self.chains)

    @property
    def absolute_indices(self):
        return [i for i, a in enumerate(self.absolute) if a]

    def coordinates(self, chain: dict):
        out = [0] * len(self.chains)
        for e, c in chain.items():
            if c:
                for k, x in enumerate(self.coords_of_edge[e]):
                    out[k] += c * x
        return out


def homology_basis(surface) -> HomologyBasis:
    cx = chain_complex(surface)
    V, E, F = cx.n_vertices, len(cx.edges), cx.n_faces
    # primal spanning tree (BFS from class 0, edges in id order)
    adj = [[] for _ in range(V)]
    for e, (a, b) in enumerate(cx.endpoints):
        adj[a].append((e, b, 1))
        adj[b].append((e, a, -1))
    parent = {0: None}
    order = deque([0])
    tree = set()
    while order:
        v = order.popleft()
        for e, w, s in adj[v]:
            if w not in parent:
                parent[w] = (e, v, s)  # reach w from v along e with sign s
                tree.add(e)
                order.append(w)
    if len(parent) != V:
        raise SurfaceError("1-skeleton is disconnected")
    # dual spanning tree over triangles through non-tree edges
    faces_of = [[] for _ in range(E)]
    for (t, i), (e, s) in sorted(cx.edge_index.items()):
        faces_of[e].append((t, i, s))
    seen = {0}
    cotree = set()
    order = deque([0])
    while order:
        t = order.popleft()
        for i in range(3):
            e, _ = cx.edge_index[(t, i)]
            if e in tree or e in cotree:
                continue
            other = [f for f, _, _ in faces_of[e] if f != t] or [t]
            u = other[0]
            if u not in seen:
                seen.add(u)
                cotree.add(e)
                order.append(u)
    rest = [e for e in range(E) if e not in tree and e not in cotree]

    def path_to_root(v):
        """Chain from v to vertex 0 along the tree."""
        ch = {}
        while parent[v] is not None:
            e, u, s = parent[v]
            ch[e] = ch.get(e, 0) - s
            v = u
        return ch

    tree_list = sorted(tree)
    chains, absolute = [], []
    for e in rest:
        a, b = cx.endpoints[e]
        ch = {e: 1}
        for k, c in path_to_root(b).items():
            ch[k] = ch.get(k, 0) + c
        for k, c in path_to_root(a).items():
            ch[k] = ch.get(k, 0) - c
        chains.append({k: c for k, c in ch.items() if c})
        absolute.append(True)
    for e in tree_list:
        chains.append({e: 1})
        absolute.append(False)
    nb = len(chains)
    if nb != E - F + 1:
        raise AssertionError("basis size mismatch")
    # coordinates of every edge
    coords = [None] * E
    abs_pos = {e: k for k, e in enumerate(rest)}
    rel_pos = {e: len(rest) + k for k, e in enumerate(tree_list)}
    for e in tree_list:
        v = [0] * nb
        v[rel_pos[e]] = 1
        coords[e] = v
    for e in rest:
        v = [0] * nb
        v[abs_pos[e]] = 1
        a, b = cx.endpoints[e]
        # e = loop - (path b->root) + (path a->root) ; path edges are tree edges
        for k, c in path_to_root(b).items():
            v[rel_pos[k]] -= c
        for k, c in path_to_root(a).items():
            v[rel_pos[k]] += c
        coords[e] = v
    # cotree edges: peel dual-tree leaves, each face boundary is zero
    pending = set(cotree)
    while pending:
        progress = False
        for t in range(F):
            unknown = [(i, e, s) for i in range(3) for e, s in [cx.edge_index[(t, i)]] if e in pending]
            if len(unknown) != 1:
                continue
            _, e0, s0 = unknown[0]
            v = [0] * nb
            for i in range(3):
                e, s = cx.edge_index[(t, i)]
                if e == e0:
                    continue
                for k in range(nb):
                    v[k] -= s * coords[e][k]
            coords[e0] = [s0 * x for x in v]
            pending.discard(e0)
            progress = True
        if not progress:
            raise AssertionError("dual tree peeling stalled")
    return HomologyBasis(cx, chains, absolute, coords)


def holonomy(surface_or_complex, chain: dict):
    cx = surface_or_complex if isinstance(surface_or_complex, ChainComplex) else chain_complex(surface_or_complex)
    x = cx.vectors[0][0] * 0
    y = x
    for e, c in chain.items():
        vx, vy = cx.vectors[e]
        x = x + c * vx
        y = y + c * vy
    return (x, y)


def period_coordinates(surface, basis: HomologyBasis | None = None):
    basis = basis or homology_basis(surface)
    return [holonomy(basis.complex, ch) for ch in basis.chains]


def holonomy_qrank(surface) -> int:
    b = homology_basis(surface)
    hol = period_coordinates(surface, b)
    return qspan_rank([hol[i] for i in b.absolute_indices])


def _hnf2(vectors):
    """Z-basis (2 vectors) of the lattice spanned by integer 2-vectors."""
    rows = [list(v) for v in vectors if v[0] or v[1]]
    basis = []
    for col in range(2):
        piv = [r for r in rows if r[col] != 0]
        rest = [r for r in rows if r[col] == 0]
        while len(piv) > 1:
            piv.sort(key=lambda r: abs(r[col]))
            p = piv[0]
            new = [p]
            for r in piv[1:]:
                q = r[col] // p[col]
                r2 = [r[0] - q * p[0], r[1] - q * p[1]]
                (new if r2[col] != 0 else rest).append(r2)
            piv = new
        if piv:
            p = piv[0]
            if p[col] < 0:
                p = [-p[0], -p[1]]
            basis.append(p)
        rows = [r for r in rest if r[0] or r[1]]
    return basis


def torus_cover_normalize(surface):
    """Matrix A with hol(H_1(A.S, Z)) a finite-index sublattice of Z^2.

    Returns ``(A, index)`` or None when the holonomy has Q-rank above 2.
    """
    b = homology_basis(surface)
    hol = [period_coordinates(surface, b)[i] for i in b.absolute_indices]
    if qspan_rank(hol) != 2:
        return None
    f = surface.field
    if all(is_rational(x) and is_rational(y) for x, y in hol):
        u, v = (f(1), f(0)), (f(0), f(1))
    else:
        u = hol[0]
        v = next(h for h in hol if sign(cross(u, h)) != 0)
    frame = ((u[0], v[0]), (u[1], v[1]))
    inv = mat_inv(frame)
    coords = []
    for h in hol:
        cx_ = inv[0][0] * h[0] + inv[0][1] * h[1]
        cy_ = inv[1][0] * h[0] + inv[1][1] * h[1]
        coords.append((rational_part(to_scalar(cx_)), rational_part(to_scalar(cy_))))
    den = 1
    for a, c in coords:
        for q in (a, c):
            den = den * q.denominator // gcd(den, q.denominator)
    ints = [(int(a * den), int(c * den)) for a, c in coords]
    lat = _hnf2(ints)
    # lattice basis vectors expressed in the plane
    B = [add(scale(mpq(p[0], den), u), scale(mpq(p[1], den), v)) for p in lat]
    A = mat_inv(((B[0][0], B[1][0]), (B[0][1], B[1][1])))
    # verify: A maps every holonomy into Z^2
    for h in hol:
        w = (A[0][0] * h[0] + A[0][1] * h[1], A[1][0] * h[0] + A[1][1] * h[1])
        for c in w:
            if not is_rational(c) or rational_part(c).denominator != 1:
                raise AssertionError("normalization failed")
    images = []
    for h in hol:
        w = (A[0][0] * h[0] + A[0][1] * h[1], A[1][0] * h[0] + A[1][1] * h[1])
        images.append((int(rational_part(w[0])), int(rational_part(w[1]))))
    L = _hnf2(images)
    index = abs(L[0][0] * L[1][1] - L[0][1] * L[1][0])
    return A, index


def saddle_connection_class(basis: HomologyBasis, T, sc):
    """Coordinates of a saddle connection (start corner + developed chain)."""
    cx = basis.complex
    t0, k0 = sc.corner
    off0 = sc.chain[0][1]
    origin = add(T.tris[t0].pts[k0], off0)
    end = add(origin, sc.holonomy)
    d = sc.holonomy

    def verts(t, off):
        return [add(p, off) for p in T.tris[t].pts]

    points = [origin]
    for (ta, offa), (tb, offb) in zip(sc.chain, sc.chain[1:]):
        va, vb = verts(ta, offa), verts(tb, offb)
        common = [p for p in va if any(vec_eq(p, q) for q in vb)]
        on_line = [p for p in common if sign(cross(d, sub(p, origin))) == 0]
        if on_line:
            pick = on_line[0]
        else:
            pick = next(p for p in common if sign(cross(d, sub(p, origin))) > 0)
        points.append(pick)
    points.append(end)
    chain = {}
    for k in range(len(points) - 1):
        P, Q = points[k], points[k + 1]
        if vec_eq(P, Q):
            continue
        t, off = sc.chain[min(k, len(sc.chain) - 1)]
        V = verts(t, off)
        for i in range(3):
            a, b = V[i], V[(i + 1) % 3]
            if vec_eq(a, P) and vec_eq(b, Q):
                e, s = cx.edge_index[(t, i)]
                chain[e] = chain.get(e, 0) + s
                break
            if vec_eq(a, Q) and vec_eq(b, P):
                e, s = cx.edge_index[(t, i)]
                chain[e] = chain.get(e, 0) - s
                break
        else:
            raise AssertionError("path step is not a triangle edge")
    return basis.coordinates(chain)


# -- Calta arithmetic ---------------------------------------------------------


class NotACaltaTuple(ValueError):
    pass


@dataclass(frozen=True)
class CaltaTuple:
    w1: object
    w2: object
    s1: object
    s2: object
    field: FieldDescriptor


def calta_h11_check(t: CaltaTuple):
    """Replay the genus-two H(1,1) arithmetic on a tuple.

    Returns ``("consistent", r1, r2)`` when w1/w2 is irrational and
    ``("rational-ratio-contradiction", r1, r2)`` otherwise; the latter can
    only be reached if the relation and positivity could hold together,
    which the arithmetic rules out.
    """
    vals = [t.field.coerce(x) for x in (t.w1, t.w2, t.s1, t.s2)]
    names = ["w1", "w2", "s1", "s2"]
    for n, v in zip(names, vals):
        if sign(v) <= 0:
            raise NotACaltaTuple(f"{n} = {v} is not positive")
    w1, w2, s1, s2 = vals
    ratio = w1 / w2
    rel = ratio * conjugate(s1) + conjugate(s2)
    if sign(rel) != 0:
        raise NotACaltaTuple("(w1/w2) conj(s1) + conj(s2) != 0")
    value = ratio * s1 + s2
    r1, r2 = rational_part(value), sqrt_part(value)
    if is_rational(ratio):
        # sum with the relation is rational => r2 = 0; difference => r1 = 0
        return ("rational-ratio-contradiction", r1, r2)
    return ("consistent", r1, r2)


# -- N-set search -------------------------------------------------------------


def n_set_membership(surface, L, jobs=1):
    """Two homologically independent parallel saddle connections, or None."""
    from .flow import saddle_connections

    scs = saddle_connections(surface, L, jobs=jobs)
    if not scs:
        return None
    basis = homology_basis(surface)
    T = surface.triangulation
    coords = [saddle_connection_class(basis, T, sc) for sc in scs]
    for i, a in enumerate(scs):
        for j in range(i + 1, len(scs)):
            b = scs[j]
            if sign(cross(a.holonomy, b.holonomy)) != 0:
                continue
            if rational_rank([coords[i], coords[j]]) == 2:
                return a, b, coords[i], coords[j]
    return None


# -- perturbation in period coordinates ---------------------------------------


def perturb_edge_pair(surface: TranslationSurface, edge, delta, field: FieldDescriptor | None = None):
    """Move ``edge = (polygon, index)`` by ``delta`` along a dual cycle.

    The glued partner moves by ``-delta`` and a shortest chain of
    compensating gluings back to the starting polygon keeps every polygon
    closed.  Raises SurfaceError if a polygon degenerates.
    """
    f = field or _field_for(surface.field, delta)
    delta = (f.coerce(delta[0]), f.coerce(delta[1]))
    p0, e0 = edge
    if not isinstance(p0, int):
        p0 = surface.polygon_index(p0)
    partner = surface.gluings[(p0, e0)]
    changes = {(p0, e0): 1, partner: -1}
    if partner[0] != p0:
        # BFS in the dual graph from partner polygon back to p0, avoiding this gluing
        start, goal = partner[0], p0
        prev = {start: None}
        q = deque([start])
        while q and goal not in prev:
            x = q.popleft()
            for (p, e), (r, g) in sorted(surface.gluings.items()):
                if p != x or (p, e) in changes or r in prev:
                    continue
                prev[r] = ((p, e), (r, g))
                q.append(r)
        if goal not in prev:
            raise SurfaceError("no compensating cycle through this gluing")
        node = goal
        while prev[node] is not None:
            (p, e), (r, g) = prev[node]
            changes[(p, e)] = changes.get((p, e), 0) + 1
            changes[(r, g)] = changes.get((r, g), 0) - 1
            node = p
    polys = []
    for p, poly in enumerate(surface.polygons):
        n = len(poly)
        vecs = []
        for i in range(n):
            v = poly.edge(i)
            c = changes.get((p, i), 0)
            vecs.append((f.coerce(v[0]) + c * delta[0], f.coerce(v[1]) + c * delta[1]))
        pts = [(f.coerce(poly.vertices[0][0]), f.coerce(poly.vertices[0][1]))]
        for v in vecs[:-1]:
            pts.append(add(pts[-1], v))
        if not vec_eq(add(pts[-1], vecs[-1]), pts[0]):
            raise SurfaceError(f"perturbation breaks closure of polygon {poly.name}")
        polys.append(Polygon(poly.name, tuple(pts)))
    return TranslationSurface(polys, surface.gluing_pairs(), field=f, name=surface.name)


def _field_for(base: FieldDescriptor, delta):
    if base.d is not None:
        return base
    for c in delta:
        c = to_scalar(c)
        if not is_rational(c):
            return FieldDescriptor(c.d)
    return base
