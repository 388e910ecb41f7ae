"""Exact planar predicates on pairs of field elements."""

from __future__ import annotations

from .exact import sign

# Vectors are plain 2-tuples of exact scalars.


def add(u, v):
    return (u[0] + v[0], u[1] + v[1])


def sub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def neg(u):
    return (-u[0], -u[1])


def scale(c, u):
    return (c * u[0], c * u[1])


def cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def dot(u, v):
    return u[0] * v[0] + u[1] * v[1]


def norm2(u):
    return u[0] * u[0] + u[1] * u[1]


def orient(a, b, c) -> int:
    """+1 if a, b, c turn left, -1 right, 0 collinear."""
    return sign(cross(sub(b, a), sub(c, a)))


def is_zero(u) -> bool:
    return sign(u[0]) == 0 and sign(u[1]) == 0


def vec_eq(u, v) -> bool:
    return sign(u[0] - v[0]) == 0 and sign(u[1] - v[1]) == 0


def half(u) -> int:
    """0 for directions in [0, pi), 1 for [pi, 2 pi)."""
    sy = sign(u[1])
    return 0 if sy > 0 or (sy == 0 and sign(u[0]) > 0) else 1


def angle_cmp(u, v) -> int:
    """Compare the polar angles of u and v in [0, 2 pi)."""
    hu, hv = half(u), half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    return -sign(cross(u, v))


def same_direction(u, v) -> bool:
    return sign(cross(u, v)) == 0 and sign(dot(u, v)) > 0


def in_sector(d, u, v) -> bool:
    """True if direction d lies in the half-open CCW sector [u, v).

    The sector sweeps counterclockwise from u to v and is assumed to have
    angle strictly between 0 and 2 pi.
    """
    cu = angle_cmp(u, d)
    cv = angle_cmp(d, v)
    if angle_cmp(u, v) < 0:
        return cu <= 0 and cv < 0
    return cu <= 0 or cv < 0


def polygon_area2(pts):
    """Twice the signed area (shoelace)."""
    s = 0
    n = len(pts)
    for i in range(n):
        s = s + cross(pts[i], pts[(i + 1) % n])
    return s


def on_segment(p, a, b) -> bool:
    """p on the closed segment [a, b]."""
    if orient(a, b, p) != 0:
        return False
    return sign(dot(sub(p, a), sub(p, b))) <= 0


def segments_intersect(a, b, c, d) -> bool:
    """Closed segments [a, b] and [c, d] share at least one point."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 * o2 < 0 and o3 * o4 < 0:
        return True
    return (
        (o1 == 0 and on_segment(c, a, b))
        or (o2 == 0 and on_segment(d, a, b))
        or (o3 == 0 and on_segment(a, c, d))
        or (o4 == 0 and on_segment(b, c, d))
    )


def point_in_triangle(p, a, b, c) -> int:
    """Location of p in CCW triangle abc: 1 interior, 0 boundary, -1 outside."""
    s = (orient(a, b, p), orient(b, c, p), orient(c, a, p))
    if min(s) < 0:
        return -1
    return 1 if min(s) > 0 else 0


def point_in_polygon(p, pts) -> int:
    """1 interior, 0 on boundary, -1 outside (crossing number, exact)."""
    n = len(pts)
    inside = False
    for i in range(n):
        a, b = pts[i], pts[(i + 1) % n]
        if on_segment(p, a, b):
            return 0
        ya, yb = sign(a[1] - p[1]), sign(b[1] - p[1])
        if (ya > 0) != (yb > 0):
            # edge straddles the horizontal through p; is the crossing to the right?
            o = orient(a, b, p)
            if (o > 0) == (sign(b[1] - a[1]) > 0):
                inside = not inside
    return 1 if inside else -1


def segment_intersection(a, b, c, d):
    """Intersection point of non-parallel lines ab and cd with parameters.

    Returns (point, s, t) with point = a + s (b - a) = c + t (d - c), or None
    for parallel lines.
    """
    r = sub(b, a)
    q = sub(d, c)
    den = cross(r, q)
    if sign(den) == 0:
        return None
    w = sub(c, a)
    s = cross(w, q) / den
    t = cross(w, r) / den
    return add(a, scale(s, r)), s, t


def apply_matrix(m, v):
    return (m[0][0] * v[0] + m[0][1] * v[1], m[1][0] * v[0] + m[1][1] * v[1])


def mat_mul(m, n):
    return (
        (m[0][0] * n[0][0] + m[0][1] * n[1][0], m[0][0] * n[0][1] + m[0][1] * n[1][1]),
        (m[1][0] * n[0][0] + m[1][1] * n[1][0], m[1][0] * n[0][1] + m[1][1] * n[1][1]),
    )


def det(m):
    return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def mat_inv(m):
    dt = det(m)
    if sign(dt) == 0:
        raise ZeroDivisionError("singular matrix")
    return ((m[1][1] / dt, -m[0][1] / dt), (-m[1][0] / dt, m[0][0] / dt))


def mat_eq(m, n) -> bool:
    return all(sign(m[i][j] - n[i][j]) == 0 for i in range(2) for j in range(2))
