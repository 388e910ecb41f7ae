"""Static SVG pictures of surfaces, decompositions and teepees.

Geometry stays exact until a coordinate is written out; only then is it
rounded to 12 significant digits.  Output is a pure function of the input.
"""

from __future__ import annotations

from .exact import sign
from .geometry import add, cross, sub
from .triangulation import SurfacePoint

__all__ = ["render_svg"]

_WIDTH = 800
_MARGIN = 20
_GAP = 0.5
_BANDS = ("#8ecae6", "#ffb703", "#90be6d", "#f28482", "#cdb4db", "#84a59d", "#f6bd60", "#a3c4f3")


def _num(x) -> str:
    v = float(x)
    s = f"{v:.12g}"
    return "0" if s == "-0" else s


def _clip_segment(a, b, tri):
    """Exact part of segment ab inside the closed CCW triangle."""
    t0, t1 = 0, 1
    d = sub(b, a)
    for i in range(3):
        p, q = tri[i], tri[(i + 1) % 3]
        e = sub(q, p)
        # inside: cross(e, x - p) >= 0 along x = a + t d
        c0 = cross(e, sub(a, p))
        c1 = cross(e, d)
        s1 = sign(c1)
        if s1 == 0:
            if sign(c0) < 0:
                return None
            continue
        t = -c0 / c1
        if s1 > 0:
            if _gt(t, t0):
                t0 = t
        elif _lt(t, t1):
            t1 = t
    if not _lt(t0, t1):
        return None
    return (add(a, (t0 * d[0], t0 * d[1])), add(a, (t1 * d[0], t1 * d[1])))


def _gt(x, y):
    return sign(x - y) > 0


def _lt(x, y):
    return sign(x - y) < 0


class _Canvas:
    def __init__(self, surface):
        self.surface = surface
        self.shift = []
        x = 0.0
        ymin, ymax = None, None
        for poly in surface.polygons:
            xs = [float(v[0]) for v in poly.vertices]
            ys = [float(v[1]) for v in poly.vertices]
            self.shift.append(x - min(xs))
            x += max(xs) - min(xs) + _GAP
            ymin = min(ys) if ymin is None else min(ymin, min(ys))
            ymax = max(ys) if ymax is None else max(ymax, max(ys))
        self.width = max(x - _GAP, 1e-9)
        self.ymin, self.ymax = ymin, ymax
        self.scale = (_WIDTH - 2 * _MARGIN) / self.width
        self.height = (ymax - ymin) * self.scale + 2 * _MARGIN

    def xy(self, p, pt):
        x = (float(pt[0]) + self.shift[p]) * self.scale + _MARGIN
        y = (self.ymax - float(pt[1])) * self.scale + _MARGIN
        return _num(x), _num(y)


def render_svg(surface, decorations=None) -> str:
    """SVG text for ``surface``.

    ``decorations`` may hold ``decomposition`` (a CylinderDecomposition),
    ``points`` (SurfacePoints of the surface triangulation or
    ``(polygon index, (x, y))`` pairs, drawn as crosses), ``triangulation``
    (the triangulation those SurfacePoints refer to) and ``teepee``
    (a Teepee, drawn in its own developed panel).
    """
    decorations = decorations or {}
    cv = _Canvas(surface)
    out = []
    body = []
    T = surface.triangulation
    # polygons and gluing labels
    labels = {}
    for k, ((p, e), (q, f)) in enumerate(surface.gluing_pairs()):
        labels[(p, e)] = labels[(q, f)] = _label(k)
    for p, poly in enumerate(surface.polygons):
        pts = " ".join(",".join(cv.xy(p, v)) for v in poly.vertices)
        body.append(f'<polygon class="polygon" points="{pts}" fill="#f4f4f4" stroke="#222" stroke-width="1"/>')
    dec = decorations.get("decomposition")
    if dec is not None:
        body.extend(_bands(cv, T, dec))
    for p, poly in enumerate(surface.polygons):
        n = len(poly.vertices)
        for i in range(n):
            a, b = poly.vertices[i], poly.vertices[(i + 1) % n]
            m = ((a[0] + b[0]) / 2, (a[1] + b[1]) / 2)
            x, y = cv.xy(p, m)
            body.append(f'<text class="glue" x="{x}" y="{y}" font-size="11" text-anchor="middle">{labels[(p, i)]}</text>')
    # singularities, sized by multiplicity
    sing = {s.index: s for s in surface.singularities}
    for p, poly in enumerate(surface.polygons):
        for i, v in enumerate(poly.vertices):
            s = sing[surface.corner_class[(p, i)]]
            if s.multiplicity == 0 and s.index in surface.unmarked:
                continue
            x, y = cv.xy(p, v)
            r = 2 + 2 * s.multiplicity
            body.append(f'<circle class="singularity" cx="{x}" cy="{y}" r="{r}" fill="#111"/>')
    PT = decorations.get("triangulation", T)
    for pt in decorations.get("points", ()):
        if isinstance(pt, SurfacePoint):
            p, xy = PT.tris[pt.tri].poly, pt.xy
        else:
            p, xy = pt
        x, y = cv.xy(p, xy)
        body.append(f'<path class="point" d="M{x} {y} m-4 -4 l8 8 m0 -8 l-8 8" stroke="#c1121f" stroke-width="2"/>')
    height = cv.height
    tp = decorations.get("teepee")
    if tp is not None:
        panel, h = _teepee_panel(tp, height)
        body.extend(panel)
        height += h
    out.append(
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_WIDTH}" height="{_num(height)}" '
        f'viewBox="0 0 {_WIDTH} {_num(height)}">'
    )
    title = surface.name or "surface"
    out.append(f"<title>{title}</title>")
    out.extend(body)
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _label(k):
    s = ""
    k += 1
    while k:
        k, r = divmod(k - 1, 26)
        s = chr(97 + r) + s
    return s


def _bands(cv, T, dec):
    """Saddle connections of the decomposition plus a legend of bands."""
    out = []
    for s in dec.saddle_connections:
        t0, k0 = s.corner
        P0 = T.tris[t0].pts[k0]
        a, b = P0, add(P0, s.holonomy)
        for t, off in s.chain:
            tri = T.tris[t]
            seg = _clip_segment(sub(a, off), sub(b, off), tri.pts)
            if seg is None:
                continue
            (x1, y1), (x2, y2) = cv.xy(tri.poly, seg[0]), cv.xy(tri.poly, seg[1])
            out.append(f'<line class="saddle" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#023047" stroke-width="2"/>')
    # legend: one band per cylinder, height proportional to the cylinder height
    y = cv.height - _MARGIN + 4
    total = sum(float(c.height) for c in dec.cylinders) or 1.0
    for i, c in enumerate(dec.cylinders):
        h = 40 * float(c.height) / total
        w = (_WIDTH - 2 * _MARGIN) * float(c.width) / max(float(x.width) for x in dec.cylinders)
        col = _BANDS[i % len(_BANDS)]
        out.append(
            f'<rect class="cylinder" x="{_MARGIN}" y="{_num(y)}" width="{_num(w)}" height="{_num(h)}" '
            f'fill="{col}" stroke="#222" stroke-width="0.5"/>'
        )
        out.append(
            f'<text class="cylinder-label" x="{_MARGIN + 4}" y="{_num(y + h / 2 + 4)}" font-size="10">'
            f"w={c.width} h={c.height}</text>"
        )
        y += h
    cv.height = y + _MARGIN
    return out


def _teepee_panel(tp, top):
    """Developed picture: C as (-1/4, 5/4) x (-2, 0), the strip, the fan."""
    xA, yA = tp.A_dev
    ks = tp.ks or [0]
    x_lo = min(min(ks), -0.25)
    x_hi = max(float(tp.rectangle.T_eps), max(ks) + 1.0, float(xA))
    y_lo, y_hi = -2.0, float(tp.eps)
    sc = (_WIDTH - 2 * _MARGIN) / (x_hi - x_lo)
    height = (y_hi - y_lo) * sc + 2 * _MARGIN

    def P(x, y):
        return _num((float(x) - x_lo) * sc + _MARGIN), _num(top + (y_hi - float(y)) * sc + _MARGIN)

    out = []
    x1, y1 = P(x_lo, 0)
    x2, y2 = P(x_hi, -2)
    out.append(
        f'<rect class="cylinder" x="{x1}" y="{y1}" width="{_num(float(x2) - float(x1))}" '
        f'height="{_num(float(y2) - float(y1))}" fill="#8ecae6" stroke="none"/>'
    )
    x1, y1 = P(0, tp.eps)
    x2, y2 = P(tp.rectangle.T_eps, 0)
    out.append(
        f'<rect class="strip" x="{x1}" y="{y1}" width="{_num(float(x2) - float(x1))}" '
        f'height="{_num(float(y2) - float(y1))}" fill="#ffb703" stroke="#222" stroke-width="0.5"/>'
    )
    gx1, gy = P(0, 0)
    gx2, _ = P(tp.setup.length, 0)
    out.append(f'<line class="gamma" x1="{gx1}" y1="{gy}" x2="{gx2}" y2="{gy}" stroke="#111" stroke-width="2"/>')
    ax, ay = P(xA, yA)
    for k in tp.ks:
        ox, oy = P(k, -1)
        out.append(f'<line class="member" x1="{ox}" y1="{oy}" x2="{ax}" y2="{ay}" stroke="#c1121f" stroke-width="1"/>')
        out.append(f'<circle class="O" cx="{ox}" cy="{oy}" r="2" fill="#111"/>')
    out.append(f'<circle class="A" cx="{ax}" cy="{ay}" r="3" fill="#c1121f"/>')
    return out, height
