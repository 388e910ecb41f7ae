"""Text format for surfaces and billiard tables.

Example::

    field sqrt 5
    name LG
    polygon R { (0,0) (1,0) (1/2+1/2*r,0) (1/2+1/2*r,1) (1,1) (0,1) }
    glue R.e1 ~ R.e3
    mark R (1/2, 1/2)

Billiard tables use
``billiard { angles: 1/2 1/2 1/2 1/2; vertices: (0,0) (1,0) (1,1) (0,1) }``
with angles given as fractions of pi and an optional ``frame: skew;``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field as dc_field

from gmpy2 import mpq

from .exact import QQ, FieldDescriptor, format_scalar, parse_scalar
from .surface import Polygon, TranslationSurface

__all__ = ["ParseError", "SurfaceDocument", "BilliardSpec", "parse", "print_document", "to_surface"]


class ParseError(ValueError):
    def __init__(self, msg, line, col):
        super().__init__(f"{line}:{col}: {msg}")
        self.line = line
        self.col = col


@dataclass
class BilliardSpec:
    angles: list
    vertices: list
    frame: str = "euclidean"


@dataclass
class SurfaceDocument:
    field: FieldDescriptor = QQ
    polygons: list = dc_field(default_factory=list)  # (name, [points])
    glues: list = dc_field(default_factory=list)  # (name, edge, name, edge)
    marks: list = dc_field(default_factory=list)  # (polygon name, point)
    billiard: BilliardSpec | None = None
    name: str | None = None

    def __eq__(self, other):
        return isinstance(other, SurfaceDocument) and print_document(self) == print_document(other)


_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class _Reader:
    def __init__(self, text):
        # strip comments but keep columns
        self.text = "\n".join(line.split("#", 1)[0] for line in text.split("\n"))
        self.pos = 0

    def where(self, pos=None):
        pos = self.pos if pos is None else pos
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        return line, col

    def error(self, msg, pos=None):
        raise ParseError(msg, *self.where(pos))

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def at_end(self):
        self.skip()
        return self.pos >= len(self.text)

    def peek(self, s):
        self.skip()
        return self.text.startswith(s, self.pos)

    def expect(self, s):
        self.skip()
        if not self.text.startswith(s, self.pos):
            self.error(f"expected {s!r}")
        self.pos += len(s)

    def ident(self):
        self.skip()
        m = _IDENT.match(self.text, self.pos)
        if not m:
            self.error("expected identifier")
        self.pos = m.end()
        return m.group(0)

    def integer(self):
        self.skip()
        m = re.compile(r"\d+").match(self.text, self.pos)
        if not m:
            self.error("expected integer")
        self.pos = m.end()
        return int(m.group(0))

    def number_until(self, stops, field):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos] not in stops:
            self.pos += 1
        raw = self.text[start : self.pos]
        try:
            return parse_scalar(raw, field)
        except ValueError as exc:
            self.error(str(exc), start)

    def point(self, field):
        self.expect("(")
        x = self.number_until(",)", field)
        self.expect(",")
        y = self.number_until(",)", field)
        self.expect(")")
        return (x, y)


def parse(text: str) -> SurfaceDocument:
    r = _Reader(text)
    r.skip()
    start = r.pos
    if r.ident() != "field":
        r.error("document must start with 'field'", start)
    kind = r.ident()
    if kind == "rational":
        fld = QQ
    elif kind == "sqrt":
        r.skip()
        pos = r.pos
        try:
            fld = FieldDescriptor(r.integer())
        except ValueError as exc:
            r.error(str(exc), pos)
    else:
        r.error(f"unknown field kind {kind!r}")
    doc = SurfaceDocument(field=fld)
    names = set()
    pending = []
    while not r.at_end():
        kw_pos = r.pos
        kw = r.ident()
        if kw == "polygon":
            name = r.ident()
            if name in names:
                r.error(f"duplicate polygon {name!r}", kw_pos)
            r.expect("{")
            pts = []
            while not r.peek("}"):
                pts.append(r.point(fld))
            r.expect("}")
            if not pts:
                r.error("empty polygon", kw_pos)
            names.add(name)
            doc.polygons.append((name, pts))
        elif kw == "glue":
            refs = []
            for k in range(2):
                r.skip()
                ref_pos = r.pos
                name = r.ident()
                r.expect(".")
                r.expect("e")
                refs.append((name, r.integer(), ref_pos))
                if k == 0:
                    r.expect("~")
            pending.extend((n, p) for n, _, p in refs)
            doc.glues.append((refs[0][0], refs[0][1], refs[1][0], refs[1][1]))
        elif kw == "mark":
            r.skip()
            pos = r.pos
            name = r.ident()
            pending.append((name, pos))
            doc.marks.append((name, r.point(fld)))
        elif kw == "name":
            doc.name = r.ident()
        elif kw == "billiard":
            doc.billiard = _parse_billiard(r, fld)
        else:
            r.error(f"unknown item {kw!r}", kw_pos)
    for name, pos in pending:
        if name not in names:
            r.error(f"unknown polygon id {name!r}", pos)
    return doc


def _parse_billiard(r, fld):
    r.expect("{")
    angles, vertices, frame = None, None, "euclidean"
    while not r.peek("}"):
        key = r.ident()
        r.expect(":")
        if key == "angles":
            angles = []
            while not r.peek(";") and not r.peek("}"):
                r.skip()
                start = r.pos
                m = re.compile(r"\d+(?:/\d+)?").match(r.text, r.pos)
                if not m:
                    r.error("expected angle fraction", start)
                r.pos = m.end()
                angles.append(mpq(m.group(0)))
        elif key == "vertices":
            vertices = []
            while r.peek("("):
                vertices.append(r.point(fld))
        elif key == "frame":
            frame = r.ident()
            if frame not in ("euclidean", "skew"):
                r.error(f"unknown frame {frame!r}")
        else:
            r.error(f"unknown billiard key {key!r}")
        if r.peek(";"):
            r.expect(";")
    r.expect("}")
    if angles is None or vertices is None:
        r.error("billiard needs angles and vertices")
    return BilliardSpec(angles, vertices, frame)


def _fmt_point(p):
    return f"({format_scalar(p[0], star=True)},{format_scalar(p[1], star=True)})"


def print_document(doc: SurfaceDocument) -> str:
    lines = [f"field {doc.field}"]
    if doc.name:
        lines.append(f"name {doc.name}")
    for name, pts in doc.polygons:
        lines.append(f"polygon {name} {{ " + " ".join(_fmt_point(p) for p in pts) + " }")
    for a, i, b, j in doc.glues:
        lines.append(f"glue {a}.e{i} ~ {b}.e{j}")
    for name, p in doc.marks:
        lines.append(f"mark {name} {_fmt_point(p)}")
    if doc.billiard is not None:
        b = doc.billiard
        ang = " ".join(str(a) for a in b.angles)
        verts = " ".join(_fmt_point(p) for p in b.vertices)
        frame = "" if b.frame == "euclidean" else f" frame: {b.frame};"
        lines.append(f"billiard {{ angles: {ang}; vertices: {verts};{frame} }}")
    return "\n".join(lines) + "\n"


def to_surface(doc: SurfaceDocument) -> TranslationSurface:
    polys = [Polygon(n, tuple(pts)) for n, pts in doc.polygons]
    glue = [((a, i), (b, j)) for a, i, b, j in doc.glues]
    return TranslationSurface(polys, glue, field=doc.field, name=doc.name)


def from_surface(surface: TranslationSurface) -> SurfaceDocument:
    doc = SurfaceDocument(field=surface.field, name=surface.name)
    for p in surface.polygons:
        doc.polygons.append((p.name, list(p.vertices)))
    for (p, e), (q, f) in surface.gluing_pairs():
        doc.glues.append((surface.polygons[p].name, e, surface.polygons[q].name, f))
    return doc
