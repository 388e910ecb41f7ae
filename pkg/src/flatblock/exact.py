"""Exact arithmetic over Q and real quadratic fields Q(sqrt d).

Scalars are either ``gmpy2.mpq`` (plain rationals) or :class:`Quad`
(``a + b*sqrt(d)`` with rational ``a`` and ``b``).  Every geometric
predicate in the package reduces to :func:`sign`, which never evaluates a
square root.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from math import isqrt

from gmpy2 import mpq, mpz

__all__ = [
    "FieldDescriptor",
    "Quad",
    "QQ",
    "mpq",
    "to_scalar",
    "sign",
    "conjugate",
    "rational_part",
    "sqrt_part",
    "is_rational",
    "rational_ratio",
    "qspan_rank",
    "rational_rank",
    "parse_scalar",
    "format_scalar",
    "FieldMismatch",
]


class FieldMismatch(ValueError):
    """Raised when elements of two different quadratic fields are combined."""


def _squarefree(n: int) -> bool:
    if n < 2:
        return False
    k = 2
    while k * k <= n:
        if n % (k * k) == 0:
            return False
        k += 1
    return True


@dataclass(frozen=True)
class FieldDescriptor:
    """Q (``d is None``) or Q(sqrt d) for a squarefree ``d >= 2``."""

    d: int | None = None

    def __post_init__(self):
        if self.d is not None:
            if isqrt(self.d) ** 2 == self.d or not _squarefree(self.d):
                raise ValueError(f"d={self.d} is not a squarefree integer >= 2")

    @property
    def kind(self) -> str:
        return "rational" if self.d is None else "quadratic"

    def __call__(self, a, b=0):
        """Element ``a + b*sqrt(d)`` of this field."""
        a = mpq(a)
        b = mpq(b)
        if self.d is None:
            if b:
                raise FieldMismatch("irrational part in the rational field")
            return a
        return Quad(a, b, self.d)

    @property
    def gen(self):
        if self.d is None:
            raise FieldMismatch("Q has no quadratic generator")
        return Quad(mpq(0), mpq(1), self.d)

    def contains(self, x) -> bool:
        if isinstance(x, Quad):
            return x.b == 0 or x.d == self.d
        return True

    def coerce(self, x):
        x = to_scalar(x)
        if isinstance(x, Quad):
            if x.b == 0:
                return self(x.a)
            if x.d != self.d:
                raise FieldMismatch(f"sqrt({x.d}) element in field {self}")
            return x
        return self(x)

    def __str__(self):
        return "rational" if self.d is None else f"sqrt {self.d}"


QQ = FieldDescriptor()


class Quad:
    """``a + b*sqrt(d)`` with ``a, b`` rational and ``d`` squarefree."""

    __slots__ = ("a", "b", "d")

    def __init__(self, a, b, d: int):
        self.a = mpq(a)
        self.b = mpq(b)
        self.d = d

    def _lift(self, other):
        if isinstance(other, Quad):
            if other.d != self.d and other.b and self.b:
                raise FieldMismatch(f"sqrt({self.d}) mixed with sqrt({other.d})")
            return other.a, other.b
        if isinstance(other, (int, type(mpq(0)), type(mpz(0)))):
            return mpq(other), mpq(0)
        return None

    def __add__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = self.d if self.b or not isinstance(other, Quad) else other.d
        return Quad(self.a + o[0], self.b + o[1], d)

    __radd__ = __add__

    def __neg__(self):
        return Quad(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        d = self.d if self.b or not isinstance(other, Quad) else other.d
        return Quad(self.a - o[0], self.b - o[1], d)

    def __rsub__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return Quad(o[0] - self.a, o[1] - self.b, self.d)

    def __mul__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        a, b = self.a, self.b
        c, e = o
        d = self.d if self.b or not isinstance(other, Quad) else other.d
        return Quad(a * c + b * e * d, a * e + b * c, d)

    __rmul__ = __mul__

    def norm(self):
        return self.a * self.a - self.b * self.b * self.d

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt %d)" % self.d)
        return Quad(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        if isinstance(other, Quad):
            return self * other.inverse()
        o = self._lift(other)
        if o is None:
            return NotImplemented
        if o[0] == 0:
            raise ZeroDivisionError("division by zero")
        return Quad(self.a / o[0], self.b / o[0], self.d)

    def __rtruediv__(self, other):
        o = self._lift(other)
        if o is None:
            return NotImplemented
        return self.inverse() * o[0]

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = Quad(1, 0, self.d)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, Quad):
            if self.b == 0 and other.b == 0:
                return self.a == other.a
            return self.a == other.a and self.b == other.b and self.d == other.d
        if isinstance(other, (int, type(mpq(0)))):
            return self.b == 0 and self.a == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return sign(self - other) < 0

    def __le__(self, other):
        return sign(self - other) <= 0

    def __gt__(self, other):
        return sign(self - other) > 0

    def __ge__(self, other):
        return sign(self - other) >= 0

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __float__(self):
        return float(self.a) + float(self.b) * self.d ** 0.5

    def __abs__(self):
        return -self if sign(self) < 0 else self

    def __repr__(self):
        return f"Quad({format_scalar(self)}, d={self.d})"

    def __str__(self):
        return format_scalar(self)


_MPQ = type(mpq(0))


def to_scalar(x):
    if isinstance(x, (Quad, _MPQ)):
        return x
    return mpq(x)


def _sgn(q) -> int:
    return (q > 0) - (q < 0)


def sign(u) -> int:
    """Exact sign of ``a + b*sqrt(d)`` without evaluating the square root."""
    if not isinstance(u, Quad):
        return _sgn(u)
    sa, sb = _sgn(u.a), _sgn(u.b)
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    # opposite signs: compare a^2 with b^2 d after clearing denominators
    a, b = u.a, u.b
    lhs = a.numerator ** 2 * b.denominator ** 2
    rhs = b.numerator ** 2 * u.d * a.denominator ** 2
    if lhs == rhs:  # impossible for squarefree d unless a = b = 0
        return 0
    return sa if lhs > rhs else sb


def conjugate(u):
    if isinstance(u, Quad):
        return Quad(u.a, -u.b, u.d)
    return u


def rational_part(u):
    return u.a if isinstance(u, Quad) else mpq(u)


def sqrt_part(u):
    return u.b if isinstance(u, Quad) else mpq(0)


def is_rational(u) -> bool:
    return not isinstance(u, Quad) or u.b == 0


def rational_ratio(u, v):
    """``p/q`` with ``u == (p/q) v``, or None when u, v are incommensurable."""
    if sign(v) == 0:
        raise ZeroDivisionError("rational_ratio with v = 0")
    r = to_scalar(u) / to_scalar(v)
    return rational_part(r) if is_rational(r) else None


def rational_rank(rows) -> int:
    """Rank over Q of a list of equal-length rows of rationals."""
    m = [[mpq(x) for x in row] for row in rows]
    if not m:
        return 0
    rank, ncols = 0, len(m[0])
    for c in range(ncols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        p = m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / p[c]
                m[i] = [x - f * y for x, y in zip(m[i], p)]
        rank += 1
    return rank


def qspan_rank(vectors) -> int:
    """Dimension of the Q-span of vectors in K^2, K = Q or Q(sqrt d)."""
    rows = []
    for vec in vectors:
        row = []
        for c in vec:
            row.extend((rational_part(c), sqrt_part(c)))
        rows.append(row)
    return rational_rank(rows)


_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?(\*?r)?")


def parse_scalar(text: str, field: FieldDescriptor = QQ):
    """Parse ``p/q``, ``p/q*r`` or ``p/q+s/t*r`` where ``r`` is sqrt(d)."""
    s = "".join(text.split())
    if not s:
        raise ValueError("empty number literal")
    a = mpq(0)
    b = mpq(0)
    pos = 0
    while pos < len(s):
        m = _TERM.match(s, pos)
        if m is None or m.end() == pos or (m.group(2) is None and m.group(3) is None):
            raise ValueError(f"bad number literal {text!r}")
        if pos > 0 and not m.group(1):
            raise ValueError(f"bad number literal {text!r}")
        coef = mpq(m.group(2)) if m.group(2) else mpq(1)
        if m.group(1) == "-":
            coef = -coef
        if m.group(3):
            if field.d is None:
                raise FieldMismatch(f"'r' used in rational field: {text!r}")
            b += coef
        else:
            a += coef
        pos = m.end()
    return field(a, b)


def _fmt_q(q) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_scalar(u, star: bool = False) -> str:
    """Exact string such as ``3/2+1/2r`` (``3/2+1/2*r`` with ``star``)."""
    a, b = rational_part(u), sqrt_part(u)
    if b == 0:
        return _fmt_q(a)
    r = "*r" if star else "r"
    mag = abs(b)
    bpart = "r" if mag == 1 else _fmt_q(mag) + r
    if a == 0:
        return ("-" if b < 0 else "") + bpart
    return _fmt_q(a) + ("-" if b < 0 else "+") + bpart
