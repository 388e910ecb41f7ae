import pytest
from gmpy2 import mpq
from hypothesis import given, settings, strategies as st

from flatblock.exact import (
    QQ,
    FieldDescriptor,
    FieldMismatch,
    Quad,
    conjugate,
    format_scalar,
    is_rational,
    parse_scalar,
    qspan_rank,
    rational_rank,
    rational_ratio,
    sign,
)
from oracles import quad_sign

K2 = FieldDescriptor(2)
K5 = FieldDescriptor(5)

fracs = st.fractions(min_value=-50, max_value=50, max_denominator=60)
squarefree = st.sampled_from([2, 3, 5, 6, 7, 10, 13])


@given(fracs, fracs, squarefree)
@settings(max_examples=300)
def test_sign_matches_high_precision(a, b, d):
    u = Quad(mpq(a.numerator, a.denominator), mpq(b.numerator, b.denominator), d)
    assert sign(u) == quad_sign(a, b, d)


def test_sign_near_cancellation():
    # 99 - 70 sqrt2 ~ 0.00505 and 577 - 408 sqrt2 ~ 0.00087
    assert sign(K2(99, -70)) == 1
    assert sign(K2(-577, 408)) == -1
    assert sign(K2(0, 0)) == 0


@given(fracs, fracs, fracs, fracs)
def test_field_axioms(a, b, c, e):
    x, y = K5(mpq(a), mpq(b)), K5(mpq(c), mpq(e))
    assert x + y == y + x
    assert x * y == y * x
    assert (x - y) + y == x
    if x != 0:
        assert (y / x) * x == y
        assert x * x.inverse() == 1


def test_norm_and_conjugate():
    x = K2(3, 2)
    assert x * conjugate(x) == 1
    assert x.norm() == 1


def test_golden_ratio_identity():
    phi = K5(mpq(1, 2), mpq(1, 2))
    assert phi * phi == phi + 1


@given(fracs, fracs)
def test_parse_format_roundtrip(a, b):
    x = K2(mpq(a), mpq(b))
    assert parse_scalar(format_scalar(x), K2) == x
    assert parse_scalar(format_scalar(x, star=True), K2) == x


@pytest.mark.parametrize("text,expected", [("3/2", (mpq(3, 2), 0)), ("-r", (0, -1)), ("1/2+1/2*r", (mpq(1, 2), mpq(1, 2))), ("2 - 3r", (2, -3))])
def test_parse_literals(text, expected):
    assert parse_scalar(text, K5) == K5(*expected)


@pytest.mark.parametrize("bad", ["", "1//2", "r r", "1+", "abc"])
def test_parse_rejects(bad):
    with pytest.raises(ValueError):
        parse_scalar(bad, K2)


def test_r_in_rational_field():
    with pytest.raises(FieldMismatch):
        parse_scalar("1+r", QQ)


def test_mixed_fields_refuse():
    with pytest.raises(ValueError):
        K2(0, 1) + K5(0, 1)


def test_rational_ratio():
    assert rational_ratio(K2(2, 2), K2(1, 1)) == 2
    assert rational_ratio(K2(2, 0), K2(0, 1)) is None
    assert rational_ratio(mpq(3), mpq(4)) == mpq(3, 4)
    with pytest.raises(ZeroDivisionError):
        rational_ratio(1, 0)


def test_ranks():
    assert rational_rank([[1, 2], [2, 4]]) == 1
    assert qspan_rank([(K2(1, 0), K2(0, 0)), (K2(0, 1), K2(0, 0))]) == 2
    assert qspan_rank([(K2(1, 1), K2(0, 0)), (K2(2, 2), K2(0, 0))]) == 1


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=1, max_size=4))
def test_rational_rank_vs_sympy(rows):
    import sympy

    assert rational_rank(rows) == sympy.Matrix(rows).rank()


def test_is_rational():
    assert is_rational(mpq(1, 3))
    assert is_rational(K2(1, 0))
    assert not is_rational(K2(0, 1))


def test_float_conversion():
    assert abs(float(K2(0, 1)) - 2 ** 0.5) < 1e-15
