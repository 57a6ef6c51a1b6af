from fractions import Fraction

import pytest
from hypothesis import given

from conftest import F, polys, rationals
from rotabaxter.exact_poly import NEG_INF, Poly, X, as_rational, derivative, evaluate, integral_from, parse_poly


def test_ring_examples():
    assert (X + 1) * (X - 1) == X**2 - 1
    p = parse_poly("1/2*x^3 - x + 4")
    assert p + Poly.zero() == p
    assert (2 * X) * (3 * X**2) == 6 * X**3


def test_zero_degree_sentinel():
    assert Poly.zero().degree == NEG_INF
    assert Poly([1, 0, 0]).degree == 0
    assert Poly([0, 0]) == Poly.zero()


def test_derivative_examples():
    assert derivative(X**3) == 3 * X**2
    assert derivative(Poly.constant(5)) == 0
    assert derivative(X**4 / 4) == X**3


@pytest.mark.parametrize("n", range(6))
def test_integral_from_zero_monomial(n):
    assert integral_from(0, X**n) == Poly.monomial(n + 1, F(1, n + 1))


def test_integral_from_examples():
    assert integral_from(1, X) == (X**2 - 1) / 2
    assert integral_from(2, X**3) == (X**4 - 16) / 4


def test_evaluate_examples():
    assert evaluate(X**2 - 1, 1) == 0
    assert evaluate(X**2 - 1, 2) == 3
    assert evaluate(Poly.zero(), F(7, 3)) == 0


def test_as_rational_forms():
    assert as_rational("3/6") == F(1, 2)
    assert as_rational([4, -8]) == F(-1, 2)
    assert as_rational(3) == 3
    with pytest.raises(TypeError):
        as_rational(True)
    with pytest.raises(TypeError):
        as_rational(0.5)


def test_parse_rejects_garbage():
    for bad in ("", "x^", "2 x", "x + + 1", "y"):
        with pytest.raises(ValueError):
            parse_poly(bad)


def test_parse_accepts_variants():
    assert parse_poly("x**2 + 1*x - 3/4") == X**2 + X - F(3, 4)
    assert parse_poly("-x") == -X
    assert parse_poly("0") == Poly.zero()


def test_text_format():
    assert str(Poly([1, -1, 0, F(1, 2)])) == "1/2*x^3 - x + 1"
    assert str(Poly.zero()) == "0"
    assert str(-X**2) == "-x^2"


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert (p + q) * r == p * r + q * r
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p - p == Poly.zero()


@given(polys(), polys())
def test_leibniz(p, q):
    assert (p * q).derivative() == p.derivative() * q + p * q.derivative()


@given(polys(), rationals)
def test_integral_inverts_derivative(p, a):
    ip = p.integral_from(a)
    assert ip.derivative() == p
    assert ip(a) == 0


@given(polys())
def test_text_and_json_roundtrip(p):
    assert parse_poly(str(p)) == p
    assert Poly.from_json(p.to_json()) == p


@given(polys(), polys(), rationals)
def test_compose_and_evaluate(p, q, a):
    assert p.compose(q)(a) == p(q(a))
    assert isinstance(p(a), Fraction)


@given(polys(max_degree=3))
def test_power_by_squaring(p):
    assert p**3 == p * p * p
    assert p**0 == 1
