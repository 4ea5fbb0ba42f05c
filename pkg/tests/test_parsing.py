# tests/test_parsing.py - Expression, literal and curve-block parsing

import pytest

from app.errors import ParseError
from app.local_ring import LocalNum
from app.parsing import parse_curve_block, parse_expression, parse_local, parse_poly, tokenize
from app.polynomials import BivarPoly, FactoredCurve
from tests.helpers import expr, num, pi


def test_recognizes_factored_curve(f5):
    curve = parse_poly("y^2 - x*(x-1)*(x-2)", f5)
    assert isinstance(curve, FactoredCurve)
    assert curve.gamma0 == 1
    assert curve.m == 2
    assert sorted(g.coefficient(0).index for g, _ in curve.roots) == [0, 1, 2]


def test_recognizes_multiplicities(f5):
    curve = parse_poly("y^2 - x^2*(x-1)^3", f5)
    assert dict((g.coefficient(0).index, n) for g, n in curve.roots) == {0: 2, 1: 3}


def test_general_expression_stays_polynomial(f7):
    h = parse_poly("x^2 + y^3 + t*x^4", f7)
    assert isinstance(h, BivarPoly)
    assert h.support == frozenset({(2, 0), (0, 3), (4, 0)})
    assert h.coefficient(4, 0) == pi(f7)


def test_parse_error_offset(f5):
    with pytest.raises(ParseError) as info:
        parse_poly("y^2 -", f5)
    assert info.value.offset == 5
    assert info.value.to_dict()["offset"] == 5


def test_unknown_symbol(f5):
    with pytest.raises(ParseError) as info:
        parse_poly("y^2 - z", f5)
    assert info.value.offset == 6


def test_unexpected_character(f5):
    with pytest.raises(ParseError) as info:
        tokenize("x + $")
    assert info.value.offset == 4


def test_negative_exponent_on_variable(f5):
    with pytest.raises(ParseError):
        parse_expression("y^2 + x^-1", f5)


def test_implicit_multiplication(f5):
    assert parse_expression("2x y", f5) == parse_expression("2*x*y", f5)
    assert parse_expression("t(x + 1)", f5) == expr(f5, "t*x + t")


def test_local_literals(f5, f9):
    assert parse_local("3 + pi^2", f5) == 3 + pi(f5, 2)
    assert parse_local("t^(-1)", f5) == pi(f5, -1)
    assert parse_local("3", f9) == LocalNum.from_fq(f9.elem(3))
    with pytest.raises(ParseError):
        parse_local("9", f9)
    with pytest.raises(ParseError):
        parse_local("x + 1", f5)


def test_curve_block(f3):
    curve = parse_curve_block("curve{gamma0=-t^2; roots=[(t^-1,2),(0,2)]; m=2}", f3)
    assert curve.gamma0 == -pi(f3, 2)
    assert curve.roots[0] == (pi(f3, -1), 2)
    assert curve.m == 2


def test_curve_block_takes_m_from_caller(f5):
    curve = parse_poly("gamma0=1; roots=[(0,1),(1,1),(2,1)]", f5, m=2)
    assert isinstance(curve, FactoredCurve)
    assert curve.m == 2


def test_curve_block_errors(f5):
    with pytest.raises(ParseError):
        parse_curve_block("gamma0=1", f5, m=2)
    with pytest.raises(ParseError):
        parse_curve_block("gamma0=1; roots=[(0,1)]; m=2", f5, m=4)
    with pytest.raises(ParseError):
        parse_curve_block("gamma0=1; roots=[(0,1)]", f5)
    with pytest.raises(ParseError):
        parse_curve_block("gamma0=x; roots=[(0,1)]; m=2", f5)


def test_curve_with_unit_multiple(f5):
    curve = parse_poly("y^2 + 2*(x - 1)", f5)
    assert curve.gamma0 == num(f5, 3)
    assert curve.roots == ((num(f5, 1), 1),)
