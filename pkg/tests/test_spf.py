# tests/test_spf.py - Stationary phase over coset-union domains

import random
from fractions import Fraction

import pytest

from app.errors import DomainError, HypothesisError
from app.field_tower import CharacterSpec, CycloNum
from app.local_ring import LocalNum
from app.polynomials import BivarPoly
from app.spf import (CoordinateSet, ResidueDomain, coordinate_scaling, index_zero_on_units,
                     scale_rules, singular_points, spf_step, stationary_terms, terminal_spf,
                     unit_square_zeta, v_sigma)
from app.zeta_algebra import QMonomial, ZetaRat
from tests.helpers import expr, num, pi

trivial = CharacterSpec.trivial


def test_singular_points(f3):
    cusp = expr(f3, "y^2 - x^3").reduce_mod_pi()
    assert singular_points(cusp, ResidueDomain.full().points(f3)) == {(f3.zero(), f3.zero())}
    cube = expr(f3, "x^3 + y^3").reduce_mod_pi()
    found = singular_points(cube, ResidueDomain.unit_square().points(f3))
    assert found == {(f3.elem(1), f3.elem(2)), (f3.elem(2), f3.elem(1))}


def test_v_sigma_trivial(f3, f5):
    v, sigma = v_sigma(expr(f5, "x"), ResidueDomain.full(), trivial(f5))
    assert (v, sigma) == (Fraction(4, 5), Fraction(1, 5))
    v, sigma = v_sigma(expr(f3, "y^2 - x^3"), ResidueDomain.full(), trivial(f3))
    assert (v, sigma) == (Fraction(2, 3), Fraction(2, 9))


def test_v_sigma_quadratic_sums_character(f5, quadratic5):
    v, sigma = v_sigma(expr(f5, "x"), ResidueDomain.full(), quadratic5)
    assert v.is_zero() and sigma.is_zero()
    v, _ = v_sigma(expr(f5, "x"), ResidueDomain.axis_product(CoordinateSet.classes([f5.elem(1)]),
                                                             CoordinateSet.everything()), quadratic5)
    assert v == Fraction(1, 5)


def test_spf_step_on_the_cusp(f3):
    outcome = spf_step(expr(f3, "y^2 - x^3"), ResidueDomain.full(), trivial(f3))
    expected = ZetaRat.constant(3, Fraction(2, 3)) + ZetaRat(
        3, {1: CycloNum.rational(Fraction(2, 9) * Fraction(2, 3))}, [(1, 1)])
    assert outcome.rational_part == expected
    assert len(outcome.residuals) == 1
    residual = outcome.residuals[0]
    assert residual.point == (LocalNum.zero(f3), LocalNum.zero(f3))
    assert residual.integrand == expr(f3, "t^2*y^2 - t^3*x^3")
    assert residual.measure == QMonomial(2, 0)


def test_spf_step_uses_the_lifting(f3):
    def lift(r):
        return LocalNum.from_fq(r) + pi(f3)

    outcome = spf_step(expr(f3, "y^2 - x^3"), ResidueDomain.full(), trivial(f3), lift=lift)
    assert outcome.residuals[0].point == (pi(f3), pi(f3))
    assert outcome.residuals[0].integrand == expr(f3, "(t + t*y)^2 - (t + t*x)^3")


def test_terminal_spf_refuses_singular_reduction(f3):
    with pytest.raises(HypothesisError):
        terminal_spf(expr(f3, "y^2 - x^3"), ResidueDomain.full(), trivial(f3))


def test_terminal_spf_on_smooth_line(f5):
    z = terminal_spf(expr(f5, "x + y^2"), ResidueDomain.full(), trivial(f5))
    assert z == ZetaRat(5, {0: CycloNum.rational(Fraction(4, 5))}, [(1, 1)])


def test_stationary_terms_without_sigma(f5):
    z = stationary_terms(5, CycloNum.rational(Fraction(1, 2)), CycloNum.zero())
    assert z.denominator == ()


def test_unit_square_zeta(f7):
    z = unit_square_zeta(expr(f7, "x^2 + y^3"), trivial(f7))
    sigma = Fraction(6, 49) * Fraction(6, 7)
    expected = ZetaRat.constant(7, Fraction(30, 49)) + ZetaRat(7, {1: CycloNum.rational(sigma)}, [(1, 1)])
    assert z == expected


def test_unit_square_replaces_by_leading_part(f7):
    full = expr(f7, "x^2 + t*y^3")
    leading = expr(f7, "x^2")
    assert unit_square_zeta(full, trivial(f7), leading=leading) == unit_square_zeta(leading, trivial(f7))
    with pytest.raises(HypothesisError):
        unit_square_zeta(full, trivial(f7), leading=expr(f7, "y^3"))


@pytest.mark.parametrize("order", [1, 2])
def test_unit_square_ignores_higher_pi_terms(f7, order):
    chi = trivial(f7) if order == 1 else CharacterSpec.conductor_one(f7, 2, 1)
    leading = expr(f7, "x^2 + y^3")
    base = unit_square_zeta(leading, chi)
    rng = random.Random(4242 + order)
    for _ in range(8):
        r = leading
        for _ in range(rng.randint(1, 3)):
            coeff = num(f7, rng.randint(1, 6)) * pi(f7, rng.randint(1, 3))
            r = r + BivarPoly.monomial(coeff, rng.randint(0, 4), rng.randint(0, 4))
        assert unit_square_zeta(r, chi) == base
        assert unit_square_zeta(r, chi, leading=leading) == base


def test_index_zero_on_units(f3):
    assert index_zero_on_units(expr(f3, "y^2 - x^3"))
    assert not index_zero_on_units(expr(f3, "x^3 + y^3"))


def test_scale_rules(f5, quadratic5):
    assert scale_rules(trivial(f5), pi(f5, 2)) == (CycloNum.one(), QMonomial(0, 2))
    assert scale_rules(quadratic5, num(f5, 2) * pi(f5)) == (-1, QMonomial(0, 1))
    with pytest.raises(DomainError):
        scale_rules(quadratic5, LocalNum.zero(f5))


def test_coordinate_scaling():
    assert coordinate_scaling(1, 2) == QMonomial(3, 0)
    with pytest.raises(DomainError):
        coordinate_scaling(-1, 0)
