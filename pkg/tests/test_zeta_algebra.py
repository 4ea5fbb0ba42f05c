# tests/test_zeta_algebra.py - Rational functions in T and their closed-form sums

import json
import random
from fractions import Fraction

import pytest

from app.errors import DivergentSeriesError, DomainError
from app.field_tower import CycloNum
from app.zeta_algebra import (QMonomial, ZetaOp, ZetaRat, geometric_close, poles, series_expand,
                              zr_ops)


def smooth_line(q):
    """Z of f = x: (1 − 1/q)/(1 − T/q)."""
    return ZetaRat(q, {0: CycloNum.rational(Fraction(q - 1, q))}, [(1, 1)])


def test_geometric_close():
    closed = geometric_close(ZetaRat.one(5), QMonomial(1, 1), 1)
    assert closed == ZetaRat(5, {1: CycloNum.rational(Fraction(1, 5))}, [(1, 1)])


def test_geometric_close_without_t_folds_a_scalar():
    closed = geometric_close(ZetaRat.one(5), QMonomial(1, 0), 0)
    assert closed == ZetaRat.constant(5, Fraction(5, 4))
    assert closed.denominator == ()


def test_divergent_ratio():
    with pytest.raises(DivergentSeriesError) as info:
        geometric_close(ZetaRat.one(5), QMonomial(0, 1), 0)
    assert "a >= 1" in info.value.message
    with pytest.raises(DomainError):
        geometric_close(ZetaRat.one(5), QMonomial(1, 1), -1)


def test_series_expansion():
    coeffs = series_expand(smooth_line(5), 2)
    assert [c.to_fraction() for c in coeffs] == [Fraction(4, 5), Fraction(4, 25), Fraction(4, 125)]


def test_simplify_cancels_exact_factors():
    z = ZetaRat.from_factor(5, (1, 1)).divide_by_factor((1, 1)).divide_by_factor((5, 6))
    simplified = zr_ops(z, None, ZetaOp.SIMPLIFY)
    assert simplified.denominator == ((5, 6),)
    assert simplified.numerator == {0: CycloNum.one()}


def test_simplify_keeps_genuine_poles():
    z = smooth_line(5).simplify()
    assert z.denominator == ((1, 1),)


def test_add_uses_least_common_denominator():
    total = zr_ops(smooth_line(5), smooth_line(5), ZetaOp.ADD)
    assert total.denominator == ((1, 1),)
    assert total == smooth_line(5).scalar_mul(2)


def test_equality_by_cross_multiplication():
    pole = ZetaRat(5, {0: CycloNum.one()}, [(1, 1)])
    assert pole.mono_mul(QMonomial(1, 1)) + 1 == pole
    assert zr_ops(pole, pole.scalar_mul(2), ZetaOp.EQ) is False


def test_canonical_factor_order():
    z = ZetaRat(5, {0: CycloNum.one()}, [(5, 6), (1, 1), (2, 2)])
    assert z.denominator == ((1, 1), (2, 2), (5, 6))


def test_factor_exponents_must_be_positive():
    with pytest.raises(DomainError):
        ZetaRat(5, {0: CycloNum.one()}, [(0, 1)])
    with pytest.raises(DomainError):
        QMonomial(-1, 0)


def test_pole_report():
    z = ZetaRat(7, {0: CycloNum.one()}, [(1, 1), (5, 6)])
    assert poles(z).real_parts == {Fraction(-1), Fraction(-5, 6)}
    assert poles(z).to_json()[1]["real_part"] == "-5/6"


def test_mass_normalization_of_smooth_line():
    assert smooth_line(5).evaluate(1) == 1
    assert smooth_line(3).evaluate(Fraction(1, 2)) == Fraction(4, 5)


def test_evaluate_at_a_pole():
    with pytest.raises(DomainError):
        smooth_line(5).evaluate(5)


def test_mixing_residue_fields():
    with pytest.raises(DomainError):
        smooth_line(5) + smooth_line(7)


def test_cyclotomic_numerator_json_is_canonical():
    z = ZetaRat(5, {0: CycloNum.root_of_unity(4, 1), 2: CycloNum.rational(Fraction(1, 3))}, [(2, 2), (1, 1)])
    data = z.to_json()
    assert data["order"] == 4
    assert data["denominator"] == [[1, 1], [2, 2]]
    again = ZetaRat.from_json(5, json.loads(json.dumps(data)))
    assert json.dumps(again.to_json()) == json.dumps(data)
    assert again == z


def test_reduced_after_exact_cancellation():
    z = ZetaRat.from_factor(5, (1, 1)).divide_by_factor((1, 1)).divide_by_factor((5, 6)).simplify()
    assert z.is_reduced()
    assert smooth_line(5).is_reduced()
    assert ZetaRat.one(5).is_reduced()


def test_partial_cancellation_is_not_reduced():
    # 1 + T/5 divides 1 − T²/25 but is not a whole factor
    z = ZetaRat(5, {0: CycloNum.one(), 1: CycloNum.rational(Fraction(1, 5))}, [(2, 2)]).simplify()
    assert z.denominator == ((2, 2),)
    assert not z.is_reduced()


def test_cyclotomic_numerator_sharing_a_root():
    # 1 − iT/5 vanishes at T = −5i, a root of 1 − T⁴/625
    i = CycloNum.root_of_unity(4, 1)
    z = ZetaRat(5, {0: CycloNum.one(), 1: i * Fraction(-1, 5)}, [(4, 4)])
    assert not z.simplify().is_reduced()
    shifted = ZetaRat(5, {0: CycloNum.one(), 1: i * Fraction(-1, 3)}, [(4, 4)])
    assert shifted.is_reduced()


FACTORS = ((1, 1), (1, 2), (2, 2), (5, 6), (2, 3))


def random_zeta(rng, q):
    numerator = {k: CycloNum.rational(Fraction(rng.randint(-9, 9), rng.randint(1, 9)))
                 for k in range(rng.randint(1, 4))}
    numerator[0] = CycloNum.one()
    z = ZetaRat(q, numerator, rng.sample(FACTORS, rng.randint(1, 3)))
    for factor in rng.sample(FACTORS, rng.randint(0, 2)):
        z = z * ZetaRat.from_factor(q, factor)
    return z


def test_simplify_keeps_the_series():
    rng = random.Random(1103)
    for _ in range(25):
        z = random_zeta(rng, rng.choice((3, 5, 7)))
        assert series_expand(z.simplify(), 8) == series_expand(z, 8)
        assert z.simplify() == z


def test_geometric_partial_sums_telescope():
    rng = random.Random(409)
    for _ in range(20):
        q = rng.choice((3, 5))
        c = random_zeta(rng, q)
        rho = QMonomial(rng.randint(1, 3), rng.randint(0, 3))
        a0, n = rng.randint(0, 2), rng.randint(0, 4)
        partial = ZetaRat.zero(q)
        for a in range(a0, a0 + n + 1):
            partial = partial + c.mono_mul(rho ** a)
        assert geometric_close(c, rho, a0) - geometric_close(c, rho, a0 + n + 1) == partial
