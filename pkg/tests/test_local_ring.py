# tests/test_local_ring.py - Arithmetic and valuations in F_q((t))

import random
from fractions import Fraction

import pytest

from app.errors import DomainError
from app.local_ring import (ORD_INFINITY, LocalNum, LocalOp, character_value, lifts_of, local_ops,
                            ord_ac, residues_mod)
from tests.helpers import num, pi


def test_ord_and_angular_component(f5):
    x = num(f5, 2) * pi(f5, 2) + pi(f5, 3)
    assert ord_ac(x) == (2, num(f5, 2) + pi(f5))
    y = pi(f5, -1) + 1
    assert ord_ac(y) == (-1, num(f5, 1) + pi(f5))


def test_angular_component_of_zero(f5):
    with pytest.raises(DomainError) as info:
        ord_ac(LocalNum.zero(f5))
    assert info.value.ord is ORD_INFINITY
    assert LocalNum.zero(f5).ord > 10 ** 6


def test_division_by_pi_must_be_exact(f5):
    x = pi(f5, 2) + pi(f5, 4)
    assert local_ops(x, 2, LocalOp.DIV_BY_PI_POW) == 1 + pi(f5, 2)
    with pytest.raises(DomainError):
        x.div_by_pi_pow(3)


def test_reduce_mod_keeps_low_digits(f5):
    x = 3 + pi(f5, 1) + pi(f5, 5)
    assert local_ops(x, 2, LocalOp.REDUCE_MOD) == 3 + pi(f5)
    with pytest.raises(DomainError):
        pi(f5, -1).reduce_mod(2)


def test_inverse_of_monomials_only(f5):
    assert (num(f5, 2) * pi(f5)) ** -1 == num(f5, 3) * pi(f5, -1)
    with pytest.raises(DomainError):
        (1 + pi(f5)) ** -1


def test_parse_literal(f5):
    assert LocalNum.parse("3 + t^2", f5) == 3 + pi(f5, 2)
    value = LocalNum.parse("-t^-2", f5)
    assert value.ord == -2
    assert value.coefficient(-2) == f5.elem(4)


def test_residues_and_lifts(f3):
    assert len(residues_mod(f3, 2)) == 9
    lifts = lifts_of(f3.elem(1), 3)
    assert len(lifts) == 9
    assert all(x.residue() == f3.elem(1) for x in lifts)
    assert len(set(lifts)) == 9


def test_character_value_uses_angular_component(f5, quadratic5):
    assert character_value(quadratic5, num(f5, 2) * pi(f5)) == -1
    assert character_value(quadratic5, num(f5, 4) * pi(f5, 3)) == 1
    assert character_value(quadratic5, LocalNum.zero(f5)).is_zero()


def test_abs_value(f5):
    assert pi(f5, 2).abs_value() == Fraction(1, 25)
    assert LocalNum.zero(f5).abs_value() == 0


def random_local(field, rng):
    start = rng.randint(-3, 3)
    return LocalNum(field, {start + i: rng.choice(field.elements()) for i in range(rng.randint(1, 4))})


@pytest.mark.parametrize("name", ["f5", "f9"])
def test_ultrametric_inequality(name, request):
    field = request.getfixturevalue(name)
    rng = random.Random(31)
    for _ in range(200):
        x, y = random_local(field, rng), random_local(field, rng)
        total = x + y
        assert total.abs_value() <= max(x.abs_value(), y.abs_value())
        if x.is_zero() or y.is_zero():
            continue
        assert total.ord >= min(x.ord, y.ord)
        if x.ord != y.ord:
            assert total.ord == min(x.ord, y.ord)


@pytest.mark.parametrize("name", ["f5", "f9"])
def test_printed_literals_parse_back(name, request):
    field = request.getfixturevalue(name)
    rng = random.Random(57)
    for _ in range(100):
        x = random_local(field, rng)
        again = LocalNum.parse(repr(x), field)
        assert again == x
        assert repr(again) == repr(x)
