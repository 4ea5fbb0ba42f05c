# tests/test_field_tower.py - Residue fields, cyclotomic numbers and characters

import json
import random

import pytest

from app.errors import DomainError, HypothesisError
from app.field_tower import (CharacterKind, CharacterSpec, CycloNum, CycloOp, FieldOp, FqConfig,
                             char_eval, cyclo_ops, ff_ops, unit_residues)


# --- residue fields ---

def test_prime_field_operations(f5, f7):
    assert ff_ops(f5.elem(3), f5.elem(4), FieldOp.MUL) == f5.elem(2)
    assert ff_ops(f7.elem(2), None, FieldOp.INV) == f7.elem(4)
    assert ff_ops(f5.elem(2), 3, FieldOp.POW) == f5.elem(3)
    assert f5.elem(3) + 4 == f5.elem(2)


def test_rejects_non_prime_characteristic():
    with pytest.raises(DomainError):
        FqConfig(4)


def test_extension_needs_irreducible_modulus():
    with pytest.raises(DomainError):
        FqConfig(3, 2)
    with pytest.raises(DomainError):
        FqConfig(3, 2, (2, 0, 1))  # z^2 - 1


def test_parse_modulus():
    assert FqConfig.parse_modulus("z^2 + 1", 3) == (1, 0, 1)


def test_extension_field_arithmetic(f9):
    z = f9.elem(3)
    assert z * z == f9.elem(2)
    assert z * z.inverse() == f9.one()
    assert len(f9.units()) == 8


def test_generator_is_verified(f5, f9):
    assert f5.generator == f5.elem(2)
    assert f5.dlog(f5.elem(4)) == 2
    assert f9.is_generator(f9.generator)
    powers = {f9.generator ** i for i in range(8)}
    assert len(powers) == 8


def test_inverse_of_zero(f5):
    with pytest.raises(DomainError):
        f5.zero().inverse()


# --- cyclotomic scalars ---

def test_cyclotomic_identities():
    zeta3 = CycloNum.root_of_unity(3, 1)
    assert cyclo_ops(CycloNum.root_of_unity(2, 1), CycloNum.one(), CycloOp.ADD).is_zero()
    assert (1 + zeta3 + zeta3 ** 2).is_zero()
    assert CycloNum.root_of_unity(4, 1) ** 2 == -1


def test_mixed_orders_meet_in_common_field():
    assert CycloNum.root_of_unity(2, 1) == CycloNum.root_of_unity(4, 2)
    mixed = CycloNum.root_of_unity(3, 1) * CycloNum.root_of_unity(4, 1)
    assert mixed.order == 12
    assert cyclo_ops(mixed, CycloNum.root_of_unity(12, 7), CycloOp.EQ)


def test_conjugate_and_norm():
    zeta3 = CycloNum.root_of_unity(3, 1)
    assert zeta3.conjugate() == zeta3 ** 2
    assert (zeta3 * zeta3.conjugate()).to_fraction() == 1


def test_complex_embedding():
    assert CycloNum.root_of_unity(4, 1).to_complex() == pytest.approx(0 + 1j)
    zeta3 = CycloNum.root_of_unity(3, 1)
    assert (zeta3 + zeta3 ** 2).to_complex() == pytest.approx(-1 + 0j)


def test_irrational_value_refuses_fraction():
    with pytest.raises(DomainError):
        CycloNum.root_of_unity(3, 1).to_fraction()


# --- characters ---

def test_quadratic_character_values(f5, quadratic5):
    assert char_eval(quadratic5, f5.elem(4)) == 1
    assert char_eval(quadratic5, f5.elem(2)) == -1
    assert char_eval(quadratic5, f5.elem(3)) == -1
    assert char_eval(quadratic5, f5.zero()).is_zero()


def test_character_order_must_divide_q_minus_one(f5):
    with pytest.raises(HypothesisError):
        CharacterSpec.conductor_one(f5, 3)


def test_parse_character_syntax(f5):
    assert CharacterSpec.parse("trivial", f5).is_trivial
    assert CharacterSpec.parse("mult:2:2", f5).is_trivial
    chi = CharacterSpec.parse("mult:4:1", f5)
    assert chi.kind is CharacterKind.CONDUCTOR_ONE
    assert chi.describe() == "mult:4:1"
    with pytest.raises(HypothesisError):
        CharacterSpec.parse("bogus", f5)


def test_table_character_matches_conductor_one(f5, quadratic5):
    values = {(u,): f5.dlog(u) % 2 for u in f5.units()}
    table = CharacterSpec.from_table(f5, 2, 1, values)
    for u in f5.units():
        assert char_eval(table, (u,)) == char_eval(quadratic5, u)


def test_table_must_be_multiplicative(f5):
    values = {(u,): 0 for u in f5.units()}
    values[(f5.elem(2),)] = 1
    with pytest.raises(HypothesisError):
        CharacterSpec.from_table(f5, 2, 1, values)


def test_load_table_of_conductor_two(f3, tmp_path):
    entries = []
    for head in f3.units():
        for tail in f3.elements():
            entries.append({"residue": [head.index, tail.index], "exponent": f3.dlog(head)})
    path = tmp_path / "chi.json"
    path.write_text(json.dumps({"order": 2, "conductor": 2, "values": entries}), encoding="utf-8")

    chi = CharacterSpec.parse(f"table:{path}", f3)
    assert chi.kind is CharacterKind.TABLE
    assert chi.effective_conductor == 2
    assert char_eval(chi, (f3.elem(2), f3.elem(1))) == -1


@pytest.mark.parametrize("name", ["f5", "f7", "f9"])
def test_character_sums_vanish(name, request):
    field = request.getfixturevalue(name)
    rng = random.Random(field.q)
    orders = [n for n in range(2, field.q) if (field.q - 1) % n == 0]
    for _ in range(6):
        order = rng.choice(orders)
        e1, e2 = rng.sample(range(order), 2)
        chi1 = CharacterSpec.conductor_one(field, order, e1)
        chi2 = CharacterSpec.conductor_one(field, order, e2)
        total = sum((char_eval(chi1, u) for u in field.units()), CycloNum.zero(order))
        expected = field.q - 1 if chi1.is_trivial else 0
        assert total == expected
        inner = sum((char_eval(chi1, u) * char_eval(chi2, u).conjugate() for u in field.units()),
                    CycloNum.zero(order))
        assert inner.is_zero()


def test_table_character_sum_vanishes(f3):
    # u = h(1 + aπ) mod π², χ(u) = ζ_3^a
    values = {(head, tail): (tail * head.inverse()).index for head in f3.units() for tail in f3.elements()}
    chi = CharacterSpec.from_table(f3, 3, 2, values)
    assert char_eval(chi, (f3.one(), f3.zero())) == 1
    assert char_eval(chi, (f3.one(), f3.one())) == CycloNum.root_of_unity(3, 1)
    total = sum((char_eval(chi, u) for u in unit_residues(f3, 2)), CycloNum.zero(3))
    assert total.is_zero()
