import random

import pytest

from endotriv.errors import DomainError, GroupSpecError
from endotriv.gf import (FieldElement, field_spec, mul, mult_order, parse_field,
                         primitive_element)

PRIME_POWERS_64 = [2, 3, 4, 5, 7, 8, 9, 11, 13, 16, 17, 19, 23, 25, 27, 29,
                   31, 32, 37, 41, 43, 47, 49, 53, 59, 61, 64]


def el(q, v):
    return FieldElement(field_spec(q), v)


def test_mul_examples():
    assert mul(el(2, 1), el(2, 1)).val == 1
    # GF(4) with modulus x^2+x+1: x*x = x+1
    F4 = field_spec(4)
    assert F4.modulus == (1, 1, 1)
    x = el(4, 2)
    assert (x * x).val == 3
    assert mul(el(5, 2), el(5, 3)).val == 1


def test_mul_mismatched_specs():
    with pytest.raises(DomainError):
        mul(el(4, 1), el(5, 1))


def test_mult_order_examples():
    assert mult_order(el(5, 1)) == 1
    assert mult_order(el(5, 2)) == 4
    g4 = primitive_element(field_spec(4))
    assert mult_order(g4) == 3
    with pytest.raises(DomainError):
        mult_order(el(5, 0))


def test_primitive_element_examples():
    assert primitive_element(field_spec(2)).val == 1
    assert primitive_element(field_spec(5)).val == 2
    assert primitive_element(field_spec(4)).val == 2  # the class of the variable


def test_primitive_element_order_property():
    for q in (4, 5, 7, 8, 9, 13, 16, 25, 27, 49):
        F = field_spec(q)
        g = F.primitive
        assert F.pow_el(g, q - 1) == 1
        for m in range(1, q - 1):
            if (q - 1) % m == 0:
                assert F.pow_el(g, m) != 1 or m == q - 1


def test_field_laws_random_pairs():
    rng = random.Random(12345)
    checked = 0
    while checked < 1000:
        q = rng.choice([4, 5, 8, 9, 16, 25, 27, 49, 64])
        F = field_spec(q)
        a, b, c = (rng.randrange(q) for _ in range(3))
        assert F.mul_el(a, b) == F.mul_el(b, a)
        assert F.mul_el(a, F.mul_el(b, c)) == F.mul_el(F.mul_el(a, b), c)
        assert F.mul_el(a, F.add_el(b, c)) == F.add_el(F.mul_el(a, b),
                                                       F.mul_el(a, c))
        if a:
            assert F.mul_el(a, F.inv_el(a)) == 1
        checked += 1


def test_order_divides_exhaustive_small_fields():
    for q in PRIME_POWERS_64:
        F = field_spec(q)
        for a in range(1, q):
            assert (q - 1) % F.mult_order(a) == 0


def test_extended_euclid_inverse_matches_table():
    for q in (9, 16, 27):
        F = field_spec(q)
        for a in range(1, q):
            assert F._raw_inv(a) == F.inv_el(a)


def test_coeff_printing():
    assert str(el(4, 3)) == "[1,1]"
    assert str(el(5, 3)) == "[3]"


def test_parse_field():
    assert parse_field("GF(9)").q == 9
    with pytest.raises(GroupSpecError):
        parse_field("GF(6)")
    with pytest.raises(GroupSpecError):
        parse_field("F(9)")


def test_q_cap():
    with pytest.raises(DomainError):
        field_spec(1 << 17)


def test_element_of_order_and_subgroup_values():
    F = field_spec(13)
    for m in (1, 2, 3, 4, 6, 12):
        g = F.element_of_order(m)
        assert F.mult_order(g) == m
        assert len(F.subgroup_values(m)) == m
    with pytest.raises(DomainError):
        F.element_of_order(5)
