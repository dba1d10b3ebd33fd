import pytest
import numpy as np

from lib.core.errors import ConfigError, FieldMismatchError
from lib.fields.galois_field import (
    field_create,
    tower_create,
    field_from_description,
    prime_power,
    element_arithmetic,
    conjugate,
    embed_subfield,
    special_scalar,
    check_frobenius,
    verify_fields,
)


@pytest.fixture(scope='module')
def gf4():
    return tower_create(field_create(2, 1))


@pytest.fixture(scope='module')
def gf9():
    return tower_create(field_create(3, 1))


def test_smallest_moduli(gf4, gf9):
    assert field_create(2, 2).modulus == (1, 1)
    assert field_create(3, 1).modulus == (0,)
    assert gf4.modulus == (1, 1)
    assert gf9.modulus == (1, 0)


def test_gf4_arithmetic(gf4):
    w = gf4.element(2)
    one = gf4.one
    assert w * w == w + one
    assert w * (w + one) == one
    assert w.inverse() == gf4.element(3)
    assert w + w == gf4.zero
    assert element_arithmetic(w, w + one, 'mul') == one


def test_special_scalar(gf4, gf9):
    i = special_scalar(gf9)
    assert i.value == 3
    assert i * i == -gf9.one
    assert conjugate(i) == -i
    assert special_scalar(gf4).value == 1


@pytest.mark.parametrize('p, k', [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1)])
def test_field_axioms(p, k):
    F = field_create(p, k)
    assert F.order == p ** k
    for a in range(1, F.order):
        assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0
        assert F.power(a, F.order - 1) == 1
    assert check_frobenius(F)


def test_inverse_of_zero(gf9):
    with pytest.raises(ZeroDivisionError):
        gf9.inv(0)
    with pytest.raises(ZeroDivisionError):
        element_arithmetic(gf9.one, gf9.zero, 'div')


def test_conjugation_fixes_subfield(gf9):
    conj = gf9.conj_table
    assert np.array_equal(conj[conj], np.arange(9))
    assert np.flatnonzero(conj == np.arange(9)).tolist() == [0, 1, 2]
    for a in range(9):
        assert gf9.in_subfield(gf9.norm(a))


def test_tower_over_gf4():
    F16 = tower_create(field_create(2, 2))
    assert F16.order == 16
    fixed = np.flatnonzero(F16.conj_table == np.arange(16))
    assert fixed.tolist() == [0, 1, 2, 3]


def test_embedding(gf9):
    base = gf9.base
    for x in base.elements():
        for y in base.elements():
            assert embed_subfield(x * y, gf9) == embed_subfield(x, gf9) * embed_subfield(y, gf9)
            assert embed_subfield(x + y, gf9) == embed_subfield(x, gf9) + embed_subfield(y, gf9)


def test_field_mismatch(gf9):
    with pytest.raises(FieldMismatchError):
        gf9.one + gf9.base.one
    with pytest.raises(FieldMismatchError):
        embed_subfield(gf9.one, gf9)


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(2) == (2, 1)
    with pytest.raises(ConfigError):
        prime_power(6)
    with pytest.raises(ConfigError):
        field_create(4, 1)


def test_description_round_trip(gf9):
    rebuilt = field_from_description(gf9.describe())
    assert rebuilt == gf9
    assert np.array_equal(rebuilt.mul_table, gf9.mul_table)


def test_verify_fields(gf4, gf9):
    assert verify_fields(gf4).passed
    report = verify_fields(gf9)
    assert report.passed
    assert report.details['fixed_field_size'] == 3
