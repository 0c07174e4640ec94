"""Finite-field construction and arithmetic"""
import pytest

from modules.errors import FieldError
from modules.gf import (field_add, field_element, field_inv, field_make, field_mul, field_of_order,
                        field_one, field_pow, field_sub, field_zero, galois_field, is_irreducible,
                        multiplicative_order, prime_power)


def test_prime_field_modulus():
    f = field_make(2, 1)
    assert f.q == 2
    assert f.modulus == (0, 1)


def test_gf4_modulus_is_x2_x_1():
    assert field_make(2, 2).modulus == (1, 1, 1)


def test_gf9_modulus_is_smallest_irreducible_quadratic():
    f = field_make(3, 2)
    # x^2 + 1 has no root mod 3 and x^2 itself is reducible
    assert f.modulus == (1, 0, 1)
    assert is_irreducible(list(f.modulus), 3)
    assert not is_irreducible([0, 0, 1], 3)


def test_field_make_is_deterministic():
    assert field_make(2, 4) == field_make(2, 4)


def test_gf5_multiplication():
    f = field_make(5, 1)
    assert field_mul(field_element(f, 3), field_element(f, 4), f) == field_element(f, 2)


def test_gf4_x_times_x():
    f = field_make(2, 2)
    x = field_element(f, 2)
    assert x.coeffs == (0, 1)
    assert field_mul(x, x, f).coeffs == (1, 1)


@pytest.mark.parametrize('q', [2, 3, 4, 5, 7, 8, 9, 16, 25, 27, 32, 49, 64])
def test_inverses(q):
    f = field_of_order(q)
    one = field_one(f)
    for i in range(1, q):
        a = field_element(f, i)
        assert field_mul(a, field_inv(a, f), f) == one


FIELD_ORDERS = [q for q in range(2, 65) if prime_power(q) is not None]


@pytest.mark.parametrize('q', [q if q <= 16 else pytest.param(q, marks=pytest.mark.slow) for q in FIELD_ORDERS])
def test_field_axioms_exhaustive(q):
    gf = galois_field(field_of_order(q))
    elements = range(q)
    for a in elements:
        assert gf.add(a, 0) == a
        assert gf.mul(a, 1) == a
        assert gf.add(a, gf.neg(a)) == 0
        if a:
            assert gf.mul(a, gf.inv(a)) == 1
        for b in elements:
            assert gf.add(a, b) == gf.add(b, a)
            assert gf.mul(a, b) == gf.mul(b, a)
            assert gf.mul(a, b) == gf._slow_mul(a, b)
            for c in elements:
                assert gf.mul(a, gf.mul(b, c)) == gf.mul(gf.mul(a, b), c)
                assert gf.add(a, gf.add(b, c)) == gf.add(gf.add(a, b), c)
                assert gf.mul(a, gf.add(b, c)) == gf.add(gf.mul(a, b), gf.mul(a, c))


def test_sub_and_pow():
    f = field_make(3, 2)
    a, b = field_element(f, 5), field_element(f, 7)
    assert field_add(field_sub(a, b, f), b, f) == a
    assert field_pow(a, 0, f) == field_one(f)
    assert field_pow(a, f.q - 1, f) == field_one(f)
    assert (f.q - 1) % multiplicative_order(a, f) == 0


def test_prime_power():
    assert prime_power(9) == (3, 2)
    assert prime_power(64) == (2, 6)
    assert prime_power(12) is None
    assert prime_power(1) is None


def test_errors():
    with pytest.raises(FieldError):
        field_make(4, 1)
    with pytest.raises(FieldError):
        field_make(2, 13)
    with pytest.raises(FieldError):
        field_of_order(6)
    f = field_make(2, 2)
    with pytest.raises(FieldError):
        field_inv(field_zero(f), f)
    g = field_make(3, 1)
    with pytest.raises(FieldError):
        field_add(field_one(f), field_one(g), f)
    with pytest.raises(FieldError):
        field_element(f, 4)
