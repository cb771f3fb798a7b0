import itertools

import pytest
from hypothesis import given, strategies as st

from agpolar.errors import DivideByZero, NotPrime, Reducible
from agpolar.galois import FieldElement, field_arith, field_new, subfield_generated


def test_gf4_default_modulus(gf4):
    # the only irreducible quadratic over GF(2): w^2 + w + 1
    assert gf4.modulus == (1, 1, 1)
    assert gf4.q == 4


def test_gf8_gf9_default_moduli():
    assert field_new(2, 3).modulus == (1, 1, 0, 1)  # w^3 + w + 1
    assert field_new(3, 2).modulus == (1, 0, 1)  # w^2 + 1


def test_not_prime():
    with pytest.raises(NotPrime):
        field_new(4, 1)


def test_reducible_modulus():
    with pytest.raises(Reducible):
        field_new(2, 2, modulus=[1, 0, 1])  # w^2 + 1 = (w+1)^2 over GF(2)


def test_gf4_arithmetic(gf4):
    alpha = 2  # canonical order: 0, 1, alpha, alpha^2
    assert gf4.add(alpha, alpha) == 0  # characteristic 2
    assert gf4.mul(2, 3) == 1  # alpha * alpha^2 = alpha^3 = 1
    assert gf4.add(2, 1) == 3  # alpha + 1 = alpha^2 under w^2+w+1
    with pytest.raises(DivideByZero):
        gf4.inv(0)


def test_field_arith_dispatch(gf4):
    a = gf4.element(2)
    b = gf4.element(3)
    assert field_arith(a, b, "mul").index == 1
    assert field_arith(a, a, "add").index == 0
    assert field_arith(a, None, "inv").index == 3
    assert field_arith(a, None, "neg").index == 2  # -a = a in char 2


def test_canonical_order_powers(gf4):
    # index i >= 1 is alpha^(i-1)
    assert gf4.pow(2, 0) == 1
    assert gf4.pow(2, 1) == 2
    assert gf4.pow(2, 2) == 3
    assert gf4.pow(2, 3) == 1


@pytest.mark.parametrize("p,r", [(2, 1), (2, 2), (3, 1), (2, 3), (3, 2), (2, 4)])
def test_fermat_exhaustive(p, r):
    f = field_new(p, r)
    for a in range(1, f.q):
        assert f.pow(a, f.q - 1) == 1


@pytest.mark.parametrize("p,r", [(2, 2), (3, 1), (2, 3)])
def test_field_axioms_exhaustive(p, r):
    f = field_new(p, r)
    elems = range(f.q)
    for a, b in itertools.product(elems, repeat=2):
        assert f.add(a, b) == f.add(b, a)
        assert f.mul(a, b) == f.mul(b, a)
    for a, b, c in itertools.product(elems, repeat=3):
        assert f.add(f.add(a, b), c) == f.add(a, f.add(b, c))
        assert f.mul(f.mul(a, b), c) == f.mul(a, f.mul(b, c))
        assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))


@given(st.integers(0, 255), st.integers(0, 255), st.integers(0, 255))
def test_field_axioms_random_gf256(a, b, c):
    f = field_new(2, 8)
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    assert f.add(a, f.neg(a)) == 0
    if a != 0:
        assert f.mul(a, f.inv(a)) == 1


def test_subfield_generated(gf4):
    assert subfield_generated([gf4.element(0), gf4.element(1)]) == 2
    assert subfield_generated([gf4.element(2)]) == 4
    f16 = field_new(2, 4)
    # an element of multiplicative order 5 lies outside GF(4) in GF(16);
    # canonical index of alpha^e is e + 1
    beta = f16.element(1 + (f16.q - 1) // 5)
    assert subfield_generated([beta]) == 16


def test_subfield_divides(gf4):
    f16 = field_new(2, 4)
    for idx in range(f16.q):
        d = subfield_generated([f16.element(idx)])
        # d = 2^k with k | 4
        k = d.bit_length() - 1
        assert 2**k == d and 4 % k == 0


def test_log_antilog_roundtrip():
    f = field_new(2, 4)
    seen = set()
    for e in range(f.q - 1):
        enc = f.antilog[e]
        assert enc != 0
        seen.add(enc)
        assert f.log[enc] == e
    assert len(seen) == f.q - 1


def test_serialize(gf4):
    assert gf4.serialize() == {"p": 2, "r": 2, "modulus": [1, 1, 1]}


def test_element_ops(gf4):
    a = gf4.element(2)
    b = gf4.element(3)
    assert (a * b).index == 1
    assert (a + b).index == 1  # alpha + alpha^2 = 1 under w^2+w+1
    assert (a / a).index == 1
    assert isinstance(a, FieldElement)
