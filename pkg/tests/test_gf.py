import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from avcodes.errors import DivisionByZero, FieldTooLarge, MixedFields, NonPrimeCharacteristic
from avcodes.gf import arith, canonical_modulus, field_new, is_prime, parse_field

SMALL = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (2, 5), (7, 2), (2, 6), (3, 3)]


def poly_mulmod(a, b, mod, p):
    """Schoolbook oracle: coefficient lists, low degree first, monic modulus."""
    prod = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            prod[i + j] = (prod[i + j] + x * y) % p
    e = len(mod) - 1
    for d in range(len(prod) - 1, e - 1, -1):
        c = prod[d]
        if c:
            for k in range(e + 1):
                prod[d - e + k] = (prod[d - e + k] - c * mod[k]) % p
    return (prod + [0] * e)[:e]


def digits(v, p, e):
    return [(v // p**j) % p for j in range(e)]


def undigits(d, p):
    return sum(c * p**j for j, c in enumerate(d))


def irreducible_bruteforce(mod, p):
    # no monic factor of degree 1..e-1: test every monic polynomial as a divisor
    e = len(mod) - 1
    for d in range(1, e):
        for low in itertools.product(range(p), repeat=d):
            g = list(low) + [1]
            r = list(mod)
            for k in range(len(r) - 1, d - 1, -1):
                c = r[k]
                if c:
                    for j in range(d + 1):
                        r[k - d + j] = (r[k - d + j] - c * g[j]) % p
            if not any(r[:d]):
                return False
    return True


def test_prime_field_order():
    assert field_new(7, 1).q == 7


def test_gf8_modulus_is_x3_x_1():
    assert field_new(2, 3).modulus == (1, 1, 0, 1)


def test_non_prime_characteristic():
    with pytest.raises(NonPrimeCharacteristic):
        field_new(4, 1)


def test_too_large():
    with pytest.raises(FieldTooLarge):
        field_new(2, 17)


@pytest.mark.parametrize("p,e", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (2, 6)])
def test_canonical_modulus_is_smallest_irreducible(p, e):
    mod = canonical_modulus(p, e)
    assert mod[-1] == 1 and irreducible_bruteforce(list(mod), p)
    code = undigits(mod[:-1], p)
    for smaller in range(code):
        cand = digits(smaller, p, e) + [1]
        assert not irreducible_bruteforce(cand, p)


def test_small_examples():
    f5, f7, f8 = field_new(5), field_new(7), field_new(2, 3)
    assert f5.add(3, 4) == 2
    assert f7.div(1, 3) == 5
    assert f8.mul(2, f8.mul(2, 2)) == 3
    assert [int(x) for x in field_new(2).elements()] == [0, 1]
    assert [int(x) for x in f5.elements()] == [0, 1, 2, 3, 4]
    assert len({int(x) for x in f8.elements()}) == 8


@pytest.mark.parametrize("p,e", SMALL)
def test_mul_matches_polynomial_oracle(p, e):
    f = field_new(p, e)
    for a in range(f.q):
        for b in range(f.q):
            want = undigits(poly_mulmod(digits(a, p, e), digits(b, p, e), f.modulus, p), p) if e > 1 else a * b % p
            assert f.mul(a, b) == want


@pytest.mark.parametrize("p,e", SMALL)
def test_field_axioms_exhaustive(p, e):
    f = field_new(p, e)
    x = np.arange(f.q)
    a, b = x[:, None], x[None, :]
    add, mul = f.vadd(a, b), f.vmul(a, b)
    assert (add == add.T).all() and (mul == mul.T).all()
    for c in range(f.q):
        # associativity and distributivity, one slice per c
        assert (f.vadd(add, c) == f.vadd(a, f.vadd(b, c))).all()
        assert (f.vmul(mul, c) == f.vmul(a, f.vmul(b, c))).all()
        assert (f.vmul(a, f.vadd(b, c)) == f.vadd(mul, f.vmul(a, c))).all()
    nz = x[1:]
    assert (f.vmul(nz, f.vinv(nz)) == 1).all()
    assert (f.vsub(add, b) == a).all()
    frob = f.vpow(add, p)
    assert (frob == f.vadd(f.vpow(a, p), f.vpow(b, p))).all()


@pytest.mark.parametrize("p,e", SMALL)
def test_scalar_and_vector_agree(p, e):
    f = field_new(p, e)
    for a in range(f.q):
        assert f.neg(a) == int(f.vneg(np.array([a]))[0])
        for k in (0, 1, 2, 5, f.q - 1, f.q):
            assert f.pow(a, k) == int(f.vpow(np.array([a]), k)[0])
        if a:
            assert f.inv(a) == int(f.vinv(np.array([a]))[0])


def test_division_by_zero():
    f = field_new(5)
    with pytest.raises(DivisionByZero):
        f.inv(0)
    with pytest.raises(DivisionByZero):
        f(1) / f(0)


def test_field_elem_and_mixed_fields():
    f, g = field_new(5), field_new(7)
    assert int(arith(f(3), f(4), "add")) == 2
    assert int(arith(f(1), f(3), "div")) == 2
    with pytest.raises(MixedFields):
        f(1) + g(1)


def test_parse_field():
    assert parse_field("2,7").q == 128
    assert parse_field("5").q == 5
    with pytest.raises(ValueError):
        parse_field("x")


def test_is_prime():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([(2, 7), (3, 5), (2, 16), (251, 1), (251, 2)]), st.data())
def test_large_field_inverse_and_distributivity(pe, data):
    f = field_new(*pe)
    a, b, c = (data.draw(st.integers(0, f.q - 1)) for _ in range(3))
    assert f.mul(a, f.add(b, c)) == f.add(f.mul(a, b), f.mul(a, c))
    if a:
        assert f.mul(a, f.inv(a)) == 1
