import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from algind.field import (FieldError, FieldSpec, find_irreducible, first_primes, is_irreducible,
                          is_prime)


def schoolbook_mul(F, a, b):
    """Digit-list product reduced by the modulus; independent of the log tables."""
    da, db = F.digits(a), F.digits(b)
    prod = [0] * (2 * F.e - 1)
    for i, x in enumerate(da):
        for j, y in enumerate(db):
            prod[i + j] = (prod[i + j] + x * y) % F.p
    mod = F.modulus
    for d in range(len(prod) - 1, F.e - 1, -1):
        c = prod[d]
        if c:
            for i in range(F.e + 1):
                prod[d - F.e + i] = (prod[d - F.e + i] - c * mod[i]) % F.p
    return F.from_digits(prod[:F.e])


def schoolbook_add(F, a, b):
    return F.from_digits([(x + y) % F.p for x, y in zip(F.digits(a), F.digits(b))])


def test_primes():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert first_primes(5) == [2, 3, 5, 7, 11]
    assert first_primes(2, 10) == [11, 13]
    assert is_prime(2**31 - 1)


def test_field_validation():
    with pytest.raises(FieldError):
        FieldSpec(4)
    with pytest.raises(FieldError):
        FieldSpec(2**31 + 11)
    with pytest.raises(FieldError):
        FieldSpec(3, 0)
    with pytest.raises(FieldError):
        FieldSpec(2, 21)
    with pytest.raises(FieldError):
        FieldSpec(3, 2, (1, 0, 1, 0))
    with pytest.raises(FieldError):
        FieldSpec(3, 2, (2, 0, 1))  # x^2 + 2 = (x+1)(x+2)
    assert FieldSpec(3, 2, (1, 0, 1)).q == 9


def brute_irreducible(mod, p):
    e = len(mod) - 1
    for d in range(1, e // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            g = list(low) + [1]
            # long division of mod by g
            r = list(mod)
            for i in range(len(r) - 1, d - 1, -1):
                c = r[i]
                if c:
                    for j in range(d + 1):
                        r[i - d + j] = (r[i - d + j] - c * g[j]) % p
            if not any(r[:d]):
                return False
    return True


@pytest.mark.parametrize("p,e", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_irreducibility_exhaustive(p, e):
    for low in itertools.product(range(p), repeat=e):
        mod = tuple(low) + (1,)
        assert is_irreducible(mod, p) == brute_irreducible(mod, p)
    assert is_irreducible(find_irreducible(p, e), p)


def test_extension_at_least():
    F = FieldSpec.extension_at_least(3, 2**16)
    assert F.q >= 2**16 and 3 ** (F.e - 1) < 2**16
    assert FieldSpec.extension_at_least(7, 5).e == 1


@pytest.mark.parametrize("p,e", [(2, 4), (3, 2), (3, 4), (5, 2), (7, 1)])
def test_exhaustive_arithmetic(p, e):
    F = FieldSpec(p, e)
    q = F.q
    for a in range(q):
        if a:
            assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0
        for b in range(q):
            assert F.mul(a, b) == schoolbook_mul(F, a, b)
            assert F.add(a, b) == schoolbook_add(F, a, b)
    if q <= 16:
        for a, b, c in itertools.product(range(q), repeat=3):
            assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
            assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
            assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 3**9 - 1), st.integers(0, 3**9 - 1), st.integers(0, 50))
def test_large_extension_against_schoolbook(a, b, n):
    F = FieldSpec(3, 9)
    assert F.mul(a, b) == schoolbook_mul(F, a, b)
    expect = 1
    for _ in range(n):
        expect = schoolbook_mul(F, expect, a)
    assert F.pow(a, n) == expect


def test_vector_ops_match_scalar():
    rng = np.random.default_rng(1)
    for F in (FieldSpec(7), FieldSpec(2, 6), FieldSpec(3, 5)):
        a = rng.integers(0, F.q, 300)
        b = rng.integers(0, F.q, 300)
        assert list(F.vadd(a, b)) == [F.add(int(x), int(y)) for x, y in zip(a, b)]
        assert list(F.vsub(a, b)) == [F.sub(int(x), int(y)) for x, y in zip(a, b)]
        assert list(F.vmul(a, b)) == [F.mul(int(x), int(y)) for x, y in zip(a, b)]
        assert list(F.vneg(a)) == [F.neg(int(x)) for x in a]
        for n in (0, 1, 5, 17):
            assert list(F.vpow(a, n)) == [F.pow(int(x), n) for x in a]


def test_field_elements():
    F = FieldSpec(5)
    a, b = F(3), F(4)
    assert a + b == F(2) and a * b == F(2) and a - b == F(4)
    assert a / b * b == a and (a ** 4) == F(1) and a.inverse() * a == F(1)
    assert a + 7 == F(0) and int(F(12)) == 2 and not F(0)
    E = FieldSpec(2, 3)
    x = E([0, 1])
    assert x ** 7 == E(1)
    with pytest.raises(ZeroDivisionError):
        F(0).inverse()
