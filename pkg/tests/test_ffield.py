from __future__ import annotations

from itertools import product
from math import gcd

import numpy as np
import pytest
from hypothesis import given, strategies as st

from grw import errors
from grw.ffield import (FieldElem, divisors, euler_totient, factorize, field_make, is_irreducible,
                        is_prime, least_irreducible, mult_order, prime_power, split_coprime)

SMALL_FIELDS = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (5, 2), (7, 1), (3, 4)]


def test_prime_fields():
    f = field_make(2, 1)
    assert f.q == 2 and f.k == 1
    assert f.one + f.one == f.zero
    f3 = field_make(3, 1)
    assert f3.elem(2).inv() == f3.elem(2)


def test_gf9_and_gf125_orders():
    f9 = field_make(3, 2)
    assert f9.q == 9
    nonzero = [a for a in f9.elements() if a]
    assert len(nonzero) == 8 and all(a**8 == f9.one for a in nonzero)
    f125 = field_make(5, 3)
    assert all(a**124 == f125.one for a in f125.elements() if a)


def test_modulus_is_least_irreducible():
    # x^2 + 1 is reducible mod 2, x^2 + x + 1 is the least irreducible quadratic
    assert least_irreducible(2, 2) == (1, 1, 1)
    # over GF(3): x^2 + 1 is irreducible and least
    assert least_irreducible(3, 2) == (1, 0, 1)
    for p, k in SMALL_FIELDS:
        f = field_make(p, k)
        assert is_irreducible(f.modulus, p)
        assert len(f.modulus) == k + 1 and f.modulus[-1] == 1


def test_field_make_errors():
    with pytest.raises(errors.NotPrime):
        field_make(4, 1)
    with pytest.raises(errors.DegreeZero):
        field_make(3, 0)
    with pytest.raises(errors.SizeBound):
        field_make(2, 40)


def test_op_errors():
    f, g = field_make(3, 1), field_make(5, 1)
    with pytest.raises(errors.ZeroInverse):
        f.zero.inv()
    with pytest.raises(ZeroDivisionError):
        f.one / f.zero
    with pytest.raises(errors.CtxMismatch):
        f.one + g.one


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_field_axioms_exhaustive(p, k):
    f = field_make(p, k)
    els = list(f.elements())
    assert len(els) == f.q and len(set(els)) == f.q
    inv = {a: a.inv() for a in els if a}
    assert all(a * b == f.one for a, b in inv.items())
    assert len(set(inv.values())) == f.q - 1  # inversion is a bijection
    if f.q <= 27:
        for a, b in product(els, repeat=2):
            assert (a + b) ** p == a**p + b**p  # Frobenius
            assert a * b == b * a


@given(st.sampled_from(SMALL_FIELDS), st.data())
def test_ring_axioms_random(pk, data):
    f = field_make(*pk)
    a, b, c = (f.from_index(data.draw(st.integers(0, f.q - 1))) for _ in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == f.zero and a + f.zero == a and a * f.one == a


def test_mult_order_examples():
    assert mult_order(7, 2) == 3
    assert mult_order(2, 9) == 1
    assert mult_order(4, 3) == 2
    with pytest.raises(errors.NotCoprime):
        mult_order(6, 3)
    with pytest.raises(errors.BadModulus):
        mult_order(1, 3)


@given(st.integers(2, 10_000), st.integers(2, 10_000))
def test_mult_order_divides_totient(l, q):
    if gcd(l, q) != 1:
        return
    d = mult_order(l, q)
    assert pow(q, d, l) == 1 and euler_totient(l) % d == 0
    assert all(pow(q, e, l) != 1 for e in range(1, d))


def test_totient():
    assert euler_totient(1) == 1 and euler_totient(7) == 6
    assert euler_totient(12) == sum(1 for i in range(12) if gcd(i, 12) == 1)


@given(st.integers(1, 5000))
def test_number_theory_helpers(n):
    assert divisors(n) == [d for d in range(1, n + 1) if n % d == 0]
    assert euler_totient(n) == sum(1 for i in range(1, n + 1) if gcd(i, n) == 1)
    prod = 1
    for p, e in factorize(n):
        assert is_prime(p)
        prod *= p**e
    assert prod == n
    r, s = split_coprime(n, 3)
    assert 3**r * s == n and s % 3


def test_prime_power():
    assert prime_power(81) == (3, 4)
    with pytest.raises(errors.NotPrime):
        prime_power(12)


def test_mul_tensor_matches_elements():
    f = field_make(3, 2)
    for a, b in product(f.elements(), repeat=2):
        m = sum(int(a.coeffs[i]) * f.mul_tensor[i] for i in range(f.k)) % 3
        assert tuple(m @ np.asarray(b.coeffs) % 3) == tuple((a * b).coeffs)
    assert isinstance(f.gen, FieldElem)
