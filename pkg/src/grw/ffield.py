"""Finite fields GF(p^k) in polynomial-residue form, plus the elementary
number theory (multiplicative order, totient, divisors) used by the
decomposition formulas."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd
from typing import Iterator, Sequence

import numpy as np

from .errors import BadModulus, CtxMismatch, DegreeZero, NotCoprime, NotPrime, SizeBound, ZeroInverse

DEFAULT_MAX_ORDER = 1 << 20


# -- number theory ----------------------------------------------------------

def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


@lru_cache(maxsize=4096)
def factorize(n: int) -> tuple[tuple[int, int], ...]:
    """Prime factorization of n >= 1 by trial division, as ((p, e), ...)."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            e = 0
            while n % f == 0:
                n //= f
                e += 1
            out.append((f, e))
        f += 1 if f == 2 else 2
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def divisors(n: int) -> list[int]:
    """All positive divisors of n, ascending."""
    divs = [1]
    for p, e in factorize(n):
        divs = [d * p**i for d in divs for i in range(e + 1)]
    return sorted(divs)


def euler_totient(l: int) -> int:
    if l < 1:
        raise ValueError(f"totient undefined for {l}")
    phi = l
    for p, _ in factorize(l):
        phi = phi // p * (p - 1)
    return phi


def mult_order(l: int, q: int) -> int:
    """Least d >= 1 with q^d = 1 (mod l)."""
    if l < 2:
        raise BadModulus(f"modulus must be >= 2, got {l}")
    if gcd(l, q) != 1:
        raise NotCoprime(f"gcd({l}, {q}) != 1")
    for d in divisors(euler_totient(l)):
        if pow(q, d, l) == 1:
            return d
    raise AssertionError("unreachable: order divides the totient")


def prime_power(q: int) -> tuple[int, int]:
    """Split a prime power q = p^k into (p, k)."""
    fs = factorize(q) if q > 1 else ()
    if len(fs) != 1:
        raise NotPrime(f"{q} is not a prime power")
    return fs[0]


def split_coprime(n: int, p: int) -> tuple[int, int]:
    """Write n = p^r * s with p not dividing s; return (r, s)."""
    r = 0
    while n % p == 0:
        n //= p
        r += 1
    return r, n


# -- polynomials over Z/p, coefficient lists low-to-high -----------------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _polymod(a: Sequence[int], m: Sequence[int], p: int) -> list[int]:
    a = _trim(list(a))
    dm = len(m) - 1
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) - 1 >= dm:
        c = a[-1] * inv_lead % p
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    deg = len(poly) - 1
    for d in range(1, deg // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            if not _polymod(poly, list(low) + [1], p):
                return False
    return True


def least_irreducible(p: int, degree: int) -> tuple[int, ...]:
    # coefficient tuples compared low-to-high, constant term most significant
    for low in itertools.product(range(p), repeat=degree):
        poly = tuple(low) + (1,)
        if is_irreducible(poly, p):
            return poly
    raise AssertionError(f"no irreducible polynomial of degree {degree} over GF({p})")


# -- fields ---------------------------------------------------------------------

@dataclass(frozen=True)
class FieldCtx:
    """GF(p^k) = Z/p[t]/(modulus). Immutable and safe to share."""

    p: int
    k: int
    modulus: tuple[int, ...]
    q: int = field(init=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p**self.k)

    def __repr__(self):
        return f"GF({self.p}^{self.k})" if self.k > 1 else f"GF({self.p})"

    # element constructors
    def elem(self, value) -> FieldElem:
        """Build an element from an int (prime-field value), a coefficient
        sequence, or pass an existing element through."""
        if isinstance(value, FieldElem):
            self._check(value)
            return value
        if isinstance(value, (int, np.integer)):
            coeffs = [int(value) % self.p] + [0] * (self.k - 1)
        else:
            coeffs = [int(c) % self.p for c in value]
            if len(coeffs) != self.k:
                raise ValueError(f"expected {self.k} coefficients, got {len(coeffs)}")
        return FieldElem(self, tuple(coeffs))

    def from_index(self, i: int) -> FieldElem:
        """Element whose coefficients are the base-p digits of i."""
        digits = []
        for _ in range(self.k):
            i, d = divmod(i, self.p)
            digits.append(d)
        return FieldElem(self, tuple(digits))

    @property
    def zero(self) -> FieldElem:
        return FieldElem(self, (0,) * self.k)

    @property
    def one(self) -> FieldElem:
        return FieldElem(self, (1,) + (0,) * (self.k - 1))

    @property
    def gen(self) -> FieldElem:
        """The residue class of t (a primitive element is not guaranteed)."""
        if self.k == 1:
            return self.elem(-self.modulus[0])
        return FieldElem(self, (0, 1) + (0,) * (self.k - 2))

    def elements(self) -> Iterator[FieldElem]:
        for i in range(self.q):
            yield self.from_index(i)

    def extension(self, d: int, max_order: int = DEFAULT_MAX_ORDER) -> FieldCtx:
        """The degree-d extension, i.e. GF(p^(k*d))."""
        return field_make(self.p, self.k * d, max_order=max_order)

    @cached_property
    def mul_tensor(self) -> np.ndarray:
        """mul_tensor[a] is the k x k matrix of multiplication by t^a on
        coefficient vectors."""
        k, p = self.k, self.p
        out = np.zeros((k, k, k), dtype=np.int64)
        for a in range(k):
            for b in range(k):
                prod = [0] * (a + b) + [1]
                red = _polymod(prod, self.modulus, p) if k > 1 else [1]
                for c, v in enumerate(red):
                    out[a, c, b] = v
        return out

    def _check(self, a: FieldElem):
        if a.ctx is not self and a.ctx != self:
            raise CtxMismatch(f"{a!r} is not in {self!r}")


def field_make(p: int, degree: int, max_order: int = DEFAULT_MAX_ORDER) -> FieldCtx:
    if not (isinstance(p, int) and p < 2**31 and is_prime(p)):
        raise NotPrime(f"{p} is not a prime below 2^31")
    if degree < 1:
        raise DegreeZero("field degree must be >= 1")
    if p**degree > max_order:
        raise SizeBound(f"GF({p}^{degree}) exceeds the size bound {max_order}")
    return _field_cached(p, degree)


@lru_cache(maxsize=None)
def _field_cached(p: int, degree: int) -> FieldCtx:
    return FieldCtx(p, degree, least_irreducible(p, degree))


@dataclass(frozen=True, eq=True)
class FieldElem:
    ctx: FieldCtx
    coeffs: tuple[int, ...]

    def _other(self, b) -> FieldElem:
        if isinstance(b, FieldElem):
            self.ctx._check(b)
            return b
        return self.ctx.elem(b)

    def __add__(self, b):
        b = self._other(b)
        p = self.ctx.p
        return FieldElem(self.ctx, tuple((x + y) % p for x, y in zip(self.coeffs, b.coeffs)))

    __radd__ = __add__

    def __neg__(self):
        p = self.ctx.p
        return FieldElem(self.ctx, tuple(-x % p for x in self.coeffs))

    def __sub__(self, b):
        return self + (-self._other(b))

    def __rsub__(self, b):
        return self._other(b) - self

    def __mul__(self, b):
        b = self._other(b)
        ctx, p = self.ctx, self.ctx.p
        if ctx.k == 1:
            return FieldElem(ctx, (self.coeffs[0] * b.coeffs[0] % p,))
        prod = [0] * (2 * ctx.k - 1)
        for i, x in enumerate(self.coeffs):
            if x:
                for j, y in enumerate(b.coeffs):
                    prod[i + j] += x * y
        red = _polymod([c % p for c in prod], ctx.modulus, p)
        return FieldElem(ctx, tuple(red + [0] * (ctx.k - len(red))))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        if e < 0:
            return self.inv() ** (-e)
        result, base = self.ctx.one, self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def inv(self) -> FieldElem:
        if not self:
            raise ZeroInverse("zero has no inverse")
        return self ** (self.ctx.q - 2)

    def __truediv__(self, b):
        return self * self._other(b).inv()

    def __bool__(self):
        return any(self.coeffs)

    def __int__(self):
        """Index of the element: coefficients read as base-p digits."""
        out = 0
        for c in reversed(self.coeffs):
            out = out * self.ctx.p + c
        return out

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.k, self.coeffs))

    def __repr__(self):
        if self.ctx.k == 1:
            return str(self.coeffs[0])
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("t" if i == 1 else f"t^{i}")
                terms.append(f"{c}" if not mono else (mono if c == 1 else f"{c}{mono}"))
        return "+".join(terms) or "0"
