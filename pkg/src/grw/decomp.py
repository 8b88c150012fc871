"""Wedderburn decompositions of the semisimple algebras that occur:
FC_n (n prime to p), FC_4, FQ12, FD12, and F(C_s x Q12), F(C_s x D12)
modulo their radicals."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .errors import EvenCharacteristic, NotCoprime, SmallCharacteristic
from .ffield import divisors, euler_totient, mult_order, prime_power, split_coprime


@dataclass(frozen=True, order=True)
class SimpleComponent:
    """The full matrix algebra M(m, F_d), F_d the degree-d extension of F."""

    m: int
    d: int

    @property
    def dim(self) -> int:
        return self.m * self.m * self.d

    def unit_order(self, q: int) -> int:
        """|GL(m, q^d)|."""
        qq = q**self.d
        out = 1
        for i in range(self.m):
            out *= qq**self.m - qq**i
        return out


@dataclass(frozen=True)
class Decomposition:
    q: int
    components: tuple[tuple[SimpleComponent, int], ...]
    algebra: str = ""
    radical_dim: int = 0

    @classmethod
    def build(cls, q, parts, algebra="", radical_dim=0) -> Decomposition:
        merged: Counter = Counter()
        for comp, e in parts:
            merged[comp] += e
        comps = tuple(sorted((c, e) for c, e in merged.items() if e))
        return cls(q, comps, algebra, radical_dim)

    @property
    def semisimple_dim(self) -> int:
        return sum(c.dim * e for c, e in self.components)

    @property
    def dim(self) -> int:
        return self.semisimple_dim + self.radical_dim

    def as_counter(self) -> Counter:
        return Counter({c: e for c, e in self.components})

    def same_components(self, other: Decomposition) -> bool:
        return self.q == other.q and self.as_counter() == other.as_counter()

    def unit_order(self) -> int:
        """Order of the unit group of the semisimple part."""
        out = 1
        for c, e in self.components:
            out *= c.unit_order(self.q) ** e
        return out

    def scaled(self, d: int) -> list[tuple[SimpleComponent, int]]:
        """Components re-expressed over a base field d times smaller."""
        return [(SimpleComponent(c.m, c.d * d), e) for c, e in self.components]

    def render(self) -> str:
        terms = []
        for c, e in self.components:
            fld = "F" if c.d == 1 else f"F_{c.d}"
            base = fld if c.m == 1 else f"M({c.m}, {fld})"
            terms.append(base if e == 1 else f"{base}^{e}")
        return " + ".join(terms) or "0"

    def to_json(self) -> dict:
        return {
            "q": self.q,
            "algebra": self.algebra,
            "components": [{"m": c.m, "d": c.d, "e": e} for c, e in self.components],
            "radical_dim": self.radical_dim,
        }


def _char(q: int) -> int:
    return prime_power(q)[0]


def cyclic_decompose(n: int, q: int) -> Decomposition:
    """FC_n = F + sum over l | n, l > 1 of F_{d_l}^{e_l}, d_l = ord_l(q),
    e_l = phi(l)/d_l."""
    if n % _char(q) == 0:
        raise NotCoprime(f"{n} is divisible by the characteristic of GF({q})")
    parts = [(SimpleComponent(1, 1), 1)]
    for l in divisors(n)[1:]:
        d = mult_order(l, q)
        parts.append((SimpleComponent(1, d), euler_totient(l) // d))
    return Decomposition.build(q, parts, algebra=f"FC_{n}")


def fc4_decompose(q: int) -> Decomposition:
    if _char(q) == 2:
        raise EvenCharacteristic("FC_4 is not semisimple in characteristic 2")
    if q % 4 == 1:
        parts = [(SimpleComponent(1, 1), 4)]
    else:
        parts = [(SimpleComponent(1, 1), 2), (SimpleComponent(1, 2), 1)]
    return Decomposition.build(q, parts, algebra="FC_4")


def _need_large_char(q: int):
    if _char(q) <= 3:
        raise SmallCharacteristic(f"GF({q}): characteristic divides 12, not semisimple")


def fq12_decompose(q: int) -> Decomposition:
    _need_large_char(q)
    if q % 12 in (1, 5):
        parts = [(SimpleComponent(1, 1), 4), (SimpleComponent(2, 1), 2)]
    else:
        parts = [(SimpleComponent(1, 1), 2), (SimpleComponent(1, 2), 1), (SimpleComponent(2, 1), 2)]
    return Decomposition.build(q, parts, algebra="FQ12")


def fd12_decompose(q: int) -> Decomposition:
    _need_large_char(q)
    return Decomposition.build(q, [(SimpleComponent(1, 1), 4), (SimpleComponent(2, 1), 2)], algebra="FD12")


_BLOCKS = {"Q12": fq12_decompose, "D12": fd12_decompose}


def product_decompose(family: str, p: int, k: int, n: int) -> Decomposition:
    """F(C_n x G)/J for G = Q12 or D12, p > 3.

    Writing n = p^r s, the radical is the kernel of the collapse onto
    F(C_s x G), of dimension 12 s (p^r - 1); the quotient splits over the
    cyclic components F_{d_l} of FC_s, each contributing the decomposition
    of F_{d_l} G, evaluated at q^{d_l}.
    """
    if family not in _BLOCKS:
        raise ValueError(f"family must be Q12 or D12, got {family!r}")
    if p <= 3:
        raise SmallCharacteristic(f"p = {p} divides |G|; use the char 2/3 theorems")
    q = p**k
    r, s = split_coprime(n, p)
    block = _BLOCKS[family]
    parts = []
    for comp, e in cyclic_decompose(s, q).components:
        sub = block(q**comp.d)
        parts += [(c, mult * e) for c, mult in sub.scaled(comp.d)]
    return Decomposition.build(q, parts, algebra=f"F(C_{n} x {family})",
                               radical_dim=12 * s * (p**r - 1))
