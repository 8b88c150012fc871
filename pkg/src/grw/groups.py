"""The concrete groups C_n x Q12, C_n x D12 and their abelian quotients.

Elements are exponent tuples in normal form, in the generator order of the
presentations

    C_n x Q12 = <x, y, z | x^3 = y^4 = z^n = 1, xy = yx^2, z central>
    C_n x D12 = <x, y, z | x^6 = y^2 = z^n = 1, yx = x^5 y, z central>

so (i, j, l) means x^i y^j z^l. In both nonabelian families y inverts x,
which gives the rewriting rule y^j x^a = x^(a * (-1)^j) y^j. The abelian
families are C_n x C4 = <y, z>, C_n x C2 x C2 = <x, y, z> and C_n = <z>.

Enumeration is lexicographic on the tuples, i.e. mixed-radix order, with
the identity first.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from math import gcd, lcm
from typing import Iterable, Sequence

import numpy as np

from .errors import NotNormal, RangeError, SizeBound, UnsupportedCase

Elem = tuple[int, ...]

# family -> (generator names, orders of the non-central generators, twisted?)
_FAMILIES = {
    "Q12": (("x", "y"), (3, 4), True),
    "D12": (("x", "y"), (6, 2), True),
    "C4": (("y",), (4,), False),
    "C2xC2": (("x", "y"), (2, 2), False),
    "Trivial": ((), (), False),
}

FAMILIES = tuple(_FAMILIES)
DEFAULT_MAX_ORDER = 12 * 64
DEFAULT_TABLE_THRESHOLD = 4096


@dataclass(frozen=True)
class GroupSpec:
    family: str
    n: int = 1

    def __post_init__(self):
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}; expected one of {FAMILIES}")
        if self.n < 1:
            raise ValueError("n must be >= 1")


class Group:
    """A member of one of the supported families. Immutable after construction."""

    def __init__(self, spec: GroupSpec, table_threshold: int = DEFAULT_TABLE_THRESHOLD):
        names, orders, twisted = _FAMILIES[spec.family]
        self.spec = spec
        self.gen_names = names + ("z",)
        self.radices = orders + (spec.n,)
        self.twisted = twisted
        self.order = int(np.prod(self.radices))
        self._exps = np.array(np.unravel_index(np.arange(self.order), self.radices)).T.astype(np.int64)
        self.elements: list[Elem] = [tuple(int(v) for v in row) for row in self._exps]
        self.identity: Elem = self.elements[0]
        self.mul_table = self._product_indices(np.arange(self.order)[:, None], np.arange(self.order)[None, :]) \
            if self.order <= table_threshold else None

    def __repr__(self):
        return f"Group({self.spec.family}, n={self.spec.n}, order={self.order})"

    def __eq__(self, other):
        return isinstance(other, Group) and other.spec == self.spec

    def __hash__(self):
        return hash(self.spec)

    # core arithmetic ----------------------------------------------------------
    def _product_indices(self, ia: np.ndarray, ib: np.ndarray) -> np.ndarray:
        """Vectorized rewriting multiplication on element indices."""
        ea = self._exps[ia]
        eb = self._exps[ib]
        prod = (ea + eb) % np.array(self.radices)
        if self.twisted:
            # x^i y^j . x^a y^b = x^(i + a*(-1)^j) y^(j+b)
            sign = 1 - 2 * (ea[..., 1] % 2)
            prod[..., 0] = (ea[..., 0] + sign * eb[..., 0]) % self.radices[0]
        return np.ravel_multi_index(tuple(np.moveaxis(prod, -1, 0)), self.radices)

    def index(self, a: Elem) -> int:
        self.check(a)
        return int(np.ravel_multi_index(a, self.radices))

    def check(self, a: Elem):
        if len(a) != len(self.radices) or any(not 0 <= e < r for e, r in zip(a, self.radices)):
            raise RangeError(f"{a!r} is not a normal-form element of {self!r}")

    def mul(self, a: Elem, b: Elem) -> Elem:
        ia, ib = self.index(a), self.index(b)
        if self.mul_table is not None:
            return self.elements[self.mul_table[ia, ib]]
        return self.elements[int(self._product_indices(np.array(ia), np.array(ib)))]

    def mul_indices(self, ia, ib) -> np.ndarray:
        if self.mul_table is not None:
            return self.mul_table[ia, ib]
        return self._product_indices(np.asarray(ia), np.asarray(ib))

    @cached_property
    def inverse_indices(self) -> np.ndarray:
        inv = np.empty(self.order, dtype=np.int64)
        for i in range(self.order):
            row = self.mul_indices(np.full(self.order, i), np.arange(self.order))
            inv[i] = int(np.nonzero(row == 0)[0][0])
        return inv

    def inv(self, a: Elem) -> Elem:
        return self.elements[self.inverse_indices[self.index(a)]]

    def power(self, a: Elem, m: int) -> Elem:
        if m < 0:
            a, m = self.inv(a), -m
        out, base = self.identity, a
        while m:
            if m & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            m >>= 1
        return out

    def element_order(self, a: Elem) -> int:
        self.check(a)
        m, cur = 1, a
        while cur != self.identity:
            cur = self.mul(cur, a)
            m += 1
        return m

    def gen(self, name: str) -> Elem:
        """Normal form of a named generator."""
        if name not in self.gen_names:
            raise KeyError(f"{self.spec.family} has generators {self.gen_names}")
        i = self.gen_names.index(name)
        return tuple((1 if j == i else 0) % r for j, r in enumerate(self.radices))

    def word(self, **exps: int) -> Elem:
        """Element from generator exponents, e.g. g.word(x=2, y=1)."""
        out = self.identity
        for name in self.gen_names:
            if exps.get(name):
                out = self.mul(out, self.power(self.gen(name), exps[name]))
        return out

    @property
    def generators(self) -> list[Elem]:
        return [self.gen(nm) for nm in self.gen_names if self.radices[self.gen_names.index(nm)] > 1]

    def subgroup(self, gens: Iterable[Elem]) -> list[Elem]:
        """Subgroup generated by gens, in canonical order."""
        members = {0}
        frontier = [0]
        gidx = [self.index(g) for g in gens]
        while frontier:
            new = []
            for a in frontier:
                for g in gidx:
                    b = int(self.mul_indices(a, g))
                    if b not in members:
                        members.add(b)
                        new.append(b)
            frontier = new
        return [self.elements[i] for i in sorted(members)]


def group_make(spec: GroupSpec, max_order: int = DEFAULT_MAX_ORDER,
               table_threshold: int = DEFAULT_TABLE_THRESHOLD) -> Group:
    base = {"Q12": 12, "D12": 12, "C4": 4, "C2xC2": 4, "Trivial": 1}[spec.family]
    if base * spec.n > max_order:
        raise SizeBound(f"group of order {base * spec.n} exceeds bound {max_order}")
    return Group(spec, table_threshold=table_threshold)


def make(family: str, n: int = 1, **kw) -> Group:
    return group_make(GroupSpec(family, n), **kw)


def element_order(g: Group, a: Elem) -> int:
    return g.element_order(a)


@dataclass
class Cosets:
    """Left cosets aK of a normal subgroup K, with quotient multiplication."""

    group: Group
    subgroup: list[Elem]
    cosets: list[list[Elem]]
    coset_of: np.ndarray  # element index -> coset number

    def mul(self, ci: int, cj: int) -> int:
        a = self.group.index(self.cosets[ci][0])
        b = self.group.index(self.cosets[cj][0])
        return int(self.coset_of[self.group.mul_indices(a, b)])

    def __len__(self):
        return len(self.cosets)


def is_normal(g: Group, members: Sequence[Elem]) -> bool:
    ks = {g.index(k) for k in members}
    for s in g.generators:
        si, sinv = g.index(s), int(g.inverse_indices[g.index(s)])
        for k in ks:
            if int(g.mul_indices(g.mul_indices(si, k), sinv)) not in ks:
                return False
    return True


def normal_cosets(g: Group, gens: Iterable[Elem]) -> Cosets:
    members = g.subgroup(gens)
    if not is_normal(g, members):
        raise NotNormal("generated subgroup is not normal")
    kidx = np.array([g.index(k) for k in members])
    coset_of = np.full(g.order, -1, dtype=np.int64)
    cosets = []
    for i in range(g.order):
        if coset_of[i] >= 0:
            continue
        block = g.mul_indices(np.full(len(kidx), i), kidx)
        coset_of[block] = len(cosets)
        cosets.append([g.elements[j] for j in sorted(block.tolist())])
    return Cosets(g, members, cosets, coset_of)


@dataclass
class Quotient:
    """G/K identified with a supported group H.

    proj maps element indices of G to element indices of H; section, when a
    complement exists, maps H indices back to G indices as a homomorphism.
    """

    group: Group
    kernel: list[Elem]
    target: Group
    proj: np.ndarray
    section: np.ndarray | None


def quotient(g: Group, members: Sequence[Elem]) -> Quotient:
    """Identify G/K for the normal subgroups the constructions use:
    trivial K, <x> in Q12, <x^2> in D12, and K inside <z>."""
    if not is_normal(g, members):
        raise NotNormal("subgroup is not normal")
    kset = set(members)
    fam, n = g.spec.family, g.spec.n
    exps = g._exps

    if kset == {g.identity}:
        ident = np.arange(g.order)
        return Quotient(g, list(members), g, ident, ident.copy())

    if fam == "Q12" and kset == set(g.subgroup([g.gen("x")])):
        h = Group(GroupSpec("C4", n))
        proj = np.ravel_multi_index((exps[:, 1], exps[:, 2]), h.radices)
        sec = np.array([g.index((0, j, l)) for (j, l) in h.elements])
        return Quotient(g, list(members), h, proj, sec)

    if fam == "D12" and kset == set(g.subgroup([g.word(x=2)])):
        h = Group(GroupSpec("C2xC2", n))
        proj = np.ravel_multi_index((exps[:, 0] % 2, exps[:, 1], exps[:, 2]), h.radices)
        sec = np.array([g.index((3 * a, b, l)) for (a, b, l) in h.elements])
        return Quotient(g, list(members), h, proj, sec)

    zs = set(g.subgroup([g.gen("z")]))
    if kset <= zs:
        s = n // len(kset)  # K = <z^s>, G/K is the same family with n = s
        h = Group(GroupSpec(fam, s))
        cut = exps.copy()
        cut[:, -1] %= s
        proj = np.ravel_multi_index(tuple(cut.T), h.radices)
        sec = None
        m = n // s
        if gcd(m, s) == 1:
            u = pow(m, -1, s) if s > 1 else 0
            hx = h._exps.copy()
            hx[:, -1] = (m * u * hx[:, -1]) % n
            sec = np.ravel_multi_index(tuple(hx.T), g.radices)
        return Quotient(g, list(members), h, proj, sec)

    raise UnsupportedCase("quotient is not identified with a supported family")


def exponent(g: Group) -> int:
    return lcm(*(g.element_order(a) for a in g.elements))
