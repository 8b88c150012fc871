"""Closed-form unit-group structures.

A structure descriptor is a small expression tree over cyclic and general
linear atoms. Semidirect products record their two factors only; the
action is never specified.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import lcm, prod
from typing import Union

from . import decomp
from .errors import EvenCharacteristic, NotPrime, UnsupportedCase
from .ffield import divisors, euler_totient, factorize, is_prime, mult_order, split_coprime


# -- descriptor tree -------------------------------------------------------------

@dataclass(frozen=True)
class Cyclic:
    m: int
    asserted_exponent: int | None = field(default=None, kw_only=True)


@dataclass(frozen=True)
class GL:
    deg: int
    q: int
    asserted_exponent: int | None = field(default=None, kw_only=True)


@dataclass(frozen=True)
class Direct:
    factors: tuple
    asserted_exponent: int | None = field(default=None, kw_only=True)


@dataclass(frozen=True)
class Semidirect:
    normal: "Descriptor"
    acting: "Descriptor"
    asserted_exponent: int | None = field(default=None, kw_only=True)


@dataclass(frozen=True)
class Power:
    base: "Descriptor"
    e: int
    asserted_exponent: int | None = field(default=None, kw_only=True)

    def __post_init__(self):
        if self.e < 0:
            raise ValueError("power exponent must be >= 0")


Descriptor = Union[Cyclic, GL, Direct, Semidirect, Power]


def direct(*factors) -> Direct:
    return Direct(tuple(factors))


def gl_order(deg: int, q: int) -> int:
    return prod(q**deg - q**i for i in range(deg))


def order(d: Descriptor) -> int:
    if isinstance(d, Cyclic):
        return d.m
    if isinstance(d, GL):
        return gl_order(d.deg, d.q)
    if isinstance(d, Direct):
        return prod(order(f) for f in d.factors)
    if isinstance(d, Semidirect):
        return order(d.normal) * order(d.acting)
    if isinstance(d, Power):
        return order(d.base) ** d.e
    raise TypeError(d)


def _cyclic_divisors(d: Descriptor) -> Counter | None:
    """Elementary divisors (prime power -> multiplicity), or None if d is not
    a direct product of cyclic groups."""
    if isinstance(d, Cyclic):
        return Counter({p**e: 1 for p, e in factorize(d.m)}) if d.m > 1 else Counter()
    if isinstance(d, Direct):
        out: Counter = Counter()
        for f in d.factors:
            sub = _cyclic_divisors(f)
            if sub is None:
                return None
            out.update(sub)
        return out
    if isinstance(d, Power):
        sub = _cyclic_divisors(d.base)
        if sub is None:
            return None
        return Counter({k: v * d.e for k, v in sub.items() if v * d.e})
    return None


@dataclass(frozen=True)
class DescriptorEval:
    order: int
    is_abelian: bool
    elementary_divisors: Counter | None
    exponent: int | None

    @property
    def abelian_invariants(self) -> list[int] | None:
        if self.elementary_divisors is None:
            return None
        return sorted(self.elementary_divisors.elements())


def descriptor_eval(d: Descriptor) -> DescriptorEval:
    divs = _cyclic_divisors(d)
    if divs is not None:
        exp = lcm(*divs) if divs else 1
        return DescriptorEval(order(d), True, divs, exp)
    return DescriptorEval(order(d), False, None, d.asserted_exponent)


def render(d: Descriptor, unicode: bool = False) -> str:
    """Text form in the theorems' notation; ASCII uses 'x' and '|x'."""
    times, semi = (" × ", " ⋊ ") if unicode else (" x ", " |x ")

    def atom(x) -> bool:
        return isinstance(x, (Cyclic, GL)) or (isinstance(x, Power) and isinstance(x.base, (Cyclic, GL)))

    def go(x, top=False) -> str:
        if isinstance(x, Cyclic):
            return f"C_{x.m}"
        if isinstance(x, GL):
            return f"GL({x.deg}, F_{x.q})"
        if isinstance(x, Power):
            if x.e == 1:
                return go(x.base, top)
            inner = go(x.base)
            return f"{inner}^{x.e}" if atom(x.base) else f"({inner})^{x.e}"
        if isinstance(x, Direct):
            if not x.factors:
                return "1"
            if len(x.factors) == 1:
                return go(x.factors[0], top)
            s = times.join(go(f) for f in x.factors)
        else:
            s = go(x.normal) + semi + go(x.acting)
        return s if top else f"({s})"

    return go(d, top=True)


def to_json(d: Descriptor) -> dict:
    if isinstance(d, Cyclic):
        out = {"type": "cyclic", "m": d.m}
    elif isinstance(d, GL):
        out = {"type": "gl", "degree": d.deg, "q": d.q}
    elif isinstance(d, Direct):
        out = {"type": "prod", "factors": [to_json(f) for f in d.factors]}
    elif isinstance(d, Semidirect):
        out = {"type": "semidirect", "normal": to_json(d.normal), "acting": to_json(d.acting)}
    else:
        out = {"type": "power", "base": to_json(d.base), "exponent": d.e}
    if d.asserted_exponent is not None:
        out["asserted_exponent"] = d.asserted_exponent
    return out


def from_json(data: dict) -> Descriptor:
    ae = {"asserted_exponent": data.get("asserted_exponent")}
    t = data["type"]
    if t == "cyclic":
        return Cyclic(data["m"], **ae)
    if t == "gl":
        return GL(data["degree"], data["q"], **ae)
    if t == "prod":
        return Direct(tuple(from_json(f) for f in data["factors"]), **ae)
    if t == "semidirect":
        return Semidirect(from_json(data["normal"]), from_json(data["acting"]), **ae)
    if t == "power":
        return Power(from_json(data["base"]), data["exponent"], **ae)
    raise ValueError(f"unknown descriptor type {t!r}")


# -- inputs -------------------------------------------------------------------------

@dataclass(frozen=True)
class CaseInput:
    p: int
    k: int
    n: int

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrime(f"{self.p} is not prime")
        if self.k < 1 or self.n < 1:
            raise ValueError("k and n must be positive")

    @property
    def q(self) -> int:
        return self.p**self.k

    @property
    def r(self) -> int:
        return split_coprime(self.n, self.p)[0]

    @property
    def s(self) -> int:
        return split_coprime(self.n, self.p)[1]


@dataclass(frozen=True)
class VPart:
    """Order and exponent of V = 1 + J(FG) when reported separately."""

    order: int
    exponent: int


@dataclass(frozen=True)
class UnitStructure:
    descriptor: Descriptor
    v_part: VPart | None = None

    @property
    def order(self) -> int:
        """|U(FG)|, including V when it is reported separately."""
        return order(self.descriptor) * (self.v_part.order if self.v_part else 1)

    def render(self, unicode: bool = False) -> str:
        return render(self.descriptor, unicode)


def _cyc_components(n: int, q: int) -> list[tuple[int, int, int]]:
    """(l, d_l, e_l) for the divisors l > 1 of n."""
    out = []
    for l in divisors(n)[1:]:
        d = mult_order(l, q)
        out.append((l, d, euler_totient(l) // d))
    return out


def _pw(base, e) -> Power:
    return Power(base, e)


# -- cyclic and elementary abelian building blocks --------------------------------------

def cyclic_ppower_units(p: int, k: int, n: int) -> Descriptor:
    """U(F C_{p^n}) for |F| = p^k: the product over s of C_{p^s}^{h_s}, times
    C_{p^k - 1}, with h_n = k(p-1) and h_s = k p^(n-s-1) (p-1)^2."""
    if n < 1:
        raise ValueError("n must be >= 1")
    factors = []
    for s in range(1, n + 1):
        h = k * (p - 1) if s == n else k * p ** (n - s - 1) * (p - 1) ** 2
        factors.append(_pw(Cyclic(p**s), h))
    factors.append(Cyclic(p**k - 1))
    return Direct(tuple(factors))


def elem_abelian2_units(q: int, n: int) -> Descriptor:
    """U(F C_2^n) = C_{q-1}^(2^n) in odd characteristic."""
    if q % 2 == 0:
        raise EvenCharacteristic("C_2^n algebra is not semisimple in characteristic 2")
    return _pw(Cyclic(q - 1), 2**n)


def cyclic_units(p: int, k: int, n: int) -> Descriptor:
    """U(F C_n) for arbitrary n: split off the p-part of n, then apply the
    p-power formula over each cyclic component of F C_s."""
    q = p**k
    r, s = split_coprime(n, p)
    comps = [(1, 1)] + [(d, e) for _, d, e in _cyc_components(s, q)]
    factors = []
    for d, e in comps:
        block = cyclic_ppower_units(p, k * d, r) if r else Cyclic(q**d - 1)
        factors.append(_pw(block, e) if e != 1 else block)
    return Direct(tuple(factors))


def _ppart_multiplicities(k: int, r: int) -> list[int]:
    """n_t for t = 1..r in characteristic 3: n_r = 2k, n_t = 4 * 3^(r-t-1) k."""
    return [2 * k if t == r else 4 * 3 ** (r - t - 1) * k for t in range(1, r + 1)]


def aux_structure_char3(k: int, n: int, kind: str) -> Descriptor:
    """U(F(C_n x C_4)) (kind "C4") or U(F(C_n x C_2^2)) (kind "C2xC2") over
    GF(3^k). Always a direct product of cyclic groups.

    For the C4 case with q = -1 mod 4, the second copy group algebra
    F_2 C_n contributes C_{q^(2 d'_l) - 1}^{e'_l}, d'_l = ord_l(q^2): its
    components are degree-d'_l extensions of F_2, itself quadratic over F.
    """
    if kind not in ("C4", "C2xC2"):
        raise ValueError(f"kind must be C4 or C2xC2, got {kind!r}")
    q = 3**k
    r, s = split_coprime(n, 3)
    nt = _ppart_multiplicities(k, r)
    split = kind == "C2xC2" or q % 4 == 1

    factors = []
    if split:
        factors.append(_pw(Cyclic(q - 1), 4))
        for _, d, e in _cyc_components(s, q):
            factors.append(_pw(Cyclic(q**d - 1), 4 * e))
        for t in range(1, r + 1):
            factors.append(_pw(Cyclic(3**t), 4 * s * nt[t - 1]))
        return Direct(tuple(factors))

    factors += [_pw(Cyclic(q - 1), 2), Cyclic(q**2 - 1)]
    for l, d, e in _cyc_components(s, q):
        d2 = mult_order(l, q * q)
        e2 = euler_totient(l) // d2
        factors.append(direct(_pw(Cyclic(q**d - 1), 2 * e), _pw(Cyclic(q ** (2 * d2) - 1), e2)))
    for t in range(1, r + 1):
        factors.append(direct(_pw(Cyclic(3**t), 2 * s * nt[t - 1]), _pw(Cyclic(3**t), s * 2 * nt[t - 1])))
    return Direct(tuple(factors))


# -- the four families of theorems --------------------------------------------------------

def _char2_acting(q: int, n: int) -> Direct:
    terms = [Cyclic(q - 1), GL(2, q)]
    for _, d, e in _cyc_components(n, q):
        terms.append(_pw(direct(Cyclic(q**d - 1), GL(2, q**d)), e))
    return Direct(tuple(terms))


def _char3_v(n: int, k: int) -> Semidirect:
    # exponent 3 holds because omega(K)^3 = 0; asserted on this node only
    return Semidirect(_pw(Cyclic(3), 6 * n * k), _pw(Cyclic(3), 2 * n * k), asserted_exponent=3)


def _large_char(family: str, c: CaseInput) -> UnitStructure:
    """U(FG)/V from the Wedderburn components, V = 1 + J given separately."""
    q = c.q

    def block(qq: int) -> list:
        # q' = 1, 5 mod 12 (always for D12): C^4 x GL^2, else C^2 x C_{q'^2-1} x GL^2
        if family == "D12" or qq % 12 in (1, 5):
            return [_pw(Cyclic(qq - 1), 4), _pw(GL(2, qq), 2)]
        return [_pw(Cyclic(qq - 1), 2), Cyclic(qq * qq - 1), _pw(GL(2, qq), 2)]

    factors = block(q)
    for _, d, e in _cyc_components(c.s, q):
        factors.append(_pw(Direct(tuple(block(q**d))), e))
    desc = Direct(tuple(factors))
    v = VPart(c.p ** (12 * c.s * c.k * (c.p**c.r - 1)), c.p**c.r)
    return UnitStructure(desc, v)


def unit_structure_q12(p: int, k: int, n: int) -> UnitStructure:
    c = CaseInput(p, k, n)
    q = c.q
    if p == 2:
        if n % 2 == 0:
            raise UnsupportedCase("characteristic 2 with n even is not covered")
        v = direct(_pw(Cyclic(2), 5 * n * k), _pw(Cyclic(4), n * k))
        return UnitStructure(Semidirect(v, _char2_acting(q, n)))
    if p == 3:
        return UnitStructure(Semidirect(_char3_v(n, k), aux_structure_char3(k, n, "C4")))
    return _large_char("Q12", c)


def unit_structure_d12(p: int, k: int, n: int) -> UnitStructure:
    c = CaseInput(p, k, n)
    q = c.q
    if p == 2:
        if n % 2 == 0:
            raise UnsupportedCase("characteristic 2 with n even is not covered")
        return UnitStructure(Semidirect(_pw(Cyclic(2), 7 * n * k), _char2_acting(q, n)))
    if p == 3:
        return UnitStructure(Semidirect(_char3_v(n, k), aux_structure_char3(k, n, "C2xC2")))
    return _large_char("D12", c)


def unit_structure(family: str, p: int, k: int, n: int) -> UnitStructure:
    """Predicted U(FG) for any supported family."""
    if family == "Q12":
        return unit_structure_q12(p, k, n)
    if family == "D12":
        return unit_structure_d12(p, k, n)
    if family == "Trivial":
        return UnitStructure(cyclic_units(p, k, n))
    if family in ("C4", "C2xC2"):
        if p == 3:
            return UnitStructure(aux_structure_char3(k, n, family))
        if family == "C2xC2" and p != 2 and n == 1:
            return UnitStructure(elem_abelian2_units(p**k, 2))
    raise UnsupportedCase(f"no structure formula for {family} over GF({p}^{k})")


def semisimple_unit_order(dec: decomp.Decomposition) -> int:
    """|U| of a semisimple algebra from its Wedderburn components."""
    return dec.unit_order()
