"""Invariant suites over the formula engines, plus optional golden files.

Each suite checks an exact identity over many parameter choices drawn from a
seeded stream and reports the first few counterexamples.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from itertools import product
from math import gcd
from pathlib import Path
from typing import Callable

from . import decomp, unitstruct
from .errors import GRWError
from .ffield import euler_totient, factorize, field_make, mult_order, prime_power

GOLDEN_SCHEMA = "grw-golden/1"
GOLDEN_FILE = "selftest-golden.json"
_MAX_WITNESSES = 5


@dataclass
class SuiteResult:
    name: str
    cases: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, witness):
        self.cases += 1
        if not ok and len(self.failures) < _MAX_WITNESSES:
            self.failures.append(witness)

    def to_json(self) -> dict:
        return {"suite": self.name, "cases": self.cases, "pass": self.passed, "failures": self.failures}


def dimension_audit(rng: random.Random, count: int = 200) -> SuiteResult:
    """sum e m^2 d + radical_dim = 12 n for F(C_n x G), p > 3."""
    res = SuiteResult("dimension_audit")
    for _ in range(count):
        p, k, n = rng.choice((5, 7, 11, 13)), rng.randint(1, 3), rng.randint(1, 50)
        for fam in ("Q12", "D12"):
            dec = decomp.product_decompose(fam, p, k, n)
            res.check(dec.dim == 12 * n, {"family": fam, "p": p, "k": k, "n": n, "dim": dec.dim})
    return res


def cyclic_identity(max_n: int = 200, qs=(2, 3, 4, 5, 7, 9)) -> SuiteResult:
    """1 + sum over l | n, l > 1 of d_l e_l = n whenever p does not divide n."""
    res = SuiteResult("cyclic_identity")
    for q in qs:
        p, _ = prime_power(q)
        for n in range(1, max_n + 1):
            if n % p == 0:
                continue
            dec = decomp.cyclic_decompose(n, q)
            res.check(dec.semisimple_dim == n, {"q": q, "n": n, "dim": dec.semisimple_dim})
    return res


def halving_rule(max_l: int = 1000, qs=(2, 3, 4, 5, 7, 9)) -> SuiteResult:
    """ord_l(q^2) is d_l / 2 for even d_l and d_l for odd d_l."""
    res = SuiteResult("halving_rule")
    for q in qs:
        for l in range(2, max_l + 1):
            if gcd(l, q) != 1:
                continue
            d = mult_order(l, q)
            want = d // 2 if d % 2 == 0 else d
            got = mult_order(l, q * q)
            res.check(got == want, {"q": q, "l": l, "d": d, "d2": got})
    return res


def _naive_order(l: int, q: int) -> int:
    d, acc = 1, q % l
    while acc != 1:
        acc = acc * q % l
        d += 1
    return d


def order_divides_totient(rng: random.Random, count: int = 10_000) -> SuiteResult:
    """mult_order agrees with naive iteration and divides phi(l)."""
    res = SuiteResult("order_divides_totient")
    while res.cases < count:
        l, q = rng.randint(2, 5000), rng.randint(2, 10_000)
        if gcd(l, q) != 1:
            continue
        d = mult_order(l, q)
        res.check(d == _naive_order(l, q) and euler_totient(l) % d == 0, {"l": l, "q": q, "order": d})
    return res


def _odd_prime_powers(limit: int):
    for q in range(3, limit + 1, 2):
        if len(factorize(q)) == 1:
            yield q


def fc4_agreement(limit: int = 10_000) -> SuiteResult:
    """The closed FC_4 formula agrees with the general cyclic decomposition."""
    res = SuiteResult("fc4_agreement")
    for q in _odd_prime_powers(limit):
        a, b = decomp.fc4_decompose(q), decomp.cyclic_decompose(4, q)
        res.check(a.same_components(b), {"q": q, "fc4": a.render(), "cyclic": b.render()})
    return res


def brute_gl2(q: int) -> int:
    """Count invertible 2x2 matrices over GF(q) directly."""
    p, k = prime_power(q)
    f = field_make(p, k)
    els = list(f.elements())
    prods = {(a, b): a * b for a in els for b in els}
    return sum(1 for a, b, c, d in product(els, repeat=4) if prods[a, d] - prods[b, c])


def gl_counts(qs=(2, 3, 4, 5)) -> SuiteResult:
    res = SuiteResult("gl_counts")
    for q in qs:
        brute, formula = brute_gl2(q), unitstruct.gl_order(2, q)
        res.check(brute == formula, {"q": q, "brute": brute, "formula": formula})
    return res


SUITES: dict[str, Callable[[random.Random], SuiteResult]] = {
    "dimension_audit": dimension_audit,
    "cyclic_identity": lambda rng: cyclic_identity(),
    "halving_rule": lambda rng: halving_rule(),
    "order_divides_totient": order_divides_totient,
    "fc4_agreement": lambda rng: fc4_agreement(),
    "gl_counts": lambda rng: gl_counts(),
}


def run_suites(seed: int = 0xC0FFEE, names=None) -> list[SuiteResult]:
    rng = random.Random(seed)
    return [SUITES[nm](rng) for nm in (names or SUITES)]


# -- goldens ---------------------------------------------------------------------------

GOLDEN_CASES = [
    ("Q12", 2, 1, 1), ("D12", 2, 1, 1), ("Q12", 3, 1, 1), ("D12", 3, 1, 1),
    ("Q12", 5, 1, 1), ("D12", 7, 1, 1), ("Q12", 7, 1, 1), ("Q12", 2, 1, 3),
    ("D12", 5, 1, 5), ("Q12", 3, 2, 2), ("D12", 2, 2, 3),
]


def golden_report() -> dict:
    """Deterministic structures and decompositions for a fixed case list."""
    cases = []
    for fam, p, k, n in GOLDEN_CASES:
        entry = {"family": fam, "p": p, "k": k, "n": n}
        try:
            us = unitstruct.unit_structure(fam, p, k, n)
            entry.update(structure=us.render(), order=str(us.order))
        except GRWError as exc:
            entry["structure_error"] = type(exc).__name__
        if p > 3:
            entry["decomposition"] = decomp.product_decompose(fam, p, k, n).to_json()
        cases.append(entry)
    return {"schema": GOLDEN_SCHEMA, "cases": cases}


def compare_golden(directory: str | Path, write: bool = False) -> SuiteResult:
    res = SuiteResult("golden")
    path = Path(directory) / GOLDEN_FILE
    current = golden_report()
    if write:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(current, indent=2, sort_keys=True) + "\n")
    if not path.exists():
        res.check(False, {"missing": str(path)})
        return res
    stored = json.loads(path.read_text())
    res.check(stored.get("schema") == GOLDEN_SCHEMA, {"schema": stored.get("schema")})
    for old, new in zip(stored.get("cases", []), current["cases"]):
        res.check(old == new, {"stored": old, "current": new})
    res.check(len(stored.get("cases", [])) == len(current["cases"]), {"case_count": len(stored.get("cases", []))})
    return res
