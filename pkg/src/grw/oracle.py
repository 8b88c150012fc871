"""Brute-force and constructive checks of the predicted structures.

Unit censuses enumerate (or sample) coefficient vectors and test
invertibility through the regular representation. The characteristic 3
constructions (V, its centralizer of the 3-element, T, S, W) are built from
their explicit parametric forms and checked element by element where the
sizes allow, by sampling otherwise.
"""

from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from math import lcm
from typing import Sequence

import numpy as np

from . import linalg
from .errors import NotClosed, SizeBound, UnsupportedCase
from .ffield import split_coprime
from .galg import AlgElem, GroupAlgebra, f_span_rows, algebra, ideal_nilpotency, omega_basis, theta_quotient
from .groups import Elem, Group

DEFAULT_SEED = 0xC0FFEE
DEFAULT_CAP = 3**12
DEFAULT_SAMPLES = 100_000
ENUM_CAP = 3**8
PAIR_CAP = 3**6  # exhaustive pairwise checks up to this many members
_BLOCK = 8192


def _threads(threads: int | None) -> int:
    if threads is None:
        threads = int(os.environ.get("GRW_THREADS", "1") or 1)
    return max(1, threads)


def _rng(seed: int, block: int) -> np.random.Generator:
    # counter-based stream per block, so results do not depend on the worker count
    return np.random.Generator(np.random.Philox(seed).jumped(block))


# -- unit censuses ------------------------------------------------------------------

@dataclass
class UnitCensus:
    p: int
    k: int
    family: str
    n: int
    mode: str
    total: int
    unit_count: int | None = None
    samples: int | None = None
    hits: int | None = None
    seed: int | None = None
    elapsed: float = 0.0
    unit_codes: np.ndarray | None = field(default=None, repr=False)

    @property
    def estimated_fraction(self) -> float:
        if self.mode == "exhaustive":
            return self.unit_count / self.total
        return self.hits / self.samples

    @property
    def std_error(self) -> float:
        if self.mode == "exhaustive":
            return 0.0
        f = self.estimated_fraction
        return (f * (1 - f) / self.samples) ** 0.5

    def z_score(self, predicted_order: int) -> float:
        expect = predicted_order / self.total
        se = (expect * (1 - expect) / self.samples) ** 0.5
        return (self.estimated_fraction - expect) / se if se else float("inf")

    def to_json(self, timings: bool = False) -> dict:
        out = {
            "algebra": {"p": self.p, "k": self.k, "family": self.family, "n": self.n},
            "mode": self.mode,
            "total": self.total,
        }
        if self.mode == "exhaustive":
            out["unit_count"] = self.unit_count
        else:
            out.update(samples=self.samples, hits=self.hits, seed=self.seed,
                       estimated_fraction=self.estimated_fraction, std_error=self.std_error)
        if timings:
            out["elapsed"] = self.elapsed
        return out


def _chunk_rows(fp_dim: int) -> int:
    return max(256, (1 << 22) // (fp_dim * fp_dim))


def _units_mask(alg: GroupAlgebra, flats: np.ndarray) -> np.ndarray:
    return linalg.batched_nonsingular(alg.left_matrices(flats), alg.p)


def count_units(p: int, k: int, family: str, n: int = 1, mode: str = "exhaustive", *,
                samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED, cap: int = DEFAULT_CAP,
                threads: int | None = None, collect: bool = False) -> UnitCensus:
    """Count (or estimate the fraction of) units of F G by brute force."""
    alg = algebra(p, k, family, n)
    total = p**alg.fp_dim
    start = time.perf_counter()
    workers = _threads(threads)
    step = _chunk_rows(alg.fp_dim)

    if mode == "exhaustive":
        if total > cap:
            raise SizeBound(f"{total} coefficient vectors exceed the exhaustive cap {cap}")
        ranges = [(a, min(a + step, total)) for a in range(0, total, step)]

        def work(rg):
            codes = np.arange(*rg, dtype=np.int64)
            mask = _units_mask(alg, alg.from_codes(codes))
            return int(mask.sum()), (codes[mask] if collect else None)

        with ThreadPoolExecutor(workers) as ex:
            results = list(ex.map(work, ranges))
        census = UnitCensus(p, k, family, n, "exhaustive", total,
                            unit_count=sum(c for c, _ in results))
        if collect:
            census.unit_codes = np.concatenate([u for _, u in results])
    elif mode == "sampled":
        if samples < 1000:
            raise ValueError("sampled census needs at least 1000 samples")
        blocks = [(b, min(_BLOCK, samples - b * _BLOCK)) for b in range((samples + _BLOCK - 1) // _BLOCK)]

        def work(blk):
            b, size = blk
            flats = _rng(seed, b).integers(0, p, size=(size, alg.fp_dim))
            hits = 0
            for a in range(0, size, step):
                hits += int(_units_mask(alg, flats[a:a + step]).sum())
            return hits

        with ThreadPoolExecutor(workers) as ex:
            hits = sum(ex.map(work, blocks))
        census = UnitCensus(p, k, family, n, "sampled", total, samples=samples, hits=hits, seed=seed)
    else:
        raise ValueError(f"mode must be 'exhaustive' or 'sampled', got {mode!r}")
    census.elapsed = time.perf_counter() - start
    return census


@dataclass
class FractionCheck:
    predicted_order: int
    censuses: list[UnitCensus]
    z_scores: list[float]
    passed: bool

    def to_json(self, timings: bool = False) -> dict:
        return {
            "predicted_order": self.predicted_order,
            "predicted_fraction": self.predicted_order / self.censuses[0].total,
            "runs": [dict(c.to_json(timings), z=z) for c, z in zip(self.censuses, self.z_scores)],
            "pass": self.passed,
        }


def check_fraction(p, k, family, n, predicted_order: int, *, samples=DEFAULT_SAMPLES,
                   seed=DEFAULT_SEED, sigmas=3.0, threads=None) -> FractionCheck:
    """Sampled unit fraction against a predicted order, at `sigmas` standard
    errors; one re-run with the next seed before reporting failure."""
    runs, zs = [], []
    for attempt in range(2):
        c = count_units(p, k, family, n, "sampled", samples=samples, seed=seed + attempt, threads=threads)
        runs.append(c)
        zs.append(c.z_score(predicted_order))
        if abs(zs[-1]) <= sigmas:
            return FractionCheck(predicted_order, runs, zs, True)
    return FractionCheck(predicted_order, runs, zs, False)


def unit_set_closure(p, k, family, n, unit_codes: np.ndarray, pairs: int = 10_000,
                     seed: int = DEFAULT_SEED) -> bool:
    """Random products and inverses of collected units stay in the set."""
    alg = algebra(p, k, family, n)
    codes = np.sort(unit_codes)
    rng = _rng(seed, 0)
    a = alg.from_codes(rng.choice(codes, pairs))
    b = alg.from_codes(rng.choice(codes, pairs))
    prod = alg.codes(alg.mul_flat(a, b))
    ok, inv = linalg.batched_solve(alg.left_matrices(a), alg.one_flat, alg.p)
    inv_codes = alg.codes(inv)
    return bool(ok.all() and np.isin(prod, codes).all() and np.isin(inv_codes, codes).all())


# -- structure of explicit finite groups ----------------------------------------------

@dataclass
class GroupAnalysis:
    order: int
    exponent: int
    center_order: int
    derived_order: int
    abelianization_invariants: list[int]

    @property
    def is_abelian(self) -> bool:
        return self.derived_order == 1


class _ElementSet:
    """A finite set of algebra elements, indexed by sorted odometer codes."""

    def __init__(self, alg: GroupAlgebra, flats: np.ndarray):
        self.alg = alg
        codes = alg.codes(flats)
        order = np.argsort(codes, kind="stable")
        self.codes = codes[order]
        self.flats = flats[order]
        if len(self.codes) > 1 and (self.codes[1:] == self.codes[:-1]).any():
            raise ValueError("duplicate elements")

    def __len__(self):
        return len(self.codes)

    def contains(self, flats: np.ndarray) -> np.ndarray:
        c = self.alg.codes(flats)
        pos = np.minimum(np.searchsorted(self.codes, c), len(self.codes) - 1)
        return self.codes[pos] == c

    def check_closed(self, rng: np.random.Generator, pairs: int, full_limit: int = 2048):
        alg, n = self.alg, len(self)
        if not self.contains(alg.one_flat).all():
            raise NotClosed("identity missing")
        if n <= full_limit:
            step = max(1, (1 << 22) // (n * alg.fp_dim))
            for a in range(0, n, step):
                prods = alg.mul_outer(self.flats[a:a + step], self.flats).reshape(-1, alg.fp_dim)
                if not self.contains(prods).all():
                    raise NotClosed("the set is not closed under multiplication")
        else:
            i, j = rng.integers(0, n, pairs), rng.integers(0, n, pairs)
            if not self.contains(alg.mul_flat(self.flats[i], self.flats[j])).all():
                raise NotClosed("the set is not closed under multiplication")
        step = _chunk_rows(alg.fp_dim)
        for a in range(0, n, step):
            ok, inv = linalg.batched_solve(alg.left_matrices(self.flats[a:a + step]), alg.one_flat, alg.p)
            if not ok.all() or not self.contains(inv).all():
                raise NotClosed("the set is not closed under inverses")


def _power(alg: GroupAlgebra, flats: np.ndarray, m: int) -> np.ndarray:
    out = np.broadcast_to(alg.one_flat, flats.shape).copy()
    base = flats
    while m:
        if m & 1:
            out = alg.mul_flat(out, base)
        m >>= 1
        if m:
            base = alg.mul_flat(base, base)
    return out


def _batched(fn, flats: np.ndarray, step: int = 1 << 15) -> np.ndarray:
    return np.vstack([fn(flats[a:a + step]) for a in range(0, len(flats), step)]) if len(flats) else flats


def _is_one(alg: GroupAlgebra, flats: np.ndarray) -> np.ndarray:
    return (flats == alg.one_flat).all(axis=1)


def _orders(alg: GroupAlgebra, flats: np.ndarray, group_order: int) -> np.ndarray:
    """Element orders, using that each order divides the group order."""
    from .ffield import factorize

    out = np.ones(len(flats), dtype=object)
    for p, e in factorize(group_order) if group_order > 1 else ():
        cur = _batched(lambda f: _power(alg, f, group_order // p**e), flats)
        part = np.ones(len(flats), dtype=object)
        for _ in range(e):
            pending = ~_is_one(alg, cur)
            if not pending.any():
                break
            part[pending] *= p
            cur = _batched(lambda f: _power(alg, f, p), cur)
        out *= part
    return out


def _closure(alg: GroupAlgebra, seeds: np.ndarray, step_fn) -> np.ndarray:
    """Smallest set containing seeds and closed under step_fn (frontier -> new
    candidates), found breadth first with code hashing."""
    codes = np.unique(alg.codes(seeds))
    members = [seeds[np.unique(alg.codes(seeds), return_index=True)[1]]]
    frontier = members[0]
    while len(frontier):
        cand = _batched(step_fn, frontier, step=4096)
        cc = alg.codes(cand)
        uniq, first = np.unique(cc, return_index=True)
        fresh = ~np.isin(uniq, codes)
        frontier = cand[first[fresh]]
        codes = np.union1d(codes, uniq[fresh])
        members.append(frontier)
    return np.vstack(members)


def _right_mult_by(alg: GroupAlgebra, gens: np.ndarray):
    def step(frontier):
        return alg.mul_outer(frontier, gens).reshape(-1, alg.fp_dim)
    return step


def _generating_set(alg: GroupAlgebra, es: _ElementSet, rng) -> np.ndarray:
    n = len(es)
    gens: list[np.ndarray] = []
    span = alg.one_flat[None]
    while len(span) < n:
        outside = np.nonzero(~_contains_codes(alg, span, es.flats))[0]
        gens.append(es.flats[outside[rng.integers(0, len(outside))]])
        g = np.array(gens)
        span = _closure(alg, np.vstack([alg.one_flat[None], g]), _right_mult_by(alg, g))
    return np.array(gens)


def _contains_codes(alg: GroupAlgebra, members: np.ndarray, flats: np.ndarray) -> np.ndarray:
    return np.isin(alg.codes(flats), alg.codes(members))


def analyze_group(elements: Sequence[AlgElem] | tuple[GroupAlgebra, np.ndarray], *,
                  pairs: int = 10_000, seed: int = DEFAULT_SEED) -> GroupAnalysis:
    """Order, exponent, center, derived subgroup and abelianization of a
    finite group of algebra units, given as an explicit element list.

    Closure is verified on all pairs for up to 2048 elements and on `pairs`
    random pairs beyond that; inverses are verified for every element.
    Commutation is tested against a basis of the F-span of the group, which
    is exact because commuting is bilinear.
    """
    if isinstance(elements, tuple):
        alg, flats = elements
    else:
        if not elements:
            raise ValueError("empty element list")
        alg = elements[0].algebra
        flats = np.array([u.flat for u in elements], dtype=np.int64)
    rng = _rng(seed, 7)
    es = _ElementSet(alg, np.atleast_2d(np.asarray(flats, dtype=np.int64)))
    es.check_closed(rng, pairs)
    n = len(es)
    orders = _orders(alg, es.flats, n)
    exponent = lcm(*[int(o) for o in orders])

    span_rows, _ = linalg.rref(es.flats, alg.p)

    def commutes_with_span(f):
        out = np.ones(len(f), dtype=bool)
        for b in span_rows:
            bb = np.broadcast_to(b, f.shape)
            out &= (alg.mul_flat(f, bb) == alg.mul_flat(bb, f)).all(axis=1)
        return out

    central = np.concatenate([commutes_with_span(es.flats[a:a + 8192]) for a in range(0, n, 8192)])
    center = int(central.sum())
    if center == n:
        derived = alg.one_flat[None]
    else:
        gens = _generating_set(alg, es, rng)
        inv = _batched(lambda f: linalg.batched_solve(alg.left_matrices(f), alg.one_flat, alg.p)[1], gens)
        comms = np.array([alg.mul_flat(alg.mul_flat(inv[i], inv[j]), alg.mul_flat(gens[i], gens[j]))[0]
                          for i in range(len(gens)) for j in range(len(gens)) if i != j])

        def step(frontier):
            prods = alg.mul_outer(frontier, comms).reshape(-1, alg.fp_dim)
            conj = [alg.mul_flat(alg.mul_flat(np.broadcast_to(gi, frontier.shape), frontier),
                                 np.broadcast_to(g, frontier.shape)) for g, gi in zip(gens, inv)]
            return np.vstack([prods] + conj)

        derived = _closure(alg, np.vstack([alg.one_flat[None], comms]), step)
    dset = _ElementSet(alg, derived)
    dord = len(dset)
    quot = n // dord

    invariants: list[int] = []
    from .ffield import factorize
    for p, e in factorize(quot) if quot > 1 else ():
        ppart = p**e
        # counts[i] = |{a in A_p : a^(p^i) = 1}| for A = G/G'; g -> g^m maps
        # onto A_p with fibres of size m
        m = quot // ppart
        base = _batched(lambda f: _power(alg, f, quot // ppart), es.flats)
        counts = [1]
        cur = base
        while counts[-1] < ppart:
            cur = _batched(lambda f: _power(alg, f, p), cur)
            counts.append(int(dset.contains(cur).sum()) // (dord * m))
        at_least = []
        for j in range(1, len(counts)):
            ratio, t = counts[j] // counts[j - 1], 0
            while ratio > 1:
                ratio //= p
                t += 1
            at_least.append(t)
        at_least.append(0)
        for j in range(len(at_least) - 1):
            invariants += [p ** (j + 1)] * (at_least[j] - at_least[j + 1])
    return GroupAnalysis(n, exponent, center, dord, sorted(invariants))


# -- the characteristic 3 construction --------------------------------------------------

def collapse_subgroup(g: Group, p: int) -> list[Elem]:
    """The normal subgroup K whose augmentation ideal gives V = 1 + omega(K):
    <x> (Q12) or <x^2> (D12) for p = 3, and <z^s> for p > 3."""
    fam = g.spec.family
    if p == 3 and fam == "Q12":
        return g.subgroup([g.gen("x")])
    if p == 3 and fam == "D12":
        return g.subgroup([g.word(x=2)])
    if p > 3:
        _, s = split_coprime(g.spec.n, p)
        return g.subgroup([g.power(g.gen("z"), s)])
    raise UnsupportedCase(f"no collapse subgroup for {fam} in characteristic {p}")


class ShiftedSpace:
    """The set 1 + W for an F-subspace W of the algebra."""

    def __init__(self, alg: GroupAlgebra, gens: Sequence[AlgElem] | np.ndarray):
        self.alg = alg
        flats = [g.flat for g in gens] if not isinstance(gens, np.ndarray) else list(gens)
        rows = f_span_rows(alg, flats) if flats else np.zeros((0, alg.fp_dim), dtype=np.int64)
        self.rows, self.pivots = linalg.rref(rows, alg.p) if len(rows) else (rows, [])

    @property
    def fp_dim(self) -> int:
        return len(self.pivots)

    @property
    def size(self) -> int:
        return self.alg.p**self.fp_dim

    def elements(self) -> np.ndarray:
        m, p = self.fp_dim, self.alg.p
        if self.size > 3**13:
            raise SizeBound(f"{self.size} elements is too many to enumerate")
        coords = np.array(np.unravel_index(np.arange(p**m), (p,) * m)).T if m else np.zeros((1, 0), np.int64)
        return (coords @ self.rows + self.alg.one_flat) % p

    def sample(self, rng: np.random.Generator, count: int) -> np.ndarray:
        coords = rng.integers(0, self.alg.p, size=(count, self.fp_dim))
        return (coords @ self.rows + self.alg.one_flat) % self.alg.p

    def contains(self, flats: np.ndarray) -> np.ndarray:
        shifted = (np.atleast_2d(flats) - self.alg.one_flat) % self.alg.p
        if not self.fp_dim:
            return ~shifted.any(axis=1)
        return linalg.in_span(shifted, self.rows, self.pivots, self.alg.p)

    def intersect(self, other: ShiftedSpace) -> ShiftedSpace:
        p = self.alg.p
        if not self.fp_dim or not other.fp_dim:
            return ShiftedSpace(self.alg, np.zeros((0, self.alg.fp_dim), dtype=np.int64))
        m = np.vstack([self.rows, -other.rows % p]).T
        ns = linalg.nullspace(m, p)
        vecs = ns[:, :self.fp_dim] @ self.rows % p
        return ShiftedSpace(self.alg, vecs) if len(vecs) else ShiftedSpace(self.alg, np.zeros((0, self.alg.fp_dim), dtype=np.int64))


def _conj_right(alg: GroupAlgebra, t: np.ndarray) -> np.ndarray:
    """Matrix R with a * t = R @ a."""
    eye = np.eye(alg.fp_dim, dtype=np.int64)
    return alg.mul_flat(eye, np.broadcast_to(t, eye.shape)).T


def _inverse_flats(alg: GroupAlgebra, flats: np.ndarray) -> np.ndarray:
    ok, inv = linalg.batched_solve(alg.left_matrices(np.atleast_2d(flats)), alg.one_flat, alg.p)
    if not ok.all():
        raise NotClosed("non-unit in a subgroup")
    return inv


def _cube_all_one(alg: GroupAlgebra, flats: np.ndarray) -> tuple[bool, bool]:
    """(all x^p = 1, some x != 1) for a stack of elements of a p-group."""
    cur = flats
    for _ in range(alg.p - 1):
        cur = alg.mul_flat(cur, flats)
    one = alg.one_flat
    return bool((cur == one).all()), bool((flats != one).any())


@dataclass
class SubgroupReport:
    name: str
    element_count: int
    predicted_count: int
    is_abelian: bool | None
    exponent: int | None
    abelian_invariants: list[int] | None
    closure_verified: bool
    all_units: bool
    mode: str

    @property
    def ok(self) -> bool:
        return self.element_count == self.predicted_count and self.closure_verified and self.all_units

    def to_json(self) -> dict:
        return asdict(self) | {"ok": self.ok}


class Char3Setup:
    """V, its centralizer and the T/S/W subgroups for p = 3."""

    def __init__(self, family: str, k: int = 1, n: int = 1):
        if family not in ("Q12", "D12"):
            raise ValueError("family must be Q12 or D12")
        self.family, self.k, self.n = family, k, n
        self.alg = alg = algebra(3, k, family, n)
        g = alg.group
        self.K = collapse_subgroup(g, 3)
        self.omega = omega_basis(alg, self.K)
        self.V = ShiftedSpace(alg, self.omega.rows)
        one = alg.one()
        zs = [alg.word(z=l) for l in range(n)]
        if family == "Q12":
            x, y = alg.gen("x"), alg.gen("y")
            self.centralized = x
            xhat = one + x + x * x
            xm = x + 2 * x * x
            cv = [(x**i - one) * y**j * z for z in zs for j in (0, 2) for i in (1, 2)]
            cv += [xhat * y**j * z for z in zs for j in (1, 3)]
            tt = [xhat * z for z in zs] + [xhat * y**2 * z for z in zs]
            tt += [xm * y * z for z in zs] + [xm * y**3 * z for z in zs]
            self.second_name = "T"
        else:
            x, y = alg.gen("x"), alg.gen("y")
            x2, x3 = x * x, x**3
            self.centralized = x2
            x2hat = one + x2 + x2 * x2
            cv = [(x2**i - one) * x3**a * z for z in zs for a in (0, 1) for i in (1, 2)]
            cv += [x2hat * x3**a * y * z for z in zs for a in (0, 1)]
            base = x2 * (one - x2)
            tt = [base * x3**a * (one + y) * z for z in zs for a in (0, 1)]
            self.second_name = "S"
        self.CV = ShiftedSpace(alg, cv)
        self.second = ShiftedSpace(alg, tt)

    @property
    def nk(self) -> int:
        return self.n * self.k

    def commutes_with_centralized(self, flats: np.ndarray) -> np.ndarray:
        alg = self.alg
        c = np.broadcast_to(self.centralized.flat, np.shape(flats))
        return (alg.mul_flat(flats, c) == alg.mul_flat(c, flats)).all(axis=1)

    def centralizer_by_linear_algebra(self) -> ShiftedSpace:
        """1 + {w in omega(K) : w c = c w}, computed as a kernel."""
        alg, p = self.alg, self.alg.p
        basis = self.omega.rows
        c = np.broadcast_to(self.centralized.flat, basis.shape)
        diff = (alg.mul_flat(basis, c) - alg.mul_flat(c, basis)) % p
        coeff = linalg.nullspace(diff.T, p)
        vecs = coeff @ basis % p
        return ShiftedSpace(alg, vecs if len(vecs) else np.zeros((0, alg.fp_dim), dtype=np.int64))


def _pairwise_commute(alg: GroupAlgebra, flats: np.ndarray) -> bool:
    n = len(flats)
    step = max(1, (1 << 22) // (n * alg.fp_dim))
    for a in range(0, n, step):
        ab = alg.mul_outer(flats[a:a + step], flats)
        ba = alg.mul_outer(flats, flats[a:a + step]).transpose(1, 0, 2)
        if not (ab == ba).all():
            return False
    return True


def _closed(alg: GroupAlgebra, space: ShiftedSpace, flats: np.ndarray, rng, pairs: int, exhaustive: bool) -> bool:
    if exhaustive:
        n = len(flats)
        step = max(1, (1 << 22) // (n * alg.fp_dim))
        for a in range(0, n, step):
            prods = alg.mul_outer(flats[a:a + step], flats).reshape(-1, alg.fp_dim)
            if not space.contains(prods).all():
                return False
        return True
    a, b = space.sample(rng, pairs), space.sample(rng, pairs)
    return bool(space.contains(alg.mul_flat(a, b)).all())


def _report(name, setup: Char3Setup, space: ShiftedSpace, predicted: int, *, cap, pairs, seed,
            abelian_check=True) -> SubgroupReport:
    alg = setup.alg
    rng = _rng(seed, 1)
    exhaustive = space.size <= cap
    flats = space.elements() if exhaustive else space.sample(rng, pairs)
    all_units = bool(_units_mask(alg, flats).all())
    pairwise = space.size <= PAIR_CAP
    closed = _closed(alg, space, flats, rng, pairs, pairwise)
    pth, nontrivial = _cube_all_one(alg, flats)
    exponent = (3 if nontrivial else 1) if pth else None
    if abelian_check:
        if pairwise:
            abelian = _pairwise_commute(alg, flats)
        else:
            a, b = space.sample(rng, pairs), space.sample(rng, pairs)
            abelian = bool((alg.mul_flat(a, b) == alg.mul_flat(b, a)).all())
    else:
        abelian = None
    m = space.fp_dim
    invariants = [3] * m if abelian and exponent == 3 else ([] if m == 0 else None)
    return SubgroupReport(name, space.size, predicted, abelian, exponent, invariants, closed, all_units,
                          "exhaustive" if pairwise else "enumerated" if exhaustive else "sampled")


def v_subgroup(family: str, k: int = 1, n: int = 1, *, cap: int = ENUM_CAP, pairs: int = 10_000,
               seed: int = DEFAULT_SEED) -> SubgroupReport:
    """V = 1 + omega(K): every member a unit, |V| = 3^(8nk), V^3 = 1."""
    s = Char3Setup(family, k, n)
    rep = _report("V", s, s.V, 3 ** (8 * s.nk), cap=cap, pairs=pairs, seed=seed, abelian_check=False)
    # V is nonabelian; a random witness settles it without pairwise enumeration
    rng = _rng(seed, 2)
    a, b = s.V.sample(rng, 200), s.V.sample(rng, 200)
    rep.is_abelian = False if (s.alg.mul_flat(a, b) != s.alg.mul_flat(b, a)).any() else None
    rep.abelian_invariants = None
    return rep


@dataclass
class CentralizerReport:
    report: SubgroupReport
    commutes: bool
    matches_linear_algebra: bool

    @property
    def ok(self) -> bool:
        return self.report.ok and self.commutes and self.matches_linear_algebra and bool(self.report.is_abelian)

    def to_json(self) -> dict:
        return {"subgroup": self.report.to_json(), "commutes_with_generator": self.commutes,
                "matches_kernel_computation": self.matches_linear_algebra, "ok": self.ok}


def cv_subgroup(family: str, k: int = 1, n: int = 1, *, cap: int = ENUM_CAP, pairs: int = 1000,
                seed: int = DEFAULT_SEED) -> CentralizerReport:
    """The centralizer of x (Q12) or x^2 (D12) in V, from its parametric form."""
    s = Char3Setup(family, k, n)
    rep = _report("C_V", s, s.CV, 3 ** (6 * s.nk), cap=cap, pairs=pairs, seed=seed)
    flats = s.CV.elements() if s.CV.size <= cap else s.CV.sample(_rng(seed, 3), pairs)
    commutes = bool(s.commutes_with_centralized(flats).all())
    inside_v = bool(s.V.contains(flats).all())
    lin = s.centralizer_by_linear_algebra()
    same = inside_v and linalg.same_row_space(lin.rows, s.CV.rows, 3)
    return CentralizerReport(rep, commutes, same)


@dataclass
class ProofSubgroups:
    second: SubgroupReport  # T (Q12) or S (D12)
    intersection: SubgroupReport
    complement: SubgroupReport | None
    normalizes: bool
    trivial_intersection: bool
    product_order: int
    v_order: int
    mode: str

    @property
    def ok(self) -> bool:
        parts = [self.second, self.intersection] + ([self.complement] if self.complement else [])
        return all(r.ok for r in parts) and self.normalizes and self.trivial_intersection \
            and self.product_order == self.v_order

    def to_json(self) -> dict:
        return {
            "second": self.second.to_json(),
            "intersection": self.intersection.to_json(),
            "complement": self.complement.to_json() if self.complement else None,
            "normalizes": self.normalizes,
            "trivial_intersection": self.trivial_intersection,
            "product_order": self.product_order,
            "v_order": self.v_order,
            "mode": self.mode,
            "ok": self.ok,
        }


def _normalizes(s: Char3Setup, acting: np.ndarray, normal: ShiftedSpace, *, exhaustive: bool,
                pairs: int, rng) -> bool:
    """t^-1 c t stays in the centralizer, for c in C_V and t in `acting`."""
    alg = s.alg
    if exhaustive:
        cs = normal.elements()
        for t in acting:
            tinv = _inverse_flats(alg, t)[0]
            left = alg.left_matrix(tinv)
            conj = (cs @ left.T) % alg.p @ _conj_right(alg, t).T % alg.p
            if not normal.contains(conj).all():
                return False
        return True
    cs = normal.sample(rng, pairs)
    ts = acting[rng.integers(0, len(acting), pairs)] if len(acting) < pairs else acting[:pairs]
    tinv = _inverse_flats(alg, ts)
    conj = alg.mul_flat(alg.mul_flat(tinv, cs), ts)
    return bool(normal.contains(conj).all())


def _generated_abelian(alg: GroupAlgebra, base: np.ndarray, candidates: np.ndarray,
                       want: int) -> tuple[np.ndarray, np.ndarray]:
    """Greedy complement in an elementary abelian p-group: pick candidates
    outside <base, chosen> until `want` generators are chosen. Returns
    (elements of the generated complement, elements of base * complement)."""
    p = alg.p
    span = np.unique(alg.codes(base))
    comp = alg.one_flat[None].copy()
    for g in candidates:
        if len(comp) == p**want:
            break
        code = alg.codes(g)[0]
        if np.isin(code, span):
            continue
        powers = [alg.one_flat]
        for _ in range(p - 1):
            powers.append(alg.mul_flat(powers[-1], g)[0])
        powers = np.array(powers)
        comp = np.unique(alg.mul_outer(powers, comp).reshape(-1, alg.fp_dim), axis=0)
        full = alg.mul_outer(comp, base).reshape(-1, alg.fp_dim)
        span = np.unique(alg.codes(full))
    return comp, span


def proof_subgroups(family: str, k: int = 1, n: int = 1, *, cap: int = ENUM_CAP, pairs: int = 10_000,
                    seed: int = DEFAULT_SEED) -> ProofSubgroups:
    """T (or S), its meet with C_V, a complement W, and the normalization and
    product checks giving V = C_V . W (resp. C_V . S)."""
    s = Char3Setup(family, k, n)
    alg = s.alg
    nk = s.nk
    rng = _rng(seed, 4)
    if family == "Q12":
        second = _report("T", s, s.second, 3 ** (4 * nk), cap=cap, pairs=pairs, seed=seed)
    else:
        second = _report("S", s, s.second, 3 ** (2 * nk), cap=cap, pairs=pairs, seed=seed)
    meet_space = s.CV.intersect(s.second)
    meet_pred = 3 ** (2 * nk) if family == "Q12" else 1
    meet = _report("U" if family == "Q12" else "C_V∩S", s, meet_space, meet_pred,
                   cap=cap, pairs=pairs, seed=seed)

    exhaustive_conj = s.CV.size * s.second.size <= 3**10 and s.CV.size <= cap
    second_elems = s.second.elements() if s.second.size <= cap else s.second.sample(rng, pairs)
    normalizes = _normalizes(s, second_elems, s.CV, exhaustive=exhaustive_conj, pairs=pairs, rng=rng)

    complement = None
    if family == "Q12":
        want = 2 * nk
        if s.second.size > 3**10:
            raise SizeBound("T too large to build a complement explicitly")
        cands = (s.second.rows + alg.one_flat) % alg.p
        w_flats, span = _generated_abelian(alg, meet_space.elements(), cands, want)
        w_ok = bool(len(span) == s.second.size)
        w_closed = bool(np.isin(alg.codes(alg.mul_outer(w_flats, w_flats).reshape(-1, alg.fp_dim)),
                                alg.codes(w_flats)).all())
        pth, nontrivial = _cube_all_one(alg, w_flats)
        complement = SubgroupReport("W", len(w_flats), 3**want, True, 3 if nontrivial else 1,
                                    [3] * want, w_closed and w_ok and pth,
                                    bool(_units_mask(alg, w_flats).all()), "exhaustive")
        other = w_flats
    else:
        other = s.second.elements() if s.second.size <= cap else None

    if other is not None:
        in_cv = s.CV.contains(other)
        trivial = int(in_cv.sum()) == 1 and bool(s.V.contains(other).all())
        product_order = s.CV.size * len(other) // int(in_cv.sum())
        if s.CV.size * len(other) <= 3**10:
            prods = alg.mul_outer(s.CV.elements(), other).reshape(-1, alg.fp_dim)
            distinct = len(np.unique(alg.codes(prods)))
            trivial &= distinct == product_order and bool(s.V.contains(prods).all())
            product_order = distinct
    else:
        inter = s.CV.intersect(s.second)
        trivial = inter.fp_dim == 0
        product_order = s.CV.size * s.second.size // inter.size
    return ProofSubgroups(second, meet, complement, normalizes, trivial, product_order, s.V.size,
                          "exhaustive" if exhaustive_conj else "sampled")


def coefficient_blocks(alg: GroupAlgebra) -> np.ndarray:
    """Block number J of each group element in the coefficient criterion for V.

    Coefficients are grouped in threes, a_i + a_{i+1} + a_{i+2} over one coset
    of K: for Q12 the block of x^i y^j z^l is j + 4l, for D12 the block of
    x^(2i + 3e) y^b z^l is 2(l + n b) + e.
    """
    ex = alg.group._exps
    n = alg.group.spec.n
    if alg.group.spec.family == "Q12":
        return ex[:, 1] + 4 * ex[:, 2]
    if alg.group.spec.family == "D12":
        return 2 * (ex[:, 2] + n * ex[:, 1]) + ex[:, 0] % 2
    raise ValueError("coefficient criterion is defined for Q12 and D12 only")


def coefficient_criterion(alg: GroupAlgebra, flats: np.ndarray) -> np.ndarray:
    """Block sums equal 1 for block 0 and 0 for every other block."""
    flats = np.atleast_2d(flats)
    blocks = coefficient_blocks(alg)
    c = flats.reshape(len(flats), alg.dim, alg.k)
    sums = np.zeros((len(flats), 4 * alg.group.spec.n, alg.k), dtype=np.int64)
    np.add.at(sums, (slice(None), blocks), c)
    sums %= alg.p
    want = np.zeros_like(sums[0])
    want[0, 0] = 1
    return (sums == want).all(axis=(1, 2))


def v_criterion_check(family: str, k: int = 1, n: int = 1) -> bool:
    """The coefficient criterion agrees with u - 1 in omega(K), over every
    element of the algebra."""
    alg = algebra(3, k, family, n)
    total = 3**alg.fp_dim
    if total > DEFAULT_CAP:
        raise SizeBound("algebra too large for the exhaustive criterion check")
    omega = omega_basis(alg, collapse_subgroup(alg.group, 3))
    ok = True
    step = 1 << 16
    for a in range(0, total, step):
        flats = alg.from_codes(np.arange(a, min(a + step, total)))
        crit = coefficient_criterion(alg, flats)
        member = omega.contains_flat((flats - alg.one_flat) % 3)
        ok &= bool((crit == member).all())
    return ok


# -- split extension and radical ---------------------------------------------------------

@dataclass
class SplitReport:
    ok: bool
    mode: str
    checked: int
    witness: list | None = None

    def to_json(self) -> dict:
        return asdict(self)


def verify_split(p: int, k: int, family: str, n: int, gens: Sequence[Elem] | None = None, *,
                 cap: int = ENUM_CAP, samples: int = 10_000, seed: int = DEFAULT_SEED) -> SplitReport:
    """theta . i = id on units of F H, and i maps units to units."""
    alg = algebra(p, k, family, n)
    g = alg.group
    K = g.subgroup(gens) if gens is not None else collapse_subgroup(g, p)
    theta = theta_quotient(alg, K)
    if not theta.has_section:
        return SplitReport(False, "none", 0, ["no complement to K"])
    fh = theta.target
    total = p**fh.fp_dim
    if total <= cap:
        flats = fh.from_codes(np.arange(total))
        mode = "exhaustive"
    else:
        rng = _rng(seed, 5)
        need, got = samples, []
        while need > 0:
            cand = rng.integers(0, p, size=(4 * need + 64, fh.fp_dim))
            units = cand[_units_mask(fh, cand)][:need]
            got.append(units)
            need -= len(units)
        flats = np.vstack(got)
        mode = "sampled"
    ok_mask, inv = linalg.batched_solve(fh.left_matrices(flats), fh.one_flat, p)
    units, inv = flats[ok_mask], inv[ok_mask]
    lifted, lifted_inv = theta.section_flat(units), theta.section_flat(inv)
    back = theta.apply_flat(lifted)
    bad = np.nonzero(~(back == units).all(axis=1))[0]
    if bad.size:
        return SplitReport(False, mode, len(units), units[bad[0]].tolist())
    one = alg.one_flat
    good = (alg.mul_flat(lifted, lifted_inv) == one).all(axis=1) & (alg.mul_flat(lifted_inv, lifted) == one).all(axis=1)
    if not good.all():
        return SplitReport(False, mode, len(units), units[np.argmin(good)].tolist())
    # theta is multiplicative on random pairs of FG
    rng = _rng(seed, 6)
    a = rng.integers(0, p, size=(1000, alg.fp_dim))
    b = rng.integers(0, p, size=(1000, alg.fp_dim))
    lhs = theta.apply_flat(alg.mul_flat(a, b))
    rhs = fh.mul_flat(theta.apply_flat(a), theta.apply_flat(b))
    if not (lhs == rhs).all():
        return SplitReport(False, mode, len(units), ["theta not multiplicative"])
    return SplitReport(True, mode, len(units))


@dataclass
class RadicalReport:
    p: int
    k: int
    family: str
    n: int
    dim: int
    expected_dim: int
    nilpotency_index: int | None
    quotient_dim: int
    expected_quotient_dim: int
    kernel_is_omega: bool
    identifies_radical: bool

    @property
    def ok(self) -> bool:
        return (self.dim == self.expected_dim and self.nilpotency_index is not None
                and self.quotient_dim == self.expected_quotient_dim and self.kernel_is_omega)

    def to_json(self) -> dict:
        return asdict(self) | {"ok": self.ok}


def radical_verify(p: int, k: int, family: str, n: int, max_m: int | None = None) -> RadicalReport:
    """ker(theta) for the collapse onto F(G/K): dimension, nilpotency, and the
    quotient dimension. For p > 3 this kernel is J(FG); for p = 3 it is only
    certified nilpotent."""
    alg = algebra(p, k, family, n)
    g = alg.group
    K = collapse_subgroup(g, p)
    theta = theta_quotient(alg, K)
    ker = theta.kernel()
    omega = omega_basis(alg, K)
    nil = ideal_nilpotency(ker, max_m or g.order + 1)
    if p > 3:
        _, s = split_coprime(n, p)
        r = split_coprime(n, p)[0]
        exp_dim, exp_q = 12 * s * (p**r - 1), 12 * s
    else:
        exp_dim, exp_q = 8 * n, 4 * n
    return RadicalReport(p, k, family, n, ker.dim, exp_dim, nil, theta.image_dim(), exp_q,
                         ker == omega, p > 3)
