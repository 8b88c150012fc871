"""Group algebras FG over GF(p^k).

An element stores its coefficients as an integer array of shape (|G|, k):
row g holds the coefficient of g as a vector over GF(p). Flattened, this is
the restriction of scalars of FG to a GF(p)-space of dimension |G|*k, and
all linear algebra (products, inverses, ideals, kernels) happens there.
Dimensions over F are GF(p)-dimensions divided by k.
"""

from __future__ import annotations

from functools import cached_property
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import linalg
from .errors import CtxMismatch, GroupMismatch, NotSubgroup
from .ffield import FieldCtx, FieldElem, field_make
from .groups import Elem, Group, GroupSpec, Quotient, group_make, quotient


class GroupAlgebra:
    """The algebra F[G]; holds the index maps shared by its elements."""

    def __init__(self, field: FieldCtx, group: Group):
        self.field = field
        self.group = group
        self.p = field.p
        self.k = field.k
        self.dim = group.order  # over F
        self.fp_dim = group.order * field.k
        linalg.check_width(self.p, self.fp_dim)
        g = group
        inv = g.inverse_indices
        # left[w, h] = index of w h^-1, so (uv)_w = sum_h u_{w h^-1} v_h
        self._left = g.mul_indices(np.arange(g.order)[:, None], inv[None, :])

    def __repr__(self):
        return f"{self.field!r}[{self.group.spec.family}, n={self.group.spec.n}]"

    def __eq__(self, other):
        return isinstance(other, GroupAlgebra) and other.field == self.field and other.group == self.group

    def __hash__(self):
        return hash((self.field, self.group))

    # constructors ----------------------------------------------------------------
    def element(self, coeffs) -> AlgElem:
        """From a mapping {group element: scalar} or an array of shape (|G|, k)
        (or (|G|,) when k = 1). Scalars may be ints or FieldElems."""
        if isinstance(coeffs, Mapping):
            arr = np.zeros((self.dim, self.k), dtype=np.int64)
            for g, c in coeffs.items():
                arr[self.group.index(g)] = (arr[self.group.index(g)] + self._scalar(c)) % self.p
            return AlgElem(self, arr)
        arr = np.asarray(coeffs, dtype=np.int64)
        if arr.ndim == 1 and self.k == 1:
            arr = arr[:, None]
        if arr.shape != (self.dim, self.k):
            raise ValueError(f"coefficient array must have shape {(self.dim, self.k)}")
        return AlgElem(self, arr % self.p)

    def _scalar(self, c) -> np.ndarray:
        if isinstance(c, FieldElem):
            self.field._check(c)
            return np.array(c.coeffs, dtype=np.int64)
        return np.array(self.field.elem(c).coeffs, dtype=np.int64)

    def zero(self) -> AlgElem:
        return AlgElem(self, np.zeros((self.dim, self.k), dtype=np.int64))

    def one(self) -> AlgElem:
        return self.basis(self.group.identity)

    def basis(self, g: Elem, c=1) -> AlgElem:
        return self.element({g: c})

    def word(self, **exps: int) -> AlgElem:
        return self.basis(self.group.word(**exps))

    def gen(self, name: str) -> AlgElem:
        return self.basis(self.group.gen(name))

    def scalar(self, c) -> AlgElem:
        return self.basis(self.group.identity, c)

    def random(self, rng: np.random.Generator) -> AlgElem:
        return AlgElem(self, rng.integers(0, self.p, size=(self.dim, self.k)))

    def from_flat(self, flat: np.ndarray) -> AlgElem:
        return AlgElem(self, np.asarray(flat, dtype=np.int64).reshape(self.dim, self.k) % self.p)

    # batched kernels on flat GF(p) vectors of length fp_dim ---------------------------
    def left_matrices(self, flat: np.ndarray) -> np.ndarray:
        """Matrices of left multiplication for a (N, fp_dim) stack."""
        n = flat.shape[0]
        c = flat.reshape(n, self.dim, self.k)[:, self._left]  # (N, w, h, a)
        if self.k == 1:
            return c[..., 0]
        m = np.einsum("nwha,acb->nwchb", c, self.field.mul_tensor) % self.p
        return m.reshape(n, self.fp_dim, self.fp_dim)

    def left_matrix(self, flat: np.ndarray) -> np.ndarray:
        return self.left_matrices(np.asarray(flat)[None])[0]

    def mul_flat(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Row-wise products of two (N, fp_dim) stacks."""
        a = np.atleast_2d(a)
        b = np.atleast_2d(b)
        if self.k == 1:
            # (ab)_w = sum_h a_{w h^-1} b_h
            return np.einsum("nwh,nh->nw", a[:, self._left], b) % self.p
        return np.einsum("nij,nj->ni", self.left_matrices(a), b) % self.p

    def mul_outer(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """All products a_i b_j for stacks (N, D), (M, D) -> (N, M, D)."""
        lm = self.left_matrices(np.atleast_2d(a))
        return np.einsum("nij,mj->nmi", lm, np.atleast_2d(b)) % self.p

    @cached_property
    def one_flat(self) -> np.ndarray:
        return self.one().flat

    # hashing of elements by base-p odometer codes -----------------------------------
    @cached_property
    def _place(self) -> np.ndarray:
        return np.array([self.p**i for i in range(self.fp_dim)], dtype=object)

    def codes(self, flat: np.ndarray) -> np.ndarray:
        """Integer code per row; odometer order with coordinate 0 least significant."""
        flat = np.atleast_2d(flat)
        if self.p**self.fp_dim < 2**63:
            place = np.array([self.p**i for i in range(self.fp_dim)], dtype=np.int64)
            return flat @ place
        return flat.astype(object) @ self._place

    def from_codes(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        out = np.empty((codes.size, self.fp_dim), dtype=np.int64)
        c = codes.copy()
        for i in range(self.fp_dim):
            c, out[:, i] = np.divmod(c, self.p)
        return out


class AlgElem:
    """An element of a GroupAlgebra. Treat as immutable."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: GroupAlgebra, coeffs: np.ndarray):
        self.algebra = algebra
        self.coeffs = coeffs
        coeffs.setflags(write=False)

    @property
    def ctx(self) -> FieldCtx:
        return self.algebra.field

    @property
    def grp(self) -> Group:
        return self.algebra.group

    @property
    def flat(self) -> np.ndarray:
        return self.coeffs.reshape(-1)

    def coeff(self, g: Elem) -> FieldElem:
        return self.ctx.elem(self.coeffs[self.grp.index(g)])

    def support(self) -> list[Elem]:
        return [self.grp.elements[i] for i in np.nonzero(self.coeffs.any(axis=1))[0]]

    def _same(self, other: AlgElem):
        if not isinstance(other, AlgElem):
            raise TypeError(f"expected AlgElem, got {type(other).__name__}")
        if other.algebra is self.algebra:
            return
        if other.ctx != self.ctx:
            raise CtxMismatch(f"{other.ctx!r} vs {self.ctx!r}")
        if other.grp != self.grp:
            raise GroupMismatch(f"{other.grp!r} vs {self.grp!r}")

    def _coerce(self, other) -> AlgElem:
        if isinstance(other, AlgElem):
            self._same(other)
            return other
        return self.algebra.scalar(other)

    def __add__(self, other):
        other = self._coerce(other)
        return AlgElem(self.algebra, (self.coeffs + other.coeffs) % self.algebra.p)

    __radd__ = __add__

    def __neg__(self):
        return AlgElem(self.algebra, -self.coeffs % self.algebra.p)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        return alg_mul(self, other)

    def __rmul__(self, other):
        return alg_mul(self._coerce(other), self)

    def __pow__(self, m: int):
        if m < 0:
            inv = try_inverse(self)
            if inv is None:
                raise ZeroDivisionError("not a unit")
            return inv ** (-m)
        out, base = self.algebra.one(), self
        while m:
            if m & 1:
                out = out * base
            base = base * base
            m >>= 1
        return out

    def __eq__(self, other):
        if isinstance(other, AlgElem):
            return other.algebra == self.algebra and np.array_equal(other.coeffs, self.coeffs)
        if isinstance(other, (int, FieldElem)):
            return self == self.algebra.scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.algebra, self.coeffs.tobytes()))

    def __bool__(self):
        return bool(self.coeffs.any())

    def __repr__(self):
        terms = []
        for g in self.support():
            c = self.coeff(g)
            mono = "*".join(
                (nm if e == 1 else f"{nm}^{e}") for nm, e in zip(self.grp.gen_names, g) if e
            ) or "1"
            cs = repr(c)
            if mono == "1":
                terms.append(cs)
            else:
                terms.append(mono if cs == "1" else f"({cs})*{mono}" if "+" in cs else f"{cs}*{mono}")
        return " + ".join(terms) or "0"

    def to_json(self) -> dict:
        return to_json(self)


# -- operations ---------------------------------------------------------------------

def alg_mul(u: AlgElem, v: AlgElem) -> AlgElem:
    """Convolution product: (uv)_w = sum over gh = w of u_g v_h."""
    u._same(v)
    alg = u.algebra
    return alg.from_flat(alg.mul_flat(u.flat, v.flat)[0])


def alg_add(u: AlgElem, v: AlgElem) -> AlgElem:
    return u + v


def alg_scale(u: AlgElem, c) -> AlgElem:
    return u * u.algebra.scalar(c)


def augmentation(u: AlgElem) -> FieldElem:
    return u.ctx.elem(u.coeffs.sum(axis=0) % u.algebra.p)


def group_sum(alg: GroupAlgebra, members: Iterable[Elem]) -> AlgElem:
    """Sum of the elements of a finite subgroup."""
    members = list(dict.fromkeys(members))
    ms = set(members)
    g = alg.group
    for a in members:
        for b in members:
            if g.mul(a, b) not in ms:
                raise NotSubgroup(f"{a} * {b} leaves the set")
    return alg.element({m: 1 for m in members})


def regular_rep(u: AlgElem) -> np.ndarray:
    """Left regular representation, written over the prime field.

    Column (h, b) is the coefficient vector of u * (t^b h). For k = 1 this
    is the |G| x |G| matrix over F; for k > 1 it is the restriction to
    GF(p), a |G|k x |G|k matrix that is nonsingular iff the F-matrix is.
    """
    return u.algebra.left_matrix(u.flat)


def try_inverse(u: AlgElem) -> AlgElem | None:
    """The inverse of u, or None when u is not a unit."""
    alg = u.algebra
    x = linalg.solve(regular_rep(u), alg.one_flat, alg.p)
    return None if x is None else alg.from_flat(x)


def is_unit(u: AlgElem) -> bool:
    return bool(linalg.batched_nonsingular(regular_rep(u)[None], u.algebra.p)[0])


# -- ideals ---------------------------------------------------------------------------

class Ideal:
    """A two-sided ideal, stored as the rref GF(p)-basis of its restriction
    of scalars (an F-subspace is a GF(p)-subspace stable under t)."""

    def __init__(self, algebra: GroupAlgebra, rows: np.ndarray, check: bool = True):
        self.algebra = algebra
        rows = np.asarray(rows, dtype=np.int64).reshape(-1, algebra.fp_dim)
        self.rows, self.pivots = linalg.rref(rows, algebra.p) if len(rows) else (rows, [])
        if check:
            self._check_closure()

    @classmethod
    def generated_by(cls, algebra: GroupAlgebra, gens: Iterable[AlgElem], check=True) -> Ideal:
        """F-span of gens (not the ideal they generate)."""
        return cls(algebra, f_span_rows(algebra, [g.flat for g in gens]), check=check)

    @property
    def fp_dim(self) -> int:
        return len(self.pivots)

    @property
    def dim(self) -> int:
        return self.fp_dim // self.algebra.k

    @property
    def basis(self) -> list[AlgElem]:
        """An F-basis."""
        alg = self.algebra
        chosen: list[np.ndarray] = []
        span = np.zeros((0, alg.fp_dim), dtype=np.int64)
        piv: list[int] = []
        for row in self.rows:
            if span.shape[0] and linalg.in_span(row[None], span, piv, alg.p)[0]:
                continue
            chosen.append(row)
            span, piv = linalg.rref(f_span_rows(alg, chosen), alg.p)
        return [alg.from_flat(r) for r in chosen]

    def contains(self, u: AlgElem) -> bool:
        if self.fp_dim == 0:
            return not u
        return bool(linalg.in_span(u.flat[None], self.rows, self.pivots, self.algebra.p)[0])

    def contains_flat(self, flat: np.ndarray) -> np.ndarray:
        if self.fp_dim == 0:
            return ~np.atleast_2d(flat).any(axis=1)
        return linalg.in_span(np.atleast_2d(flat), self.rows, self.pivots, self.algebra.p)

    def __eq__(self, other):
        return isinstance(other, Ideal) and other.algebra == self.algebra and \
            linalg.same_row_space(self.rows, other.rows, self.algebra.p)

    def __mul__(self, other: Ideal) -> Ideal:
        """Product ideal: span of all products a*b."""
        alg = self.algebra
        if self.fp_dim == 0 or other.fp_dim == 0:
            return Ideal(alg, np.zeros((0, alg.fp_dim)), check=False)
        prods = alg.mul_outer(self.rows, other.rows).reshape(-1, alg.fp_dim)
        return Ideal(alg, prods, check=False)

    def __repr__(self):
        return f"Ideal(dim={self.dim} in {self.algebra!r})"

    def _check_closure(self):
        alg = self.algebra
        if self.fp_dim == 0:
            return
        g = alg.group
        mults = [alg.gen(nm).flat for nm in g.gen_names if g.radices[g.gen_names.index(nm)] > 1]
        mults = np.array(mults, dtype=np.int64).reshape(-1, alg.fp_dim)
        left = alg.mul_outer(mults, self.rows).reshape(-1, alg.fp_dim) if len(mults) else self.rows[:0]
        right = alg.mul_outer(self.rows, mults).reshape(-1, alg.fp_dim) if len(mults) else self.rows[:0]
        scal = f_span_rows(alg, list(self.rows))
        for block in (left, right, scal):
            if len(block) and not self.contains_flat(block).all():
                raise ValueError("span is not a two-sided F-ideal")


def f_span_rows(alg: GroupAlgebra, flats: Sequence[np.ndarray]) -> np.ndarray:
    """GF(p)-spanning rows of the F-span: each vector times t^a, a < k."""
    if not flats:
        return np.zeros((0, alg.fp_dim), dtype=np.int64)
    vecs = np.array(flats, dtype=np.int64).reshape(-1, alg.dim, alg.k)
    mt = alg.field.mul_tensor  # (a, c, b)
    scaled = np.einsum("acb,nhb->anhc", mt, vecs) % alg.p
    return scaled.reshape(-1, alg.fp_dim)


def zero_ideal(alg: GroupAlgebra) -> Ideal:
    return Ideal(alg, np.zeros((0, alg.fp_dim)), check=False)


def omega_basis(alg: GroupAlgebra, members: Sequence[Elem]) -> Ideal:
    """omega(K): F-span of (k - 1) t over k in K \\ {e} and t in a transversal."""
    from .groups import normal_cosets

    cos = normal_cosets(alg.group, members)
    one = alg.one()
    gens = []
    for block in cos.cosets:
        t = alg.basis(block[0])
        for kk in cos.subgroup:
            if kk != alg.group.identity:
                gens.append((alg.basis(kk) - one) * t)
    return Ideal.generated_by(alg, gens)


def augmentation_ideal(alg: GroupAlgebra) -> Ideal:
    return omega_basis(alg, alg.group.elements)


def ideal_nilpotency(ideal: Ideal, max_m: int = 64) -> int | None:
    """Least m <= max_m with ideal^m = 0, or None if there is none."""
    power = ideal
    m = 1
    while power.fp_dim:
        if m >= max_m:
            return None
        power = power * ideal
        m += 1
    return m


# -- the quotient map theta -------------------------------------------------------------

class ThetaMap:
    """The algebra map FG -> F(G/K) collapsing coefficients over cosets, with
    the section induced by a complement of K (when one exists)."""

    def __init__(self, source: GroupAlgebra, quot: Quotient):
        self.source = source
        self.quotient = quot
        self.target = GroupAlgebra(source.field, quot.target)

    @property
    def matrix(self) -> np.ndarray:
        """GF(p)-matrix of theta, shape (|H|k, |G|k)."""
        s, t, k = self.source, self.target, self.source.k
        m = np.zeros((t.fp_dim, s.fp_dim), dtype=np.int64)
        for gi, hi in enumerate(self.quotient.proj):
            for b in range(k):
                m[hi * k + b, gi * k + b] = 1
        return m

    def apply_flat(self, flat: np.ndarray) -> np.ndarray:
        flat = np.atleast_2d(flat)
        n = flat.shape[0]
        c = flat.reshape(n, self.source.dim, self.source.k)
        out = np.zeros((n, self.target.dim, self.source.k), dtype=np.int64)
        np.add.at(out, (slice(None), self.quotient.proj), c)
        return (out % self.source.p).reshape(n, self.target.fp_dim)

    def __call__(self, u: AlgElem) -> AlgElem:
        if u.algebra != self.source:
            raise GroupMismatch("theta applied outside its source algebra")
        return self.target.from_flat(self.apply_flat(u.flat)[0])

    @property
    def has_section(self) -> bool:
        return self.quotient.section is not None

    def section_flat(self, flat: np.ndarray) -> np.ndarray:
        if self.quotient.section is None:
            raise ValueError("K has no complement; no section")
        flat = np.atleast_2d(flat)
        n = flat.shape[0]
        c = flat.reshape(n, self.target.dim, self.source.k)
        out = np.zeros((n, self.source.dim, self.source.k), dtype=np.int64)
        out[:, self.quotient.section] = c
        return out.reshape(n, self.source.fp_dim)

    def section(self, h: AlgElem) -> AlgElem:
        if h.algebra != self.target:
            raise GroupMismatch("section applied outside the quotient algebra")
        return self.source.from_flat(self.section_flat(h.flat)[0])

    def kernel(self) -> Ideal:
        return Ideal(self.source, linalg.nullspace(self.matrix, self.source.p))

    def image_dim(self) -> int:
        return linalg.rank(self.matrix, self.source.p) // self.source.k


def theta_quotient(alg: GroupAlgebra, members: Sequence[Elem]) -> ThetaMap:
    return ThetaMap(alg, quotient(alg.group, members))


# -- convenience -------------------------------------------------------------

def algebra(p: int, k: int, family: str, n: int = 1, **group_kw) -> GroupAlgebra:
    return GroupAlgebra(field_make(p, k), group_make(GroupSpec(family, n), **group_kw))


def to_json(u: AlgElem) -> dict:
    f, g = u.ctx, u.grp
    return {
        "p": f.p, "k": f.k, "modulus": list(f.modulus),
        "family": g.spec.family, "n": g.spec.n,
        "elements": [list(e) for e in g.elements],
        "coeffs": u.coeffs.tolist(),
    }


def from_json(data: dict) -> AlgElem:
    alg = algebra(data["p"], data["k"], data["family"], data["n"])
    if list(alg.field.modulus) != list(data["modulus"]):
        raise CtxMismatch("serialized modulus differs from this build's field")
    coeffs = np.zeros((alg.dim, alg.k), dtype=np.int64)
    order = data.get("elements")
    for i, c in enumerate(data["coeffs"]):
        idx = alg.group.index(tuple(order[i])) if order else i
        coeffs[idx] = c
    return alg.element(coeffs)
