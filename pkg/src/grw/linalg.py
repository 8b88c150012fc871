"""Dense linear algebra over the prime field Z/p on integer numpy arrays.

Everything heavier than a handful of field operations goes through here:
algebras over GF(p^k) are handled by restriction of scalars to GF(p), so
only prime-field elimination is needed. Batched routines operate on a
leading stack axis.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .errors import SizeBound

_MAX_P = 1 << 28


def check_width(p: int, inner: int = 1):
    """Products of reduced entries summed over ``inner`` terms must fit int64."""
    if p >= _MAX_P or (p - 1) ** 2 * max(inner, 1) >= 2**62:
        raise SizeBound(f"p={p} too large for int64 elimination")


@lru_cache(maxsize=64)
def inverse_table(p: int) -> np.ndarray:
    """inv[a] = a^-1 mod p, inv[0] = 0."""
    if p > 1 << 20:
        raise SizeBound(f"no inverse table for p={p}")
    a = np.arange(p, dtype=np.int64)
    inv = np.zeros(p, dtype=np.int64)
    inv[1:] = [pow(int(x), p - 2, p) for x in a[1:]]
    return inv


def inverses(vals: np.ndarray, p: int) -> np.ndarray:
    if p <= 1 << 20:
        return inverse_table(p)[vals]
    flat = [pow(int(v), p - 2, p) if v else 0 for v in np.ravel(vals)]
    return np.array(flat, dtype=np.int64).reshape(np.shape(vals))


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    return (a @ b) % p


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form; returns (nonzero rows, pivot columns)."""
    m = np.array(a, dtype=np.int64) % p
    if m.ndim != 2:
        raise ValueError("rref expects a matrix")
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            m[[r, piv]] = m[[piv, r]]
        m[r] = m[r] * inverses(m[r, c], p) % p
        f = m[:, c].copy()
        f[r] = 0
        nzr = np.nonzero(f)[0]
        if nzr.size:
            m[nzr] = (m[nzr] - np.outer(f[nzr], m[r])) % p
        pivots.append(c)
        r += 1
    return m[:r], pivots


def rank(a: np.ndarray, p: int) -> int:
    if np.size(a) == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Basis (as rows) of {x : a @ x = 0}."""
    a = np.asarray(a, dtype=np.int64)
    cols = a.shape[1]
    r, piv = rref(a, p) if a.shape[0] else (np.zeros((0, cols), dtype=np.int64), [])
    free = [c for c in range(cols) if c not in set(piv)]
    basis = np.zeros((len(free), cols), dtype=np.int64)
    for i, fc in enumerate(free):
        basis[i, fc] = 1
        for row, pc in enumerate(piv):
            basis[i, pc] = -r[row, fc] % p
    return basis


def reduce_rows(x: np.ndarray, r: np.ndarray, pivots: list[int], p: int) -> np.ndarray:
    """Remainder of each row of x modulo the row space of an rref matrix r."""
    x = np.asarray(x, dtype=np.int64) % p
    if not pivots:
        return x
    return (x - x[..., pivots] @ r) % p


def in_span(x: np.ndarray, r: np.ndarray, pivots: list[int], p: int) -> np.ndarray:
    """Boolean per row of x: does it lie in the row space of r?"""
    return ~reduce_rows(x, r, pivots, p).any(axis=-1)


def same_row_space(a: np.ndarray, b: np.ndarray, p: int) -> bool:
    ra, rb = rank(a, p), rank(b, p)
    if ra != rb:
        return False
    if ra == 0:
        return True
    return rank(np.vstack([a, b]), p) == ra


def solve(m: np.ndarray, b: np.ndarray, p: int) -> np.ndarray | None:
    """Unique solution x of m @ x = b for square nonsingular m, else None."""
    n = m.shape[0]
    aug = np.hstack([np.asarray(m, dtype=np.int64), np.asarray(b, dtype=np.int64).reshape(n, -1)])
    r, piv = rref(aug, p)
    if piv[:n] != list(range(n)) or len(piv) > n:
        return None
    x = r[:n, n:]
    return x[:, 0] if np.ndim(b) == 1 else x


def batched_nonsingular(ms: np.ndarray, p: int) -> np.ndarray:
    """Nonsingularity of each matrix in a (N, D, D) stack."""
    m = np.array(ms, dtype=np.int64) % p
    n, d, _ = m.shape
    ok = np.ones(n, dtype=bool)
    idx = np.arange(n)
    for c in range(d):
        nz = m[:, c:, c] != 0
        ok &= nz.any(axis=1)
        piv = c + nz.argmax(axis=1)
        swap = piv != c
        if swap.any():
            s = idx[swap]
            rows_c = m[s, c, c:].copy()
            m[s, c, c:] = m[s, piv[swap], c:]
            m[s, piv[swap], c:] = rows_c
        if c + 1 == d:
            break
        scale = inverses(m[:, c, c], p)
        pivrow = m[:, c, c + 1:] * scale[:, None] % p
        f = m[:, c + 1:, c]
        m[:, c + 1:, c + 1:] = (m[:, c + 1:, c + 1:] - f[:, :, None] * pivrow[:, None, :]) % p
    return ok


def batched_solve(ms: np.ndarray, b: np.ndarray, p: int) -> tuple[np.ndarray, np.ndarray]:
    """Solve ms[i] @ x[i] = b for a shared right-hand side b (length D).

    Returns (ok, x): ok marks nonsingular systems; x rows for singular
    systems are meaningless.
    """
    m = np.array(ms, dtype=np.int64) % p
    n, d, _ = m.shape
    aug = np.concatenate([m, np.broadcast_to(np.asarray(b, dtype=np.int64).reshape(1, d, 1), (n, d, 1))], axis=2)
    aug = aug.copy()
    ok = np.ones(n, dtype=bool)
    idx = np.arange(n)
    for c in range(d):
        nz = aug[:, c:, c] != 0
        ok &= nz.any(axis=1)
        piv = c + nz.argmax(axis=1)
        swap = piv != c
        if swap.any():
            s = idx[swap]
            rows_c = aug[s, c].copy()
            aug[s, c] = aug[s, piv[swap]]
            aug[s, piv[swap]] = rows_c
        scale = inverses(aug[:, c, c], p)
        aug[:, c] = aug[:, c] * scale[:, None] % p
        f = aug[:, :, c].copy()
        f[:, c] = 0
        aug = (aug - f[:, :, None] * aug[:, c][:, None, :]) % p
    return ok, aug[:, :, d]
