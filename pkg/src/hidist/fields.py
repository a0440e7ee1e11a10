"""Exact linear algebra over prime fields F_p.

Matrices are numpy ``int64`` arrays holding residues in ``[0, p)``.  With
``p < 2**31`` every product of two residues fits in 63 bits, so reductions
never overflow.
"""
from __future__ import annotations

import numpy as np

MAX_PRIME = 2**31


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def check_prime(p: int) -> int:
    p = int(p)
    if not is_prime(p) or p > MAX_PRIME:
        raise ValueError(f"field characteristic must be a prime <= 2**31, got {p}")
    return p


def inverse(a: int, p: int) -> int:
    a %= p
    if a == 0:
        raise ZeroDivisionError("zero has no inverse")
    return pow(int(a), p - 2, p)


def as_field(a, p: int) -> np.ndarray:
    return np.asarray(a, dtype=np.int64) % p


def matmul(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Product of two residue matrices, reduced mod p.

    For small primes the float-free int64 ``@`` is safe; for large primes we
    accumulate one rank-1 update at a time so partial sums stay bounded.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"shape mismatch {a.shape} @ {b.shape}")
    if p <= 2**20 and a.shape[1] < 2**22:
        return (a @ b) % p
    out = np.zeros((a.shape[0], b.shape[1]), dtype=np.int64)
    for k in range(a.shape[1]):
        out = (out + np.outer(a[:, k], b[k, :]) % p) % p
    return out


def rref(a: np.ndarray, p: int) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = as_field(a, p).copy()
    rows, cols = m.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(m[r:, c])[0]
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        m[r] = (m[r] * inverse(int(m[r, c]), p)) % p
        others = np.nonzero(m[:, c])[0]
        for i in others:
            if i != r:
                m[i] = (m[i] - int(m[i, c]) * m[r]) % p
        pivots.append(c)
        r += 1
    return m, pivots


def rank(a: np.ndarray, p: int) -> int:
    a = np.asarray(a)
    if a.size == 0:
        return 0
    return len(rref(a, p)[1])


def nullspace(a: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning the kernel of ``a`` (shape ``(ncols, nullity)``)."""
    a = np.asarray(a, dtype=np.int64)
    rows, cols = a.shape
    if rows == 0:
        return np.eye(cols, dtype=np.int64)
    m, pivots = rref(a, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = (-m[i, f]) % p
    return basis


def independent_columns(a: np.ndarray, p: int) -> list[int]:
    """Indices of the leftmost maximal independent subset of columns."""
    a = np.asarray(a)
    if a.shape[0] == 0 or a.shape[1] == 0:
        return []
    return rref(a, p)[1]


def solve(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Solve ``a @ x = b`` for ``x`` when ``a`` has independent columns.

    Raises ``ValueError`` when some column of ``b`` is outside the column
    space of ``a``.
    """
    a = as_field(a, p)
    b = as_field(b, p)
    n = a.shape[1]
    if b.shape[1] == 0:
        return np.zeros((n, 0), dtype=np.int64)
    if n == 0:
        if np.any(b):
            raise ValueError("right-hand side not in column space")
        return np.zeros((0, b.shape[1]), dtype=np.int64)
    m, pivots = rref(np.hstack([a, b]), p)
    if any(c >= n for c in pivots):
        raise ValueError("right-hand side not in column space")
    if pivots != list(range(n)):
        raise ValueError("coefficient matrix has dependent columns")
    return m[:n, n:].copy()
