"""Exact arithmetic substrate: GF(p) ranks, integer determinants, cube roots.

Matrices over GF(p) are numpy int64 arrays with entries reduced into [0, p);
products of two reduced entries stay far below 2**63, so elimination never
overflows.  Exact work uses Python integers throughout.
"""

from __future__ import annotations

import numpy as np

DEFAULT_PRIME = 32003
# Second prime for re-running probabilistic verdicts.  65521 is rejected
# because 65521 = 1 (mod 3) kills the unique-cube-root trick.
SECOND_PRIME = 46337

# Exact determinants are only meaningful at pairing-matrix scale.
MAX_EXACT_DET_SIZE = 64


class NotACube(ValueError):
    """An integer that was expected to be a perfect cube is not one."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    for q in (2, 3):
        if n % q == 0:
            return n == q
    f = 5
    while f * f <= n:
        if n % f == 0 or n % (f + 2) == 0:
            return False
        f += 6
    return True


def validate_prime(p: int, *, cube_roots: bool = False) -> int:
    """Check that p is an odd prime (and p = 2 mod 3 when cube roots are needed)."""
    if p <= 2 or not is_prime(p):
        raise ValueError(f"modulus {p} is not an odd prime")
    if cube_roots and p % 3 != 2:
        raise ValueError(f"prime {p} is not 2 mod 3; cube roots are not unique")
    return p


def _as_mod_matrix(mat, p: int) -> np.ndarray:
    A = np.asarray(mat)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if A.dtype == object:
        # Python big integers: reduce first, then narrow.
        return (A % p).astype(np.int64)
    return np.array(A, dtype=np.int64) % p


def rank_mod_p(mat, p: int = DEFAULT_PRIME) -> int:
    """Rank of a dense matrix over GF(p) by row reduction with partial pivoting.

    Only rows with a nonzero entry in the pivot column are updated, which
    makes stacks containing many unit rows (coordinate spans) cheap.
    """
    A = _as_mod_matrix(mat, p)
    m, n = A.shape
    r = 0
    for c in range(n):
        if r == m:
            break
        col = A[r:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            A[[r, i]] = A[[i, r]]
        inv = pow(int(A[r, c]), -1, p)
        row = (A[r, c:] * inv) % p
        A[r, c:] = row
        below = A[r + 1 :, c]
        hit = np.flatnonzero(below)
        if hit.size:
            idx = hit + r + 1
            A[idx, c:] = (A[idx, c:] - below[hit, None] * row) % p
        r += 1
    return r


def _int_rows(mat) -> list[list[int]]:
    rows = [[int(x) for x in row] for row in mat]
    if rows and any(len(row) != len(rows[0]) for row in rows):
        raise ValueError("ragged matrix")
    return rows


def rank_exact(mat) -> int:
    """Rank over the rationals via fraction-free (Bareiss) elimination."""
    rows = _int_rows(mat)
    m = len(rows)
    n = len(rows[0]) if m else 0
    r = 0
    prev = 1
    for c in range(n):
        piv = next((i for i in range(r, m) if rows[i][c]), None)
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        a = rows[r][c]
        for i in range(r + 1, m):
            b = rows[i][c]
            ri, rc = rows[i], rows[r]
            for j in range(c + 1, n):
                ri[j] = (a * ri[j] - b * rc[j]) // prev
            ri[c] = 0
        prev = a
        r += 1
        if r == m:
            break
    return r


def det_exact(mat) -> int:
    """Exact determinant of an integer matrix, fraction-free elimination.

    Sizes above MAX_EXACT_DET_SIZE are refused; nothing in scope needs them.
    """
    rows = _int_rows(mat)
    n = len(rows)
    if any(len(row) != n for row in rows):
        raise ValueError("determinant of a non-square matrix")
    if n > MAX_EXACT_DET_SIZE:
        raise ValueError(f"exact determinant limited to {MAX_EXACT_DET_SIZE}x{MAX_EXACT_DET_SIZE}")
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for c in range(n - 1):
        piv = next((i for i in range(c, n) if rows[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            rows[c], rows[piv] = rows[piv], rows[c]
            sign = -sign
        a = rows[c][c]
        for i in range(c + 1, n):
            b = rows[i][c]
            ri, rc = rows[i], rows[c]
            for j in range(c + 1, n):
                ri[j] = (a * ri[j] - b * rc[j]) // prev
            ri[c] = 0
        prev = a
    return sign * rows[n - 1][n - 1]


def det_mod_p(mat, p: int = DEFAULT_PRIME) -> int:
    """Determinant over GF(p): product of pivots from plain row reduction."""
    A = _as_mod_matrix(mat, p)
    m, n = A.shape
    if m != n:
        raise ValueError("determinant of a non-square matrix")
    det = 1
    for c in range(n):
        col = A[c:, c]
        nz = np.flatnonzero(col)
        if nz.size == 0:
            return 0
        i = c + int(nz[0])
        if i != c:
            A[[c, i]] = A[[i, c]]
            det = p - det
        piv = int(A[c, c])
        det = det * piv % p
        inv = pow(piv, -1, p)
        row = (A[c, c:] * inv) % p
        below = A[c + 1 :, c]
        hit = np.flatnonzero(below)
        if hit.size:
            idx = hit + c + 1
            A[idx, c:] = (A[idx, c:] - below[hit, None] * row) % p
    return det % p


def cube_root_mod_p(c: int, p: int = DEFAULT_PRIME) -> int:
    """The unique cube root of c modulo p, for p = 2 (mod 3).

    Cubing is a bijection on GF(p) in this case, inverted by x -> x**e with
    e = 3^(-1) mod (p-1).
    """
    validate_prime(p, cube_roots=True)
    e = pow(3, -1, p - 1)
    return pow(c % p, e, p)


def integer_cube_root_signed(c: int) -> int:
    """Exact signed cube root of a perfect cube; raises NotACube otherwise."""
    c = int(c)
    if c == 0:
        return 0
    a = abs(c)
    x = 1 << ((a.bit_length() + 2) // 3)
    while True:
        nx = (2 * x + a // (x * x)) // 3
        if nx >= x:
            break
        x = nx
    for cand in (x - 1, x, x + 1):
        if cand >= 0 and cand**3 == a:
            return -cand if c < 0 else cand
    raise NotACube(f"{c} is not a perfect cube")
