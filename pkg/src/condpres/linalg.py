"""Exact linear algebra over the rationals and the integers.

Only Python ints and ``fractions.Fraction`` are used; solvability questions
are decided exactly.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence


def solve_rational(rows: Sequence[Sequence], rhs: Sequence) -> list[Fraction] | None:
    """Solve ``rows @ x = rhs`` exactly.

    Returns one solution with every free variable set to 0, or ``None`` if
    the system is inconsistent.
    """
    n_rows = len(rows)
    n_cols = len(rows[0]) if n_rows else 0
    m = [[Fraction(v) for v in row] + [Fraction(b)] for row, b in zip(rows, rhs)]
    pivots = []
    r = 0
    for c in range(n_cols):
        piv = next((i for i in range(r, n_rows) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(n_rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == n_rows:
            break
    for i in range(r, n_rows):
        if m[i][n_cols] != 0:
            return None
    x = [Fraction(0)] * n_cols
    for i, c in enumerate(pivots):
        x[c] = m[i][n_cols]
    return x


def rank(rows: Sequence[Sequence]) -> int:
    if not rows:
        return 0
    return len(hermite_rows(rows))


def hermite_rows(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Row-style Hermite normal form; zero rows are dropped.

    The result is unique for the lattice spanned by ``rows``: pivots are
    positive, move strictly right, and entries above a pivot are reduced
    into ``[0, pivot)``.
    """
    a = [list(map(int, row)) for row in rows if any(row)]
    if not a:
        return []
    n_cols = len(a[0])
    p = 0
    for c in range(n_cols):
        if p == len(a):
            break
        while True:
            nz = [i for i in range(p, len(a)) if a[i][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(a[i][c]))
            a[p], a[best] = a[best], a[p]
            clean = True
            for i in range(p + 1, len(a)):
                if a[i][c] != 0:
                    q = a[i][c] // a[p][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[p])]
                    if a[i][c] != 0:
                        clean = False
            if clean:
                break
        if p < len(a) and a[p][c] != 0:
            if a[p][c] < 0:
                a[p] = [-x for x in a[p]]
            for i in range(p):
                q = a[i][c] // a[p][c]
                if q:
                    a[i] = [x - q * y for x, y in zip(a[i], a[p])]
            p += 1
    return [row for row in a if any(row)]


def integer_kernel(matrix: Sequence[Sequence[int]], n_cols: int | None = None) -> list[list[int]]:
    """Lattice basis of ``{x in Z^m : matrix @ x = 0}`` in Hermite normal form.

    Row-reduces ``[matrix^T | I]`` with unimodular operations; the identity
    parts of rows whose left block vanishes span the kernel.
    """
    rows = [list(map(int, r)) for r in matrix]
    m = n_cols if n_cols is not None else (len(rows[0]) if rows else 0)
    k = len(rows)
    aug = []
    for j in range(m):
        left = [rows[i][j] for i in range(k)]
        right = [1 if t == j else 0 for t in range(m)]
        aug.append(left + right)
    if k:
        aug = _echelon_prefix(aug, k)
    kernel = [row[k:] for row in aug if not any(row[:k])]
    return hermite_rows(kernel)


def _echelon_prefix(a: list[list[int]], k: int) -> list[list[int]]:
    # integer row echelon on the first k columns; keeps all rows
    p = 0
    for c in range(k):
        if p == len(a):
            break
        while True:
            nz = [i for i in range(p, len(a)) if a[i][c] != 0]
            if not nz:
                break
            best = min(nz, key=lambda i: abs(a[i][c]))
            a[p], a[best] = a[best], a[p]
            clean = True
            for i in range(p + 1, len(a)):
                if a[i][c] != 0:
                    q = a[i][c] // a[p][c]
                    a[i] = [x - q * y for x, y in zip(a[i], a[p])]
                    if a[i][c] != 0:
                        clean = False
            if clean:
                break
        if any(a[i][c] != 0 for i in range(p, len(a))):
            p += 1
    return a


def lattice_coordinates(basis: Sequence[Sequence[int]], v: Sequence[int]) -> list[int] | None:
    """Integer coefficients expressing ``v`` in a Hermite-form ``basis``, or None."""
    v = list(map(int, v))
    coeffs = []
    for row in basis:
        c = next(j for j, x in enumerate(row) if x != 0)
        if v[c] % row[c] != 0:
            return None
        q = v[c] // row[c]
        coeffs.append(q)
        if q:
            v = [x - q * y for x, y in zip(v, row)]
    if any(v):
        return None
    return coeffs
