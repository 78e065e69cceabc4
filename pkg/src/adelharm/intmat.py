"""Integer matrix routines: Smith normal form, integer kernels, linear solves.

Matrices are plain lists of lists of Python ints (row-major).  Results of the
Smith form are cached on the matrix contents, since the same relation matrices
come back again and again when quotient groups are rebuilt.
"""

from __future__ import annotations

from functools import lru_cache
from typing import NamedTuple, Sequence

Matrix = list[list[int]]


class SNF(NamedTuple):
    U: Matrix
    D: Matrix
    V: Matrix
    Uinv: Matrix
    diagonal: tuple[int, ...]
    rank: int


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> Matrix:
    return [[0] * c for _ in range(r)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]]) -> Matrix:
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    out = []
    for row in A:
        out.append([sum(row[k] * B[k][j] for k in range(inner)) for j in range(cols)])
    return out


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> list[int]:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def transpose(A: Sequence[Sequence[int]], ncols: int | None = None) -> Matrix:
    if not A:
        return [[] for _ in range(ncols or 0)]
    return [list(col) for col in zip(*A)]


def _freeze(M: Sequence[Sequence[int]]) -> tuple[tuple[int, ...], ...]:
    return tuple(tuple(int(v) for v in row) for row in M)


def smith_normal_form(M: Sequence[Sequence[int]], ncols: int | None = None) -> SNF:
    """Return unimodular U, V and diagonal D with ``U @ M @ V == D``.

    The diagonal entries are non-negative and each divides the next.  ``ncols``
    is only needed for matrices with zero rows.
    """
    frozen = _freeze(M)
    c = len(frozen[0]) if frozen else (ncols or 0)
    return _snf_cached(frozen, c)


@lru_cache(maxsize=8192)
def _snf_cached(M: tuple[tuple[int, ...], ...], c: int) -> SNF:
    A = [list(row) for row in M]
    r = len(A)
    U = identity(r)
    Uinv = identity(r)
    V = identity(c)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]
        for row in Uinv:
            row[i], row[j] = row[j], row[i]

    def swap_cols(i, j):
        for row in A:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):
        # row_dst += q * row_src
        Ad, As = A[dst], A[src]
        for k in range(c):
            if As[k]:
                Ad[k] += q * As[k]
        Ud, Us = U[dst], U[src]
        for k in range(r):
            if Us[k]:
                Ud[k] += q * Us[k]
        for row in Uinv:
            if row[dst]:
                row[src] -= q * row[dst]

    def add_col(dst, src, q):
        for row in A:
            if row[src]:
                row[dst] += q * row[src]
        for row in V:
            if row[src]:
                row[dst] += q * row[src]

    t = 0
    limit = min(r, c)
    while t < limit:
        piv = None
        best = 0
        for i in range(t, r):
            Ai = A[i]
            for j in range(t, c):
                v = Ai[j]
                if v and (piv is None or abs(v) < best):
                    piv, best = (i, j), abs(v)
                    if best == 1:
                        break
            if best == 1:
                break
        if piv is None:
            break
        if piv[0] != t:
            swap_rows(t, piv[0])
        if piv[1] != t:
            swap_cols(t, piv[1])
        p = A[t][t]
        clean = True
        for i in range(t + 1, r):
            if A[i][t]:
                q = A[i][t] // p
                if q:
                    add_row(i, t, -q)
                if A[i][t]:
                    clean = False
        for j in range(t + 1, c):
            if A[t][j]:
                q = A[t][j] // p
                if q:
                    add_col(j, t, -q)
                if A[t][j]:
                    clean = False
        if not clean:
            continue
        bad = None
        for i in range(t + 1, r):
            if any(A[i][j] % p for j in range(t + 1, c)):
                bad = i
                break
        if bad is not None:
            add_row(t, bad, 1)
            continue
        if p < 0:
            A[t] = [-v for v in A[t]]
            U[t] = [-v for v in U[t]]
            for row in Uinv:
                row[t] = -row[t]
        t += 1
    diag = tuple(A[i][i] for i in range(limit))
    rank = sum(1 for d in diag if d)
    return SNF(U, A, V, Uinv, diag, rank)


def integer_kernel(M: Sequence[Sequence[int]], ncols: int) -> Matrix:
    """Basis of ``{x in Z^ncols : M x = 0}`` as a list of column vectors."""
    if not M:
        return identity(ncols)
    snf = smith_normal_form(M, ncols)
    return [[snf.V[i][j] for i in range(ncols)] for j in range(snf.rank, ncols)]


def solve(M: Sequence[Sequence[int]], b: Sequence[int], ncols: int) -> list[int] | None:
    """One integer solution of ``M x = b``, or None when there is none."""
    if not M:
        return [0] * ncols
    snf = smith_normal_form(M, ncols)
    y = matvec(snf.U, b)
    x = [0] * ncols
    for i, yi in enumerate(y):
        d = snf.diagonal[i] if i < len(snf.diagonal) else 0
        if d == 0:
            if yi != 0:
                return None
        else:
            if yi % d:
                return None
            x[i] = yi // d
    return matvec(snf.V, x)


def determinant(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant by fraction-free Bareiss elimination."""
    n = len(M)
    A = [list(row) for row in M]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if A[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if A[i][k]), None)
            if swap is None:
                return 0
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1] if n else 1
