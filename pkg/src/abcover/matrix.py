"""Exact integer matrix routines.

Matrices are plain lists of lists of Python ints (row-major), so every
entry is arbitrary precision.  Nothing here ever touches floating point.
"""

from __future__ import annotations

from typing import Sequence

Matrix = list[list[int]]
Vector = list[int]


def zeros(rows: int, cols: int) -> Matrix:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Matrix:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def copy(M: Sequence[Sequence[int]]) -> Matrix:
    return [list(map(int, row)) for row in M]


def shape(M: Sequence[Sequence[int]], cols: int | None = None) -> tuple[int, int]:
    if not M:
        return 0, (cols or 0)
    return len(M), len(M[0])


def transpose(M: Sequence[Sequence[int]], cols: int = 0) -> Matrix:
    if not M:
        return [[] for _ in range(cols)]
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]], inner: int | None = None) -> Matrix:
    """Product A·B.  ``inner`` disambiguates shapes when A has no columns."""
    if not A:
        return []
    n = len(A[0]) if inner is None else inner
    cols = len(B[0]) if B else 0
    if n == 0:
        return zeros(len(A), cols)
    Bt = transpose(B)
    return [[sum(a * b for a, b in zip(row, col)) for col in Bt] for row in A]


def matvec(A: Sequence[Sequence[int]], x: Sequence[int]) -> Vector:
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def det(M: Sequence[Sequence[int]]) -> int:
    """Exact determinant via fraction-free (Bareiss) elimination."""
    A = copy(M)
    n = len(A)
    if any(len(row) != n for row in A):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k] != 0:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


def snf(M: Sequence[Sequence[int]], cols: int | None = None) -> tuple[Matrix, Matrix, Matrix]:
    """Smith normal form.

    Returns ``(U, D, V)`` with ``U·M·V == D``, both U and V unimodular and
    D diagonal with non-negative entries d_1 | d_2 | ... (zeros last).
    Pivots are chosen by smallest absolute value.

    >>> U, D, V = snf([[2, 4], [6, 8]])
    >>> D
    [[2, 0], [0, 4]]
    """
    return snf_full(M, cols)[:3]


def snf_full(M: Sequence[Sequence[int]], cols: int | None = None) -> tuple[Matrix, Matrix, Matrix, Matrix]:
    """Smith normal form ``(U, D, V)`` together with V^{-1}."""
    A = copy(M)
    r = len(A)
    c = len(A[0]) if A else (cols or 0)
    U = identity(r)
    V = identity(c)
    Vinv = identity(c)

    def swap_rows(i: int, j: int) -> None:
        if i != j:
            A[i], A[j] = A[j], A[i]
            U[i], U[j] = U[j], U[i]

    def swap_cols(i: int, j: int) -> None:
        if i != j:
            for row in A:
                row[i], row[j] = row[j], row[i]
            for row in V:
                row[i], row[j] = row[j], row[i]
            Vinv[i], Vinv[j] = Vinv[j], Vinv[i]

    def add_row(dst: int, src: int, q: int) -> None:
        # row_dst += q * row_src
        if q:
            A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
            U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst: int, src: int, q: int) -> None:
        if q:
            for row in A:
                row[dst] += q * row[src]
            for row in V:
                row[dst] += q * row[src]
            Vinv[src] = [a - q * b for a, b in zip(Vinv[src], Vinv[dst])]

    for t in range(min(r, c)):
        best = None
        for i in range(t, r):
            for j in range(t, c):
                if A[i][j] and (best is None or abs(A[i][j]) < abs(A[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        swap_rows(t, best[0])
        swap_cols(t, best[1])
        while True:
            p = A[t][t]
            clean = True
            for i in range(t + 1, r):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    clean = clean and A[i][t] == 0
            for j in range(t + 1, c):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    clean = clean and A[t][j] == 0
            if not clean:
                # a smaller remainder appeared in the pivot row or column
                cand = [(abs(A[i][t]), i, t) for i in range(t + 1, r) if A[i][t]]
                cand += [(abs(A[t][j]), t, j) for j in range(t + 1, c) if A[t][j]]
                _, i, j = min(cand)
                swap_rows(t, i)
                swap_cols(t, j)
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if A[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(t, bad, 1)
        if A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return U, A, V, Vinv


def diagonal(D: Matrix) -> list[int]:
    return [D[i][i] for i in range(min(len(D), len(D[0]) if D else 0))]


def rank(M: Sequence[Sequence[int]]) -> int:
    _, D, _ = snf(M)
    return sum(1 for d in diagonal(D) if d)


def hnf_rows(rows: Sequence[Sequence[int]], n: int) -> Matrix:
    """Row-style Hermite normal form of the lattice spanned by ``rows`` in Z^n.

    Returns a basis in echelon form: pivots positive, entries above each
    pivot reduced into ``[0, pivot)``, no zero rows.
    """
    A = [list(r) for r in rows if any(r)]
    basis: Matrix = []
    for col in range(n):
        active = [row for row in A if row[col]]
        rest = [row for row in A if not row[col]]
        if not active:
            continue
        # gcd-reduce the column among active rows
        while len(active) > 1:
            active.sort(key=lambda row: abs(row[col]))
            piv = active[0]
            nxt = [piv]
            for row in active[1:]:
                q = row[col] // piv[col]
                row = [a - q * b for a, b in zip(row, piv)]
                if row[col]:
                    nxt.append(row)
                elif any(row):
                    rest.append(row)
            active = nxt
        piv = active[0]
        if piv[col] < 0:
            piv = [-a for a in piv]
        basis.append(piv)
        A = rest
    for i, row in enumerate(basis):
        pc = next(j for j, a in enumerate(row) if a)
        for k in range(i):
            q = basis[k][pc] // row[pc]
            if q:
                basis[k] = [a - q * b for a, b in zip(basis[k], row)]
    return basis


def pivot_columns(basis: Matrix) -> list[int]:
    return [next(j for j, a in enumerate(row) if a) for row in basis]


def echelon_coords(basis: Matrix, v: Sequence[int]) -> Vector | None:
    """Coordinates y with y·basis == v for an echelon basis, or None."""
    v = list(v)
    y = []
    for row, pc in zip(basis, pivot_columns(basis)):
        q, rem = divmod(v[pc], row[pc])
        if rem:
            return None
        y.append(q)
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return y if not any(v) else None


def echelon_reduce(basis: Matrix, v: Sequence[int]) -> Vector:
    """Reduce v modulo the lattice so each pivot coordinate lands in [0, pivot)."""
    v = list(v)
    for row, pc in zip(basis, pivot_columns(basis)):
        q = v[pc] // row[pc]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return v


def kernel(M: Sequence[Sequence[int]], cols: int) -> Matrix:
    """Basis (as rows) of the integer kernel {x in Z^cols : M·x = 0}."""
    if not M:
        return identity(cols)
    _, D, V = snf(M)
    r = sum(1 for d in diagonal(D) if d)
    Vt = transpose(V)
    return [Vt[j] for j in range(r, cols)]


def solve(M: Sequence[Sequence[int]], b: Sequence[int], cols: int) -> Vector | None:
    """One integer solution of M·x = b, or None if none exists."""
    if not M:
        return [0] * cols
    U, D, V = snf(M)
    c = matvec(U, b)
    y = [0] * cols
    for i, ci in enumerate(c):
        d = D[i][i] if i < cols else 0
        if d == 0:
            if ci:
                return None
        else:
            q, rem = divmod(ci, d)
            if rem:
                return None
            y[i] = q
    return matvec(V, y)
