"""Solving the prime-power congruence systems behind the divisor decomposition.

Given H = ⊕ Z/h_j and p-torsion elements χ_i = Σ a_ij ζ_j of orders
d_i = p^{α_i} spanning a direct sum, the system

    Σ_j c_ij s_j ≡ x_i  (mod p^γ),    c_ij = d_i a_ij / h_j,

always has a solution.  We find it the constructive way: solve mod p by
elimination over F_p (the matrix c mod p has full row rank), then lift one
power of p at a time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


class InvalidHypotheses(ValueError):
    """The system does not satisfy the independence hypotheses, so solvability is not guaranteed."""


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    return all(p % q for q in range(2, math.isqrt(p) + 1))


def p_valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def is_power_of(n: int, p: int) -> bool:
    while n > 1 and n % p == 0:
        n //= p
    return n == 1


@dataclass(frozen=True)
class LemmaSystem:
    h: tuple[int, ...]
    a: tuple[tuple[int, ...], ...]
    d: tuple[int, ...]
    p: int
    gamma: int
    x: tuple[int, ...]

    def coefficients(self) -> list[list[int]]:
        """c_ij = d_i a_ij / h_j; raises InvalidHypotheses if one is not integral."""
        c = []
        for i, (row, di) in enumerate(zip(self.a, self.d)):
            out = []
            for j, (aij, hj) in enumerate(zip(row, self.h)):
                q, r = divmod(di * aij, hj)
                if r:
                    raise InvalidHypotheses(f"d_{i}·a_{i}{j}/h_{j} = {di}·{aij}/{hj} is not an integer")
                out.append(q)
            c.append(out)
        return c

    def validate(self) -> list[list[int]]:
        """Check every hypothesis and return the coefficient matrix."""
        p, t, m = self.p, len(self.d), len(self.h)
        if not is_prime(p):
            raise InvalidHypotheses(f"{p} is not prime")
        if self.gamma < 1:
            raise InvalidHypotheses("gamma must be at least 1")
        if len(self.a) != t or len(self.x) != t or any(len(row) != m for row in self.a):
            raise InvalidHypotheses("dimensions of a, d, x do not agree")
        for hj in self.h:
            if hj < 1:
                raise InvalidHypotheses(f"generator order {hj} < 1")
        for i, di in enumerate(self.d):
            if di < p or not is_power_of(di, p):
                raise InvalidHypotheses(f"d_{i} = {di} is not a positive power of {p}")
        for row, hj_row in ((row, self.h) for row in self.a):
            for aij, hj in zip(row, hj_row):
                if not 0 <= aij < hj:
                    raise InvalidHypotheses("components a_ij must lie in [0, h_j)")
        c = self.coefficients()
        # independence of the χ_i with exact orders d_i  <=>  c mod p has rank t
        if rank_mod_p(c, p) != t:
            raise InvalidHypotheses("the characters do not span a direct sum of the declared orders")
        return c


def rank_mod_p(M: Sequence[Sequence[int]], p: int) -> int:
    return len(_row_reduce_mod_p([list(r) for r in M], p)[1])


def _row_reduce_mod_p(A: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    """Reduced row echelon form over F_p; pivots taken from the lowest row index."""
    A = [[v % p for v in row] for row in A]
    rows = len(A)
    cols = len(A[0]) if A else 0
    pivots = []
    r = 0
    for col in range(cols):
        piv = next((i for i in range(r, rows) if A[i][col]), None)
        if piv is None:
            continue
        A[r], A[piv] = A[piv], A[r]
        inv = pow(A[r][col], -1, p)
        A[r] = [v * inv % p for v in A[r]]
        for i in range(rows):
            if i != r and A[i][col]:
                f = A[i][col]
                A[i] = [(u - f * v) % p for u, v in zip(A[i], A[r])]
        pivots.append(col)
        r += 1
        if r == rows:
            break
    return A, pivots


def solve_mod_p(c: Sequence[Sequence[int]], rhs: Sequence[int], p: int) -> list[int] | None:
    """A solution of c·s ≡ rhs (mod p) with free variables set to 0, or None."""
    m = len(c[0]) if c else 0
    aug = [list(row) + [b] for row, b in zip(c, rhs)]
    R, pivots = _row_reduce_mod_p(aug, p)
    if m in pivots:
        return None
    s = [0] * m
    for row, col in zip(R, pivots):
        s[col] = row[m]
    return s


def solve_lifting(sys: LemmaSystem) -> list[int]:
    """Solve the system mod p^γ by solving mod p and lifting level by level."""
    c = sys.validate()
    p, m = sys.p, len(sys.h)
    if not c:
        return [0] * m
    s = solve_mod_p(c, sys.x, p)
    if s is None:  # unreachable once the rank test passed
        raise InvalidHypotheses("no solution mod p")
    modulus = p
    for _ in range(1, sys.gamma):
        # Σ c_ij s_j = x_i + p^g y_i; correct s by p^g·δ with c·δ ≡ -y (mod p)
        y = []
        for row, xi in zip(c, sys.x):
            diff = sum(cij * sj for cij, sj in zip(row, s)) - xi
            assert diff % modulus == 0
            y.append(-(diff // modulus))
        delta = solve_mod_p(c, y, p)
        assert delta is not None
        s = [sj + dj * modulus for sj, dj in zip(s, delta)]
        modulus *= p
    return [sj % modulus for sj in s]


def crt_combine(per_prime: Sequence[tuple[Sequence[int], int]]) -> list[int]:
    """Combine component-wise residues modulo pairwise coprime moduli.

    >>> crt_combine([([1], 2), ([2], 3)])
    [5]
    """
    if not per_prime:
        return []
    moduli = [n for _, n in per_prime]
    for i, a in enumerate(moduli):
        if a < 1:
            raise ValueError(f"modulus {a} must be positive")
        for b in moduli[i + 1:]:
            if math.gcd(a, b) != 1:
                raise ValueError(f"moduli {a} and {b} are not coprime")
    length = len(per_prime[0][0])
    if any(len(v) != length for v, _ in per_prime):
        raise ValueError("solution vectors have different lengths")
    out = [0] * length
    total = 1
    for vec, n in per_prime:
        # fold in one modulus at a time
        inv = pow(total, -1, n) if n > 1 else 0
        out = [r + total * ((v - r) * inv % n) for r, v in zip(out, vec)]
        total *= n
    return [r % total for r in out]
