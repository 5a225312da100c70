"""Writing the branch divisors in a prime-power basis of A with columns in N.

We look for M_1..M_q with A = ⊕⟨M_l⟩ (prime-power torsion generators
first, then free ones) and an integer matrix C with D_j = Σ_l c_jl M_l such
that every column of C lies in N.  Free columns are forced and land in N
automatically; torsion columns are only defined modulo o(M_l) and are
adjusted with the congruence-lifting solver until they do.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Sequence

from .abgrp import Element, FgAbGroup, solve_mixed_congruences, subgroup_quotient
from .congruence import InvalidHypotheses, LemmaSystem, p_valuation, solve_lifting
from .cover import (
    BuildingData,
    PicardModel,
    ValidationReport,
    check_characteristic_relations,
    has_prime_power_characters,
    prime_factors,
    relation_coefficients,
)
from .topology import dual_test, kernel_membership


class DecompositionFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class Decomposition:
    M: tuple[Element, ...]
    orders: tuple[int, ...]  # 0 marks a free generator
    C: tuple[tuple[int, ...], ...]  # k rows, q columns

    @property
    def q(self) -> int:
        return len(self.M)

    def column(self, l: int) -> tuple[int, ...]:
        return tuple(row[l] for row in self.C)

    def reconstruct(self, A: FgAbGroup) -> list[Element]:
        return [A.combine(row, self.M) for row in self.C]


def prime_power_basis(A: FgAbGroup) -> tuple[list[Element], list[int]]:
    """Split the canonical generators of A into prime-power cyclic and free generators."""
    torsion = []
    for u, d in enumerate(A.invariants):
        for p, e in prime_factors(d):
            torsion.append((p, p**e, u, A.scale(d // p**e, A.gens()[u])))
    torsion.sort(key=lambda item: (item[0], item[1], item[2]))
    M = [item[3] for item in torsion]
    orders = [item[1] for item in torsion]
    for u in range(len(A.invariants), A.ngens):
        M.append(A.gens()[u])
        orders.append(0)
    return M, orders


def _prime_of(n: int) -> int:
    return prime_factors(n)[0][0]


def randomize_basis(A: FgAbGroup, M: list[Element], orders: list[int], rng: random.Random,
                    steps: int = 12) -> list[Element]:
    """Apply random elementary automorphisms that keep the basis shape."""
    M = list(M)
    q = len(M)
    if q == 0:
        return M
    for _ in range(steps):
        a = rng.randrange(q)
        oa = orders[a]
        move = rng.random()
        if move < 0.25:
            if oa == 0:
                M[a] = A.neg(M[a])
            else:
                units = [u for u in range(1, oa) if math.gcd(u, oa) == 1]
                M[a] = A.scale(rng.choice(units), M[a])
            continue
        b = rng.randrange(q)
        if a == b:
            continue
        ob = orders[b]
        c = rng.randint(-3, 3)
        if oa == 0:
            # any element may be added to a free generator
            M[a] = A.add(M[a], A.scale(c, M[b]))
        elif ob != 0 and _prime_of(ob) == _prime_of(oa):
            # keep the order of M[a] equal to oa
            factor = ob // oa if ob > oa else 1
            M[a] = A.add(M[a], A.scale(c * factor, M[b]))
    return M


def coordinates(A: FgAbGroup, M: Sequence[Element], orders: Sequence[int], x: Sequence[int]) -> list[int]:
    """The coefficients of x in the basis M (torsion ones reduced mod o(M_l))."""
    if not M:
        if any(A.reduce(x)):
            raise DecompositionFailure("element outside the span of the basis")
        return []
    mat = [[Ml[u] for Ml in M] for u in range(A.ngens)]
    c = solve_mixed_congruences(mat, A.reduce(x), A.moduli) if A.ngens else [0] * len(M)
    if c is None:
        raise DecompositionFailure("element outside the span of the basis")
    return [cl % o if o else cl for cl, o in zip(c, orders)]


def verify_columns_in_N(bd: BuildingData, C: Sequence[Sequence[int]]) -> ValidationReport:
    """Per-column test Σ_j a_ij c_jl / m_j ∈ Z, cross-checked against kernel membership."""
    rep = ValidationReport()
    if len(C) != bd.k:
        rep.fail(f"coefficient matrix has {len(C)} rows, expected {bd.k}")
        return rep
    q = len(C[0]) if C else 0
    if any(len(row) != q for row in C):
        rep.fail("ragged coefficient matrix")
        return rep
    for l in range(q):
        col = [row[l] for row in C]
        dual = dual_test(bd, col)
        direct = kernel_membership(bd, col)
        if dual != direct:
            rep.fail(f"column {l}: character test and kernel test disagree")
        elif not dual:
            rep.fail(f"column {l} = {tuple(col)} does not represent an element of N")
    return rep


def decompose_divisors(bd: BuildingData, pic: PicardModel, rng: random.Random | None = None) -> Decomposition:
    """Decompose the D_j over a prime-power basis of A with every column of C in N.

    With ``rng`` the basis and the initial torsion representatives are chosen
    at random, which yields other valid decompositions of the same data.
    """
    if not has_prime_power_characters(bd):
        raise DecompositionFailure("character generators must have prime-power order; refine them first")
    rep = check_characteristic_relations(bd, pic)
    if not rep.ok:
        raise DecompositionFailure("characteristic relations fail: " + "; ".join(rep.failures))
    A = pic.A
    M, orders = prime_power_basis(A)
    if rng is not None:
        M = randomize_basis(A, M, orders, rng)
    q = len(M)
    C = [coordinates(A, M, orders, Dj) for Dj in pic.D]
    lam = [coordinates(A, M, orders, Li) for Li in pic.L]
    if rng is not None:
        C = [[c + o * rng.randint(-2, 2) if o else c for c, o in zip(row, orders)] for row in C]
    e, _ = relation_coefficients(bd)
    a = bd.components()
    k = bd.k

    for l in range(q):
        col = [C[j][l] for j in range(k)]
        o = orders[l]
        if o == 0:
            if not dual_test(bd, col):
                raise DecompositionFailure(f"free column {l} is not in N; the relations are inconsistent")
            continue
        p = _prime_of(o)
        alpha = p_valuation(o, p)
        rows = [i for i, di in enumerate(bd.d) if di % p == 0]
        beta = max((p_valuation(bd.d[i], p) - alpha for i in rows), default=0)
        if beta > 0:
            x = []
            for i in rows:
                diff = bd.d[i] * lam[i][l] - sum(e[i][j] * col[j] for j in range(k))
                if diff % o:
                    raise DecompositionFailure(f"column {l}: congruence with character {i} fails mod {o}")
                x.append(diff // o)
            system = LemmaSystem(
                h=tuple(bd.m),
                a=tuple(tuple(a[i]) for i in rows),
                d=tuple(bd.d[i] for i in rows),
                p=p,
                gamma=beta,
                x=tuple(x),
            )
            try:
                s = solve_lifting(system)
            except InvalidHypotheses as exc:
                raise DecompositionFailure(f"column {l}: {exc}") from exc
            col = [cj + o * sj for cj, sj in zip(col, s)]
        d = math.lcm(1, *(di for di in bd.d if di % p))
        if d > 1:
            gamma = max((p_valuation(bd.d[i], p) for i in rows), default=0) + alpha + 1
            step = p**gamma
            inv = pow(step, -1, d)
            col = [cj + step * ((-cj * inv) % d) for cj in col]
        col = [cj % math.lcm(o, mj) for cj, mj in zip(col, bd.m)]
        for j in range(k):
            C[j][l] = col[j]

    dec = Decomposition(tuple(M), tuple(orders), tuple(tuple(row) for row in C))
    check_decomposition(bd, pic, dec)
    return dec


def check_decomposition(bd: BuildingData, pic: PicardModel, dec: Decomposition) -> None:
    A = pic.A
    if dec.reconstruct(A) != list(pic.D):
        raise DecompositionFailure("D_j are not reproduced by C·M")
    # generating set + matching torsion order and free count forces a direct sum
    if (
        not subgroup_quotient(A, dec.M)[0].is_trivial
        or sum(1 for o in dec.orders if o == 0) != A.free_rank
        or math.prod(o for o in dec.orders if o) != math.prod(A.invariants)
        or any(A.element_order(Ml) != o for Ml, o in zip(dec.M, dec.orders))
    ):
        raise DecompositionFailure("M is not a direct-sum basis of A")
    rep = verify_columns_in_N(bd, [list(r) for r in dec.C])
    if not rep.ok:
        raise DecompositionFailure("; ".join(rep.failures))
