"""Random instances for property checks and the self-test corpus."""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Sequence

from .abgrp import FgAbGroup, Homomorphism, multiplication_kernel, subgroup_inclusion, subgroup_order
from .congruence import LemmaSystem, rank_mod_p
from .cover import BuildingData, Character, PicardModel


def random_finite_group(rng: random.Random, max_order: int = 64) -> FgAbGroup:
    while True:
        invs = [rng.randint(2, 6)]
        for _ in range(rng.randint(0, 2)):
            invs.append(invs[-1] * rng.randint(1, 4))
        if math.prod(invs) <= max_order:
            return FgAbGroup(tuple(invs))


def random_building_data(rng: random.Random, max_order: int = 64, max_k: int = 4) -> BuildingData:
    """Totally ramified data with the dual basis of G* as character generators."""
    while True:
        G = random_finite_group(rng, max_order)
        k = rng.randint(1, max_k)
        g = []
        for _ in range(k):
            x = tuple(rng.randrange(d) for d in G.invariants)
            if not any(x):
                x = G.gens()[rng.randrange(G.ngens)]
            g.append(x)
        if subgroup_order(G, g) != G.order:
            continue
        m = tuple(G.element_order(x) for x in g)
        chis = tuple(Character.from_dual(G, e) for e in G.gens())
        return BuildingData(G, m, tuple(g), chis, G.invariants)


def random_element(rng: random.Random, G: FgAbGroup, spread: int = 3) -> tuple[int, ...]:
    return G.reduce([rng.randrange(d) if d else rng.randint(-spread, spread) for d in G.moduli])


def random_picard_model(rng: random.Random, bd: BuildingData, free_rank: int | None = None,
                        torsion: tuple[int, ...] | None = None) -> PicardModel:
    """A model satisfying the characteristic relations by construction.

    D = C·B for a basis B of an ambient group, with the columns of C drawn
    from the lattice of N; then L_i = Σ_l (Σ_j a_ij c_jl / m_j) B_l satisfies
    d_i L_i = Σ_j (d_i a_ij / m_j) D_j.  A is the span of the D and L.
    """
    if free_rank is None:
        free_rank = rng.randint(0, 2)
    if torsion is None:
        torsion = rng.choice([(), (2,), (3,), (2, 4), (4,), (6,)])
    amb = FgAbGroup(torsion, free_rank)
    lattice = bd.branch_lattice()
    basis = amb.gens()
    C = [[0] * amb.ngens for _ in range(bd.k)]
    for l in range(amb.ngens):
        for row in lattice:
            c = rng.randint(-2, 2)
            for j in range(bd.k):
                C[j][l] += c * row[j]
    D = [amb.combine(C[j], basis) for j in range(bd.k)]
    L = []
    for a in bd.components():
        coeffs = []
        for l in range(amb.ngens):
            s = sum((Fraction(a[j] * C[j][l], bd.m[j]) for j in range(bd.k)), Fraction(0))
            assert s.denominator == 1
            coeffs.append(int(s))
        L.append(amb.combine(coeffs, basis))
    inc = subgroup_inclusion(amb, D + L)
    return PicardModel(inc.source, tuple(inc.preimage(x) for x in D), tuple(inc.preimage(x) for x in L))


def random_homomorphism(rng: random.Random, A: FgAbGroup, H: FgAbGroup) -> Homomorphism:
    """Generators of order d go to random elements of H[d]; free ones anywhere."""
    images = []
    for d in A.moduli:
        if d == 0:
            images.append(random_element(rng, H))
            continue
        tors = multiplication_kernel(H, d)
        coeffs = [rng.randrange(max(o, 1)) for o in tors.group.moduli]
        images.append(H.combine(coeffs, tors.lifts))
    return Homomorphism.from_images(A, H, images)


def random_lemma_system(rng: random.Random, max_modulus: int = 81, max_m: int = 4) -> LemmaSystem:
    """A system meeting every hypothesis of the lifting solver.

    h_j = p^e_j·u_j with u_j prime to p; the χ_i are random p-torsion elements
    of ⊕Z/h_j kept only when they span a direct sum of their orders.
    """
    primes = [p for p in (2, 3, 5, 7) if p <= max_modulus]
    while True:
        p = rng.choice(primes)
        top = 1
        while p ** (top + 1) <= max_modulus:
            top += 1
        gamma = rng.randint(1, top)
        m = rng.randint(1, max_m)
        exps = [rng.randint(0, 3) for _ in range(m)]
        units = [rng.choice([u for u in (1, 1, 2, 3, 5, 7) if u % p]) for _ in range(m)]
        if not any(exps):
            continue
        t = rng.randint(1, m)
        rows: list[list[int]] = []
        for _ in range(20 * t):
            if len(rows) == t:
                break
            b = [rng.randrange(p**e) for e in exps]
            cand = rows + [b]
            if _p_direct_sum(cand, exps, p):
                rows.append(b)
        if not rows:
            continue
        h = tuple(p**e * u for e, u in zip(exps, units))
        a = tuple(tuple(bij * u for bij, u in zip(b, units)) for b in rows)
        d = tuple(_order(b, exps, p) for b in rows)
        x = tuple(rng.randrange(p**gamma) for _ in rows)
        return LemmaSystem(h, a, d, p, gamma, x)


def _order(b: Sequence[int], exps: Sequence[int], p: int) -> int:
    return max((p**e // math.gcd(bj, p**e) for bj, e in zip(b, exps)), default=1)


def _p_direct_sum(rows: list[list[int]], exps: list[int], p: int) -> bool:
    """Do the rows span a direct sum of nontrivial cyclic groups of their orders?

    In a p-group this holds iff the order-p multiples (o/p)·b are independent
    over F_p.
    """
    socle = []
    for b in rows:
        o = _order(b, exps, p)
        if o == 1:
            return False
        socle.append([(o // p) * bj % p**e // p ** (e - 1) if e else 0 for bj, e in zip(b, exps)])
    return rank_mod_p(socle, p) == len(rows)
