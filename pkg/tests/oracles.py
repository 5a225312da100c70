"""Brute-force references used across the test modules.

Everything here works by enumerating elements of small finite groups, so it
shares no code path with the lattice algorithms it checks.
"""

from __future__ import annotations

import itertools
import math
import random
from typing import Iterable, Sequence

from abcover.abgrp import FgAbGroup, Homomorphism, subgroup_inclusion, subgroup_quotient


def closure(G: FgAbGroup, gens: Iterable[Sequence[int]]) -> set[tuple[int, ...]]:
    """The subgroup of a finite G generated by gens, by breadth-first search."""
    gens = [G.reduce(g) for g in gens]
    seen = {G.zero()}
    frontier = [G.zero()]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = G.add(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def invariants_from_counts(elements: Iterable[tuple[int, ...]], G: FgAbGroup) -> tuple[int, ...]:
    """Invariant factors of a finite abelian group, read off its element orders.

    The number of elements killed by n determines the group; we recover the
    factors by matching those counts against candidate divisor chains.
    """
    elems = list(elements)
    order = len(elems)
    counts = {n: sum(1 for x in elems if not any(G.scale(n, x))) for n in _divisors(order)}
    for chain in _chains(order):
        if all(math.prod(math.gcd(n, d) for d in chain) == counts[n] for n in counts):
            return chain
    raise AssertionError("no invariant chain matches")


def _divisors(n: int) -> list[int]:
    return [d for d in range(1, n + 1) if n % d == 0]


def _chains(n: int, smallest: int = 2) -> list[tuple[int, ...]]:
    """All d_1 | d_2 | ... with d_1 >= 2 and product n."""
    if n == 1:
        return [()]
    out = []
    for d in _divisors(n):
        if d < smallest or d == 1:
            continue
        for rest in _chains(n // d, d):
            if not rest or rest[0] % d == 0:
                out.append((d,) + rest)
    return out


def hom_kernel_elements(f: Homomorphism) -> set[tuple[int, ...]]:
    return {x for x in f.source.elements() if not any(f(x))}


def random_finite(rng: random.Random, max_order: int = 64) -> FgAbGroup:
    while True:
        moduli = [rng.randint(1, 8) for _ in range(rng.randint(1, 3))]
        if math.prod(moduli) <= max_order:
            return FgAbGroup.from_moduli(moduli)


def random_exact_sequence(rng: random.Random, max_order: int = 64) -> tuple[Homomorphism, Homomorphism]:
    """0 → K → E → E/K → 0 for a random subgroup K of a random E."""
    E = random_finite(rng, max_order)
    gens = [tuple(rng.randrange(d) for d in E.moduli) for _ in range(rng.randint(0, 2))]
    inc = subgroup_inclusion(E, gens)
    _, proj = subgroup_quotient(E, gens)
    return inc, proj


def section_exists(inc: Homomorphism, proj: Homomorphism) -> bool:
    """Search all assignments of generator images for a homomorphic section.

    A map on canonical generators of G = ⊕ Z/d_u extends to a homomorphism
    iff each image is killed by d_u, so the search ranges over E^ngens(G).
    """
    E, G = proj.source, proj.target
    candidates = []
    for u, e in enumerate(G.gens()):
        d = G.moduli[u]
        candidates.append([x for x in E.elements() if proj(x) == e and not any(E.scale(d, x))])
    for images in itertools.product(*candidates):
        s = Homomorphism.from_images(G, E, images)
        if all(proj(s(g)) == g for g in G.elements()):
            return True
    return False
