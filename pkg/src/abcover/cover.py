"""Building data of a totally ramified abelian cover.

The Galois group G is a finite :class:`FgAbGroup`; branch component j has
inertia order m_j and inertia generator g_j.  Characters are homomorphisms
G → Q/Z stored as one fraction per canonical generator of G.  The Picard
side is only the subgroup A generated by the branch divisors D_j and the
eigensheaves L_χ.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from . import matrix as mx
from .abgrp import Element, FgAbGroup, Homomorphism, solve_mixed_congruences, subgroup_order, subgroup_quotient
from .congruence import is_power_of


@dataclass
class ValidationReport:
    failures: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, msg: str) -> None:
        self.failures.append(msg)

    def extend(self, other: "ValidationReport") -> None:
        self.failures.extend(other.failures)


@dataclass(frozen=True)
class Character:
    values: tuple[Fraction, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "values", tuple(Fraction(v) % 1 for v in self.values))

    @classmethod
    def trivial(cls, G: FgAbGroup) -> "Character":
        return cls((Fraction(0),) * G.ngens)

    @classmethod
    def from_dual(cls, G: FgAbGroup, coords: Sequence[int]) -> "Character":
        """The character with χ(e_u) = coords_u / d_u."""
        return cls(tuple(Fraction(c, d) for c, d in zip(coords, G.invariants)))

    def __call__(self, g: Sequence[int]) -> Fraction:
        return sum((v * x for v, x in zip(self.values, g)), Fraction(0)) % 1

    def __add__(self, other: "Character") -> "Character":
        return Character(tuple(a + b for a, b in zip(self.values, other.values)))

    def __rmul__(self, n: int) -> "Character":
        return Character(tuple(n * a for a in self.values))

    def order(self) -> int:
        return math.lcm(1, *(v.denominator for v in self.values))

    def dual_coords(self, G: FgAbGroup) -> Element:
        """Coordinates in G* ≅ ⊕ Z/d_u (requires χ to be a character of G)."""
        return tuple(int(v * d) % d for v, d in zip(self.values, G.invariants))

    def is_character_of(self, G: FgAbGroup) -> bool:
        return len(self.values) == G.ngens and G.is_finite and all(
            d % v.denominator == 0 for v, d in zip(self.values, G.invariants)
        )


@dataclass(frozen=True)
class BuildingData:
    G: FgAbGroup
    m: tuple[int, ...]
    g: tuple[Element, ...]
    chi: tuple[Character, ...]
    d: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "m", tuple(self.m))
        object.__setattr__(self, "g", tuple(tuple(x) for x in self.g))
        object.__setattr__(self, "chi", tuple(self.chi))
        object.__setattr__(self, "d", tuple(self.d))

    @property
    def k(self) -> int:
        return len(self.m)

    def sigma(self) -> Homomorphism:
        """Z^k → G, e_j ↦ g_j."""
        return Homomorphism.from_images(FgAbGroup.free(self.k), self.G, self.g)

    def components(self) -> list[list[int]]:
        """The matrix (a_ij) of the chosen character generators."""
        return [list(row) for row in self._components]

    @cached_property
    def _components(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(character_components(self, chi)) for chi in self.chi)

    def branch_lattice(self) -> mx.Matrix:
        """Generators of {t in Z^k : Σ t_j g_j = 0} (always contains m_j e_j)."""
        k = self.k
        if self.G.ngens == 0:
            return mx.identity(k)
        big = [[self.g[j][u] for j in range(k)] + [-d if u == v else 0 for v in range(self.G.ngens)]
               for u, d in enumerate(self.G.moduli)]
        return [row[:k] for row in mx.kernel(big, k + self.G.ngens)] + [
            [self.m[j] if i == j else 0 for i in range(k)] for j in range(k)
        ]


def character_from_components(G: FgAbGroup, m: Sequence[int], g: Sequence[Element], a: Sequence[int]) -> Character:
    """The character χ with χ(g_j) = a_j/m_j, if such a character of G exists."""
    k = len(m)
    if len(a) != k:
        raise ValueError(f"expected {k} components, got {len(a)}")
    sigma = Homomorphism.from_images(FgAbGroup.free(k), G, g)
    values = []
    for e in G.gens():
        t = sigma.preimage(e)
        if t is None:
            raise ValueError("the inertia generators do not generate G")
        values.append(sum((Fraction(aj * tj, mj) for aj, tj, mj in zip(a, t, m)), Fraction(0)))
    chi = Character(tuple(values))
    for j in range(k):
        if chi(g[j]) != Fraction(a[j], m[j]) % 1:
            raise ValueError(f"components {list(a)} do not define a character of G")
    if not chi.is_character_of(G):
        raise ValueError(f"components {list(a)} do not define a character of G")
    return chi


def building_data(G: FgAbGroup, m: Sequence[int], g: Sequence[Sequence[int]],
                  components: Sequence[Sequence[int]]) -> BuildingData:
    """Assemble building data from character components a_ij, deriving the orders d_i."""
    g = [G.reduce(x) for x in g]
    chis = tuple(character_from_components(G, m, g, a) for a in components)
    return BuildingData(G, tuple(m), tuple(g), chis, tuple(c.order() for c in chis))


def validate_building_data(bd: BuildingData) -> ValidationReport:
    rep = ValidationReport()
    G = bd.G
    if not G.is_finite:
        rep.fail("Galois group must be finite")
        return rep
    if len(bd.g) != bd.k:
        rep.fail(f"{bd.k} inertia orders but {len(bd.g)} inertia generators")
        return rep
    for j, (mj, gj) in enumerate(zip(bd.m, bd.g)):
        if len(gj) != G.ngens:
            rep.fail(f"branch {j}: generator has {len(gj)} coordinates, expected {G.ngens}")
            continue
        o = G.element_order(gj)
        if o != mj:
            rep.fail(f"branch {j}: inertia order mismatch (g_{j} has order {o}, declared m_{j} = {mj})")
    if not rep.ok:
        return rep
    if subgroup_order(G, bd.g) != G.order:
        rep.fail("not totally ramified: the inertia generators do not generate G")
    if len(bd.d) != len(bd.chi):
        rep.fail("one declared order per character generator is required")
        return rep
    good = True
    for i, (chi, di) in enumerate(zip(bd.chi, bd.d)):
        if not chi.is_character_of(G):
            rep.fail(f"character {i} is not a character of G")
            good = False
        elif chi.order() != di:
            rep.fail(f"character {i}: declared order {di}, true order {chi.order()}")
            good = False
    if good:
        dual = FgAbGroup(G.invariants)
        # ⟨χ_i⟩ is a quotient of ⊕⟨χ_i⟩, so equal orders force a direct sum
        span = subgroup_order(dual, [chi.dual_coords(G) for chi in bd.chi])
        if math.prod(bd.d) != G.order or span != G.order:
            rep.fail("character generators do not give G* as a direct sum of their cyclic subgroups")
    return rep


def character_components(bd: BuildingData, chi: Character) -> list[int]:
    """The unique a_j in [0, m_j) with χ = Σ a_j ψ_j."""
    return [int(chi(gj) * mj) for gj, mj in zip(bd.g, bd.m)]


def character_coefficients(bd: BuildingData, chi: Character) -> list[int]:
    """b_i in [0, d_i) with χ = Σ b_i χ_i."""
    G = bd.G
    gens = [c.dual_coords(G) for c in bd.chi]
    target = chi.dual_coords(G)
    if not gens:
        if any(target):
            raise ValueError("character is not in the span of the generators")
        return []
    A = [[gen[u] for gen in gens] for u in range(G.ngens)]
    b = solve_mixed_congruences(A, target, G.invariants) if G.ngens else [0] * len(gens)
    if b is None:
        raise ValueError("character is not in the span of the generators")
    return [bi % di for bi, di in zip(b, bd.d)]


@dataclass(frozen=True)
class PicardModel:
    A: FgAbGroup
    D: tuple[Element, ...]
    L: tuple[Element, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "D", tuple(self.A.reduce(x) for x in self.D))
        object.__setattr__(self, "L", tuple(self.A.reduce(x) for x in self.L))

    def validate(self) -> ValidationReport:
        rep = ValidationReport()
        Q, _ = subgroup_quotient(self.A, list(self.D) + list(self.L))
        if not Q.is_trivial:
            rep.fail(f"A = {self.A} is not generated by the D_j and L_chi (the quotient is {Q})")
        return rep


def relation_coefficients(bd: BuildingData) -> tuple[list[list[int]], ValidationReport]:
    """The integers d_i a_ij / m_j of the characteristic relations."""
    rep = ValidationReport()
    out = []
    for i, (a, di) in enumerate(zip(bd.components(), bd.d)):
        row = []
        for j, (aij, mj) in enumerate(zip(a, bd.m)):
            q, r = divmod(di * aij, mj)
            if r:
                rep.fail(f"coefficient d_{i}·a_{i}{j}/m_{j} = {di}·{aij}/{mj} is not an integer")
            row.append(q)
        out.append(row)
    return out, rep


def check_characteristic_relations(bd: BuildingData, pic: PicardModel) -> ValidationReport:
    """Verify d_i L_i = Σ_j (d_i a_ij / m_j) D_j in A for every generator χ_i."""
    if len(pic.D) != bd.k or len(pic.L) != len(bd.chi):
        rep = ValidationReport()
        rep.fail(f"Picard model has {len(pic.D)} divisors and {len(pic.L)} eigensheaves; "
                 f"expected {bd.k} and {len(bd.chi)}")
        return rep
    coeffs, rep = relation_coefficients(bd)
    if not rep.ok:
        return rep
    A = pic.A
    for i, (row, di, Li) in enumerate(zip(coeffs, bd.d, pic.L)):
        lhs = A.scale(di, Li)
        rhs = A.combine(row, pic.D)
        if lhs != rhs:
            rep.fail(f"relation {i} fails: {di}·L_{i} = {lhs} but Σ coefficients·D_j = {rhs}")
    return rep


def derive_eigensheaf_class(bd: BuildingData, pic: PicardModel, chi: Character) -> Element:
    """L_χ = Σ b_i L_i − Σ_j q_j D_j with q_j = floor(Σ_i b_i a_ij / m_j)."""
    b = character_coefficients(bd, chi)
    a = bd.components()
    q = [sum(bi * row[j] for bi, row in zip(b, a)) // mj for j, mj in enumerate(bd.m)]
    A = pic.A
    return A.add(A.combine(b, pic.L), A.neg(A.combine(q, pic.D)))


def prime_factors(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def has_prime_power_characters(bd: BuildingData) -> bool:
    return all(any(is_power_of(d, p) for p, _ in prime_factors(d)) for d in bd.d if d > 1)


def refine_prime_power(bd: BuildingData, pic: PicardModel | None = None
                       ) -> tuple[BuildingData, PicardModel | None]:
    """Split every character generator into prime-power pieces.

    χ of order ∏ p^e becomes the characters (d/p^e)·χ, which span ⟨χ⟩ as a
    direct sum; the matching eigensheaves are derived from the general formula.
    """
    chis, ds, Ls = [], [], []
    for chi, di in zip(bd.chi, bd.d):
        for p, e in prime_factors(di):
            piece = (di // p**e) * chi
            chis.append(piece)
            ds.append(p**e)
            if pic is not None:
                Ls.append(derive_eigensheaf_class(bd, pic, piece))
    new_bd = BuildingData(bd.G, bd.m, bd.g, tuple(chis), tuple(ds))
    new_pic = PicardModel(pic.A, pic.D, tuple(Ls)) if pic is not None else None
    return new_bd, new_pic
