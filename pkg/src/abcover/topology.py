"""The kernel K of π₁(Y) → π₁(X) and the deck group G̃ of the lifted cover.

Everything is computed in the branch lattice Z^k (basis D̃_1..D̃_k):

* N    = {t : Σ t_j g_j = 0} / ⊕ m_j Z          (kernel of ⊕G_j → G)
* K    = {t : Σ t_j g_j = 0} / (⊕ m_j Z + Im ρ)
* G̃    = Z^k / (⊕ m_j Z + Im ρ)

Im ρ is supplied by the caller: it encodes topology of the universal cover
of X that the algebraic data cannot see.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

from .abgrp import Element, FgAbGroup, Homomorphism, Subquotient, hom_kernel, sequence_splits
from .cover import BuildingData


class NotInN(ValueError):
    """A vector of Z^k does not represent an element of N."""


class RhoNotInN(NotInN):
    """A generator of Im(σ∘ρ) does not lie in N."""


class ExactnessFailure(RuntimeError):
    pass


@dataclass(frozen=True)
class RhoImage:
    gens: tuple[tuple[int, ...], ...] = ()

    @classmethod
    def from_divisibility(cls, deltas: Sequence[int]) -> "RhoImage":
        """π*(D_j) = δ_j·E for one primitive class E: Im ρ is spanned by (δ_1, ..., δ_k)."""
        return cls((tuple(deltas),))

    @classmethod
    def empty(cls) -> "RhoImage":
        return cls(())


def _diag(m: Sequence[int]) -> list[list[int]]:
    return [[mj if i == j else 0 for i in range(len(m))] for j, mj in enumerate(m)]


def dual_test(bd: BuildingData, t: Sequence[int]) -> bool:
    """t represents an element of N iff Σ_j a_ij t_j / m_j ∈ Z for every χ_i."""
    L = math.lcm(*bd.m)
    return all(sum(aij * tj * (L // mj) for aij, tj, mj in zip(a, t, bd.m)) % L == 0 for a in bd.components())


def kernel_membership(bd: BuildingData, t: Sequence[int]) -> bool:
    return not any(bd.G.combine(t, bd.g))


def _n_subquotient(bd: BuildingData) -> Subquotient:
    return Subquotient(bd.branch_lattice(), _diag(bd.m), bd.k)


def compute_N(bd: BuildingData) -> tuple[list[Element], FgAbGroup]:
    """Generators of N in ⊕Z/m_j coordinates, and N in canonical form."""
    sq = _n_subquotient(bd)
    gens = [tuple(t % mj for t, mj in zip(v, bd.m)) for v in sq.lifts]
    for t in gens:
        if not dual_test(bd, t):
            raise ExactnessFailure(f"kernel generator {t} fails the character test")
    return gens, sq.group


@dataclass
class KernelResult:
    N: FgAbGroup
    N_gens: list[Element]
    K: FgAbGroup
    proj_N_to_K: Homomorphism
    rho: RhoImage
    _n: Subquotient = field(repr=False)
    _k: Subquotient = field(repr=False)

    def n_coords(self, t: Sequence[int]) -> Element:
        if not self._n.contains(t):
            raise NotInN(f"{tuple(t)} does not represent an element of N")
        return self._n.coords(t)

    def k_coords(self, t: Sequence[int]) -> Element:
        if not self._k.contains(t):
            raise NotInN(f"{tuple(t)} does not represent an element of N")
        return self._k.coords(t)

    def k_lift(self, u: int) -> Element:
        """A vector of Z^k representing canonical generator u of K."""
        return self._k.lifts[u]


def _check_rho(bd: BuildingData, rho: RhoImage) -> list[list[int]]:
    gens = []
    for r in rho.gens:
        if len(r) != bd.k:
            raise ValueError(f"rho generator {tuple(r)} has length {len(r)}, expected {bd.k}")
        if not kernel_membership(bd, r):
            raise RhoNotInN(f"rho generator {tuple(r)} reduces outside N")
        gens.append(list(r))
    return gens


def compute_K(bd: BuildingData, rho: RhoImage = RhoImage()) -> KernelResult:
    gens = _check_rho(bd, rho)
    nsq = _n_subquotient(bd)
    ksq = Subquotient(bd.branch_lattice(), _diag(bd.m) + gens, bd.k)
    proj = Homomorphism.from_images(nsq.group, ksq.group, [ksq.coords(v) for v in nsq.lifts])
    N_gens = [tuple(t % mj for t, mj in zip(v, bd.m)) for v in nsq.lifts]
    res = KernelResult(nsq.group, N_gens, ksq.group, proj, rho, nsq, ksq)
    if nsq.group.order * bd.G.order != math.prod(bd.m):
        raise ExactnessFailure("|N|·|G| differs from ∏ m_j")
    if nsq.group.order % ksq.group.order:
        raise ExactnessFailure("|K| does not divide |N|")
    return res


@dataclass
class DeckGroupResult:
    Gtilde: FgAbGroup
    inc_K: Homomorphism
    proj_G: Homomorphism
    gtilde: list[Element]
    kernel: KernelResult


def compute_G_tilde(bd: BuildingData, rho: RhoImage = RhoImage()) -> DeckGroupResult:
    kr = compute_K(bd, rho)
    k = bd.k
    gsq = Subquotient([[int(i == j) for i in range(k)] for j in range(k)], _diag(bd.m) + [list(r) for r in rho.gens], k)
    Gt = gsq.group
    gtilde = [gsq.coords([int(i == j) for i in range(k)]) for j in range(k)]
    proj = Homomorphism.from_images(Gt, bd.G, [bd.G.combine(v, bd.g) for v in gsq.lifts])
    inc = Homomorphism.from_images(kr.K, Gt, [gsq.coords(kr.k_lift(u)) for u in range(kr.K.ngens)])
    dg = DeckGroupResult(Gt, inc, proj, gtilde, kr)
    verify_deck_group(bd, dg)
    return dg


def verify_deck_group(bd: BuildingData, dg: DeckGroupResult) -> None:
    """Machine-check exactness of 0 → K → G̃ → G → 0 and the branch generators."""
    if hom_kernel(dg.inc_K):
        raise ExactnessFailure("K → G̃ is not injective")
    if not dg.proj_G.is_surjective():
        raise ExactnessFailure("G̃ → G is not surjective")
    if any(any(dg.proj_G(x)) for x in dg.inc_K.images()):
        raise ExactnessFailure("K is not contained in ker(G̃ → G)")
    if dg.Gtilde.order != dg.kernel.K.order * bd.G.order:
        raise ExactnessFailure("|G̃| differs from |K|·|G|")
    for j, (gt, gj, mj) in enumerate(zip(dg.gtilde, bd.g, bd.m)):
        if dg.proj_G(gt) != bd.G.reduce(gj):
            raise ExactnessFailure(f"g̃_{j} does not map to g_{j}")
        if dg.Gtilde.element_order(gt) != mj:
            raise ExactnessFailure(f"g̃_{j} does not have order m_{j} = {mj}")


def extension_splits(dg: DeckGroupResult) -> bool:
    return sequence_splits(dg.inc_K, dg.proj_G)[0]
