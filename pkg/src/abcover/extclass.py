"""Extension classes of the fundamental-group extension 0 → K → π₁(Y) → π₁(X) → 1.

Classes in H²(X, K) that come from integral classes are modelled in
H² ⊗ K, the image of the universal-coefficient injection
H²(X, Z) ⊗ K → H²(X, K).  The class ξ = Σ_l [M_l] ⊗ Θ(e_l) only ever
involves integral Chern classes, so nothing is lost; the Tor(H³, K) part of
H²(X, K) is never populated.  Passing from H²(X, ·) to H²(π₁(X), ·) needs
topology the inputs do not carry and is left to a user-supplied map
H² → H²(Z/n, Z) = Z/n for cyclic π₁(X).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .abgrp import (
    Element,
    FgAbGroup,
    Homomorphism,
    Subquotient,
    TensorProduct,
    multiplication_kernel,
    sequence_splits,
    subgroup,
    subgroup_quotient,
    tensor_map,
)
from .cover import BuildingData, PicardModel
from .decomp import Decomposition
from .topology import DeckGroupResult, KernelResult


@dataclass(frozen=True)
class CohomologyModel:
    H2: FgAbGroup
    c1: Homomorphism  # A → H2
    restriction: Homomorphism | None = None  # H2 → Z/n, n = |π₁(X)| when cyclic

    def __post_init__(self) -> None:
        if self.c1.target != self.H2:
            raise ValueError("c1 must take values in H2")
        if self.restriction is not None and self.restriction.source != self.H2:
            raise ValueError("restriction must be defined on H2")


@dataclass(frozen=True)
class ExtensionClass:
    tensor: TensorProduct
    coords: Element

    @property
    def ambient(self) -> FgAbGroup:
        return self.tensor.group

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def terms(self) -> list[tuple[int, int, int]]:
        """(coefficient, H2 generator, coefficient-group generator) triples."""
        return self.tensor.expand(self.coords)


def theta_map(kr: KernelResult, dec: Decomposition) -> Homomorphism:
    """Z^q → K sending e_l to the class of column l of C."""
    images = [kr.k_coords(dec.column(l)) for l in range(dec.q)]
    return Homomorphism.from_images(FgAbGroup.free(dec.q), kr.K, images)


def compute_xi(kr: KernelResult, dec: Decomposition, coh: CohomologyModel) -> ExtensionClass:
    """ξ = Σ_l c1(M_l) ⊗ Θ(e_l) in H² ⊗ K."""
    theta = theta_map(kr, dec)
    T = TensorProduct(coh.H2, kr.K)
    total = T.group.zero()
    for l, Ml in enumerate(dec.M):
        total = T.group.add(total, T.eval(coh.c1(Ml), theta.column(l)))
    return ExtensionClass(T, total)


def compute_icf(bd: BuildingData, pic: PicardModel, dg: DeckGroupResult, coh: CohomologyModel) -> ExtensionClass:
    """Φ_*([D_1], ..., [D_k]) = Σ_j c1(D_j) ⊗ g̃_j in H² ⊗ G̃."""
    T = TensorProduct(coh.H2, dg.Gtilde)
    total = T.group.zero()
    for Dj, gt in zip(pic.D, dg.gtilde):
        total = T.group.add(total, T.eval(coh.c1(Dj), gt))
    return ExtensionClass(T, total)


def push_forward(cls: ExtensionClass, f: Homomorphism) -> ExtensionClass:
    """(id ⊗ f)(cls) for a coefficient map f."""
    H2 = cls.tensor.left
    dst = TensorProduct(H2, f.target)
    g = tensor_map(Homomorphism.identity(H2), f, cls.tensor, dst)
    return ExtensionClass(dst, g(cls.coords))


def check_xi_icf_consistency(xi: ExtensionClass, icf: ExtensionClass, inc_K: Homomorphism) -> bool:
    if xi.tensor.left != icf.tensor.left:
        raise ValueError("classes live over different H2 models")
    return push_forward(xi, inc_K).coords == icf.coords


@dataclass
class DivisibilityReport:
    divisible: list[bool]
    hypothesis_holds: bool
    icf_zero: bool | None  # only decided when the hypothesis holds


def is_divisible(G: FgAbGroup, x: Sequence[int], n: int) -> bool:
    times_n = Homomorphism.from_images(G, G, [G.scale(n, e) for e in G.gens()])
    return times_n.preimage(x) is not None


def check_divisibility_vanishing(bd: BuildingData, pic: PicardModel, coh: CohomologyModel,
                                 dg: DeckGroupResult) -> DivisibilityReport:
    """If every c1(D_j) is m_j-divisible in H², the class Φ_*([D_j]) must vanish."""
    div = [is_divisible(coh.H2, coh.c1(Dj), mj) for Dj, mj in zip(pic.D, bd.m)]
    holds = all(div)
    icf_zero = None
    if holds:
        icf_zero = compute_icf(bd, pic, dg, coh).is_zero
        if not icf_zero:
            raise AssertionError("m_j-divisible branch classes gave a nonzero class")
    return DivisibilityReport(div, holds, icf_zero)


@dataclass
class CorollaryReport:
    hom_surjective: bool
    splits: bool
    hom_to_G_trivial: bool
    i_injective_guaranteed: bool
    hom_to_Gtilde_order: int | float
    hom_to_G_order: int | float
    image_order: int | float


def _hom_order(Gamma: FgAbGroup, E: FgAbGroup) -> int | float:
    """|Hom(Γ, E)| = ∏_u |E[γ_u]| · |E|^rank."""
    out: int | float = E.order ** Gamma.free_rank if Gamma.free_rank else 1
    for g in Gamma.invariants:
        out *= multiplication_kernel(E, g).group.order
    return out


def corollary_conditions(Gamma: FgAbGroup, bd: BuildingData, dg: DeckGroupResult) -> CorollaryReport:
    """Sufficient conditions for H²(Γ, K) → H²(Γ, G̃) to be injective.

    Hom(Γ, E) = ⊕_u E[γ_u] ⊕ E^rank, so Hom(Γ, G̃) → Hom(Γ, G) is onto iff
    G̃[γ] → G[γ] is onto for every torsion invariant γ of Γ (free summands
    are always fine because G̃ → G is onto).
    """
    G = bd.G
    surjective = True
    image_order: int | float = 1 if not Gamma.free_rank else G.order ** Gamma.free_rank
    for g in Gamma.invariants:
        top = multiplication_kernel(dg.Gtilde, g)
        bottom = multiplication_kernel(G, g)
        img = subgroup(G, [dg.proj_G(G_t) for G_t in (dg.Gtilde.reduce(v) for v in top.lifts)])
        image_order *= img.group.order
        if img.group.order != bottom.group.order:
            surjective = False
    splits, _ = sequence_splits(dg.inc_K, dg.proj_G)
    hom_G = _hom_order(Gamma, G)
    trivial = hom_G == 1
    return CorollaryReport(
        hom_surjective=surjective,
        splits=splits,
        hom_to_G_trivial=trivial,
        i_injective_guaranteed=surjective or splits or trivial,
        hom_to_Gtilde_order=_hom_order(Gamma, dg.Gtilde),
        hom_to_G_order=hom_G,
        image_order=image_order,
    )


def cyclic_h2(n: int, K: FgAbGroup) -> tuple[FgAbGroup, Homomorphism]:
    """H²(Z/n, K) = K/nK for trivial action, with the quotient map from K."""
    return subgroup_quotient(K, [K.scale(n, e) for e in K.gens()])


def restrict_class(xi: ExtensionClass, restriction: Homomorphism) -> Element:
    """Image of ξ ∈ H² ⊗ K in H²(Z/n, K) = K/nK under restriction ⊗ id."""
    n = restriction.target.exponent
    K = xi.tensor.right
    Q, pr = cyclic_h2(n, K)
    H2 = xi.tensor.left
    total = Q.zero()
    for c, u, v in xi.terms():
        r = restriction(H2.gens()[u])
        value = r[0] if r else 0
        total = Q.add(total, Q.scale(c * value, pr(K.gens()[v])))
    return total


@dataclass
class CyclicExtension:
    E: FgAbGroup
    inc: Homomorphism  # K → E
    proj: Homomorphism  # E → Z/n
    splits: bool


def realize_cyclic_extension(n: int, K: FgAbGroup, kappa: Sequence[int]) -> CyclicExtension:
    """The central extension of Z/n by K with class κ ∈ K/nK: E = (Z ⊕ K)/⟨(n, −κ̂)⟩."""
    if n < 1:
        raise ValueError("n must be positive")
    Q, pr = cyclic_h2(n, K)
    lift = pr.preimage(Q.reduce(kappa))
    assert lift is not None
    s = K.ngens
    rels = [[0] + row for row in K.relation_rows()] + [[n] + [-x for x in lift]]
    sq = Subquotient([[int(i == j) for i in range(s + 1)] for j in range(s + 1)], rels, s + 1)
    Zn = FgAbGroup.cyclic(n)
    inc = Homomorphism.from_images(K, sq.group, [sq.coords([0] + list(e)) for e in K.gens()])
    proj = Homomorphism.from_images(sq.group, Zn, [Zn.reduce([w[0]] if Zn.ngens else []) for w in sq.lifts])
    splits, _ = sequence_splits(inc, proj)
    return CyclicExtension(sq.group, inc, proj, splits)
