"""The full computation for one scenario, shared by the CLI and the self-test."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .cover import BuildingData, PicardModel, has_prime_power_characters, refine_prime_power
from .decomp import Decomposition, decompose_divisors
from .extclass import (
    CyclicExtension,
    ExtensionClass,
    check_xi_icf_consistency,
    compute_icf,
    compute_xi,
    realize_cyclic_extension,
    restrict_class,
)
from .scenario import Scenario
from .topology import DeckGroupResult, compute_G_tilde


class MissingInput(ValueError):
    """A command needs a part of the scenario that was not supplied."""


def prime_power_form(bd: BuildingData, pic: PicardModel) -> tuple[BuildingData, PicardModel, bool]:
    if has_prime_power_characters(bd):
        return bd, pic, False
    rbd, rpic = refine_prime_power(bd, pic)
    assert rpic is not None
    return rbd, rpic, True


@dataclass
class Pipeline:
    sc: Scenario
    rng: random.Random | None = None

    def __post_init__(self) -> None:
        self._dg: DeckGroupResult | None = None
        self._dec: tuple[BuildingData, PicardModel, Decomposition, bool] | None = None

    @property
    def deck(self) -> DeckGroupResult:
        if self._dg is None:
            self._dg = compute_G_tilde(self.sc.bd, self.sc.rho)
        return self._dg

    @property
    def decomposition(self) -> tuple[BuildingData, PicardModel, Decomposition, bool]:
        if self._dec is None:
            bd, pic, refined = prime_power_form(self.sc.bd, self.sc.pic)
            self._dec = (bd, pic, decompose_divisors(bd, pic, self.rng), refined)
        return self._dec

    def xi(self) -> ExtensionClass:
        # K depends only on G, g, m and rho, so the refined data give the same K
        return compute_xi(self.deck.kernel, self.decomposition[2], self.sc.coh)

    def icf(self) -> ExtensionClass:
        return compute_icf(self.sc.bd, self.sc.pic, self.deck, self.sc.coh)

    def consistent(self) -> bool:
        return check_xi_icf_consistency(self.xi(), self.icf(), self.deck.inc_K)

    def kappa(self) -> tuple[int, ...]:
        if self.sc.coh.restriction is None:
            raise MissingInput('the scenario has no "restriction" to H2(Z/n, Z)')
        return restrict_class(self.xi(), self.sc.coh.restriction)

    def realize(self) -> CyclicExtension:
        if self.sc.pi1_cyclic is None:
            raise MissingInput('realize needs "pi1": {"cyclic": n}')
        return realize_cyclic_extension(self.sc.pi1_cyclic, self.deck.kernel.K, self.kappa())
