import random

import pytest

from abcover.abgrp import FgAbGroup, subgroup_inclusion
from abcover.cover import PicardModel, building_data, refine_prime_power
from abcover.decomp import (
    DecompositionFailure,
    coordinates,
    decompose_divisors,
    prime_power_basis,
    randomize_basis,
    verify_columns_in_N,
)
from abcover.generators import random_building_data, random_picard_model
from cases import bidouble_data, bidouble_picard, quartic_data, quartic_picard


def test_prime_power_basis():
    A = FgAbGroup((2, 12), 1)
    M, orders = prime_power_basis(A)
    assert orders == [2, 4, 3, 0]
    assert [A.element_order(x) for x in M[:3]] == [2, 4, 3]


def test_quartic_decomposition():
    dec = decompose_divisors(quartic_data(), quartic_picard(1))
    assert dec.M == ((1,),)
    assert dec.orders == (0,)
    assert dec.C == ((2,), (2,), (2,))


def test_quartic_twisted_picard_group():
    # A = ⟨4H, 2H + η⟩ inside Z⟨H⟩ + Z/2⟨η⟩ is cyclic on 2H + η
    amb = FgAbGroup((2,), 1)  # coordinates (η, H)
    inc = subgroup_inclusion(amb, [(0, 4), (1, 2)])
    assert inc.source == FgAbGroup.free(1)
    assert inc((1,)) in {(1, 2), (1, -2)}


def test_bidouble_decomposition():
    dec = decompose_divisors(bidouble_data(), bidouble_picard())
    assert dec.M == ((1,),) and dec.C == ((1,), (1,), (1,))


def test_verify_columns_examples():
    bd = quartic_data()
    assert verify_columns_in_N(bd, [[0], [0], [0]]).ok
    assert verify_columns_in_N(bd, [[2], [2], [2]]).ok
    rep = verify_columns_in_N(bd, [[1], [0], [0]])
    assert not rep.ok and "column 0" in rep.failures[0]
    assert not verify_columns_in_N(bd, [[1], [0]]).ok


def test_requires_prime_power_characters():
    G = FgAbGroup((6,))
    bd = building_data(G, (6,), [(1,)], [(1,)])
    pic = PicardModel(FgAbGroup.free(1), ((6,),), ((1,),))
    with pytest.raises(DecompositionFailure):
        decompose_divisors(bd, pic)
    rbd, rpic = refine_prime_power(bd, pic)
    dec = decompose_divisors(rbd, rpic)
    assert dec.C == ((6,),)


def test_inconsistent_relations_rejected():
    with pytest.raises(DecompositionFailure):
        decompose_divisors(quartic_data(), quartic_picard(2))


def test_torsion_needs_lifting():
    # G = Z/4 on one branch, A = Z/2: D = 0 forces nothing, but the
    # representative 2·M of the torsion column must be moved into N = 0 mod 4
    G = FgAbGroup((4,))
    bd = building_data(G, (4,), [(1,)], [(1,)])
    pic = PicardModel(FgAbGroup((2,)), ((0,),), ((1,),))
    dec = decompose_divisors(bd, pic)
    assert dec.orders == (2,)
    assert dec.C[0][0] % 4 == 0
    assert dec.reconstruct(pic.A) == [(0,)]


def test_random_decompositions():
    rng = random.Random(31)
    for _ in range(60):
        bd = random_building_data(rng, 32, 3)
        pic = random_picard_model(rng, bd, torsion=rng.choice([(), (2,), (4,), (2, 4), (3,), (8,)]))
        bd, pic = refine_prime_power(bd, pic)
        for seed in (None, 1, 2):
            dec = decompose_divisors(bd, pic, None if seed is None else random.Random(seed))
            assert dec.reconstruct(pic.A) == list(pic.D)
            assert verify_columns_in_N(bd, [list(r) for r in dec.C]).ok
            for l in range(dec.q):
                col = tuple(c % m for c, m in zip(dec.column(l), bd.m))
                assert not any(bd.G.combine(col, bd.g))


def test_randomized_basis_keeps_shape():
    rng = random.Random(2)
    A = FgAbGroup((2, 4, 8), 1)
    M, orders = prime_power_basis(A)
    for _ in range(20):
        M2 = randomize_basis(A, M, orders, rng)
        assert [A.element_order(x) for x in M2] == orders
        for x in A.gens():
            c = coordinates(A, M2, orders, x)
            assert A.combine(c, M2) == x
