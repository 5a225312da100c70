import random
from fractions import Fraction

import pytest

from abcover.abgrp import FgAbGroup
from abcover.cover import (
    BuildingData,
    Character,
    PicardModel,
    building_data,
    character_coefficients,
    character_components,
    character_from_components,
    check_characteristic_relations,
    derive_eigensheaf_class,
    has_prime_power_characters,
    prime_factors,
    refine_prime_power,
    validate_building_data,
)
from abcover.generators import random_building_data, random_picard_model
from cases import bidouble_data, bidouble_picard, quartic_data, quartic_picard


def test_character_arithmetic():
    G = FgAbGroup((2, 4))
    chi = Character.from_dual(G, (1, 1))
    assert chi.values == (Fraction(1, 2), Fraction(1, 4))
    assert chi.order() == 4
    assert (2 * chi).order() == 2
    assert (chi + 3 * chi).order() == 1
    assert chi((1, 1)) == Fraction(3, 4)
    assert chi.dual_coords(G) == (1, 1)
    assert Character.trivial(G).order() == 1
    assert not Character((Fraction(1, 3), Fraction(0))).is_character_of(G)


def test_quartic_data_is_valid():
    bd = quartic_data()
    assert bd.G.invariants == (2, 4, 4)
    assert bd.d == (4, 4, 2)
    assert validate_building_data(bd).ok
    assert bd.components() == [[1, 0, 3], [0, 1, 3], [0, 0, 2]]


def test_order_mismatch_and_total_ramification():
    G = FgAbGroup((4,))
    bd = BuildingData(G, (4,), ((2,),), (Character.from_dual(G, (1,)),), (4,))
    rep = validate_building_data(bd)
    assert not rep.ok and "inertia order mismatch" in rep.failures[0]
    G = FgAbGroup((2, 2))
    bd = BuildingData(G, (2,), ((1, 0),), (), ())
    rep = validate_building_data(bd)
    assert any("not totally ramified" in f for f in rep.failures)


def test_non_direct_sum_characters_rejected():
    G = FgAbGroup((2, 2))
    chi = Character.from_dual(G, (1, 0))
    bd = BuildingData(G, (2, 2), ((1, 0), (0, 1)), (chi, chi), (2, 2))
    assert not validate_building_data(bd).ok
    bd = BuildingData(G, (2, 2), ((1, 0), (0, 1)), (chi,), (4,))
    assert not validate_building_data(bd).ok


def test_character_components_examples():
    bd = quartic_data()
    assert character_components(bd, Character.trivial(bd.G)) == [0, 0, 0]
    assert character_components(bd, bd.chi[0]) == [1, 0, 3]
    assert character_components(bd, bd.chi[2]) == [0, 0, 2]
    with pytest.raises(ValueError):
        # (1, 0, 0) would need χ(2,2,2) = 1/2 ≠ 0
        character_from_components(bd.G, bd.m, bd.g, (1, 0, 0))


def test_components_are_injective_and_additive():
    rng = random.Random(4)
    for _ in range(30):
        bd = random_building_data(rng, 32, 3)
        seen = {}
        for x in FgAbGroup(bd.G.invariants).elements():
            chi = Character.from_dual(bd.G, x)
            comps = tuple(character_components(bd, chi))
            assert comps not in seen
            seen[comps] = chi
        chars = list(seen.values())
        c1, c2 = rng.choice(chars), rng.choice(chars)
        s = character_components(bd, c1 + c2)
        assert s == [(a + b) % m for a, b, m in zip(character_components(bd, c1), character_components(bd, c2), bd.m)]


def test_characteristic_relations_on_quartic_data():
    bd = quartic_data()
    assert check_characteristic_relations(bd, quartic_picard(1)).ok
    rep = check_characteristic_relations(bd, quartic_picard(2))
    assert not rep.ok and "relation 2" in rep.failures[0]


def test_single_branch_double_cover():
    G = FgAbGroup((2,))
    bd = building_data(G, (2,), [(1,)], [(1,)])
    pic = PicardModel(FgAbGroup.free(1), ((2,),), ((1,),))
    assert validate_building_data(bd).ok
    assert check_characteristic_relations(bd, pic).ok


def test_eigensheaf_formula():
    bd, pic = quartic_data(), quartic_picard(1)
    A = pic.A
    assert derive_eigensheaf_class(bd, pic, Character.trivial(bd.G)) == A.zero()
    for chi, L in zip(bd.chi, pic.L):
        assert derive_eigensheaf_class(bd, pic, chi) == L
    chi = bd.chi[0] + bd.chi[1]
    assert character_components(bd, chi) == [1, 1, 2]
    # L_χ1 + L_χ2 − D_3
    assert derive_eigensheaf_class(bd, pic, chi) == (2,)


def test_eigensheaf_classes_satisfy_their_relation():
    rng = random.Random(9)
    for _ in range(25):
        bd = random_building_data(rng, 32, 3)
        pic = random_picard_model(rng, bd)
        assert check_characteristic_relations(bd, pic).ok
        A = pic.A
        for x in FgAbGroup(bd.G.invariants).elements():
            chi = Character.from_dual(bd.G, x)
            d = chi.order()
            a = character_components(bd, chi)
            L = derive_eigensheaf_class(bd, pic, chi)
            assert A.scale(d, L) == A.combine([d * aj // mj for aj, mj in zip(a, bd.m)], pic.D)


def test_character_coefficients():
    bd = quartic_data()
    chi = 3 * bd.chi[0] + bd.chi[2]
    assert character_coefficients(bd, chi) == [3, 0, 1]


def test_prime_power_refinement():
    assert prime_factors(360) == [(2, 3), (3, 2), (5, 1)]
    G = FgAbGroup((6,))
    bd = building_data(G, (6,), [(1,)], [(1,)])
    pic = PicardModel(FgAbGroup.free(1), ((6,),), ((1,),))
    assert check_characteristic_relations(bd, pic).ok
    assert not has_prime_power_characters(bd)
    rbd, rpic = refine_prime_power(bd, pic)
    assert rbd.d == (2, 3) and has_prime_power_characters(rbd)
    assert validate_building_data(rbd).ok
    assert check_characteristic_relations(rbd, rpic).ok


def test_picard_model_validation():
    A = FgAbGroup((2,), 1)
    assert PicardModel(A, ((0, 1),), ((1, 0),)).validate().ok
    assert not PicardModel(A, ((0, 2),), ((1, 0),)).validate().ok


def test_bidouble_relations():
    bd, pic = bidouble_data(), bidouble_picard()
    assert validate_building_data(bd).ok
    assert check_characteristic_relations(bd, pic).ok
