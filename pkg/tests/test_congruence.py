import itertools
import random

import pytest

from abcover.congruence import (
    InvalidHypotheses,
    LemmaSystem,
    crt_combine,
    is_prime,
    p_valuation,
    rank_mod_p,
    solve_lifting,
    solve_mod_p,
)
from abcover.generators import random_lemma_system


def satisfies(system, s):
    q = system.p**system.gamma
    return all((sum(c * x for c, x in zip(row, s)) - xi) % q == 0 for row, xi in zip(system.coefficients(), system.x))


def has_solution(system):
    q = system.p**system.gamma
    return any(satisfies(system, s) for s in itertools.product(range(q), repeat=len(system.h)))


def test_helpers():
    assert [p for p in range(20) if is_prime(p)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert p_valuation(48, 2) == 4 and p_valuation(7, 3) == 0
    assert rank_mod_p([[2, 4], [1, 2]], 2) == 1
    assert rank_mod_p([[1, 1], [1, 2]], 3) == 2


def test_solve_mod_p():
    s = solve_mod_p([[1, 2], [0, 1]], [1, 1], 5)
    assert s == [4, 1]
    assert solve_mod_p([[1, 1], [1, 1]], [0, 1], 2) is None


def test_single_character_example():
    # H = Z/4, χ = ζ of order 4, modulus 8
    system = LemmaSystem(h=(4,), a=((1,),), d=(4,), p=2, gamma=3, x=(5,))
    s = solve_lifting(system)
    assert s == [5]
    assert satisfies(system, s)


def test_two_characters_in_z4_plus_z2():
    # χ1 = ζ1, χ2 = 2ζ1 + ζ2: independent with orders 4 and 2
    system = LemmaSystem(h=(4, 2), a=((1, 0), (2, 1)), d=(4, 2), p=2, gamma=2, x=(3, 1))
    assert system.coefficients() == [[1, 0], [1, 1]]
    s = solve_lifting(system)
    assert satisfies(system, s) and all(0 <= v < 4 for v in s)


def test_dependent_characters_rejected():
    # χ2 = 2χ1, so ⟨χ1, χ2⟩ is not a direct sum
    system = LemmaSystem(h=(4, 2), a=((1, 0), (2, 0)), d=(4, 2), p=2, gamma=2, x=(1, 1))
    with pytest.raises(InvalidHypotheses):
        solve_lifting(system)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(h=(4,), a=((1,),), d=(4,), p=4, gamma=1, x=(0,)),
        dict(h=(4,), a=((1,),), d=(4,), p=2, gamma=0, x=(0,)),
        dict(h=(4,), a=((1,),), d=(3,), p=2, gamma=1, x=(0,)),
        dict(h=(4,), a=((5,),), d=(4,), p=2, gamma=1, x=(0,)),
        dict(h=(4,), a=((1,),), d=(4,), p=2, gamma=1, x=(0, 1)),
        dict(h=(6,), a=((1,),), d=(2,), p=2, gamma=1, x=(0,)),
    ],
)
def test_invalid_hypotheses(kwargs):
    with pytest.raises(InvalidHypotheses):
        solve_lifting(LemmaSystem(**kwargs))


def test_non_p_parts_in_h():
    # h = 12 = 4·3: the element 3 of Z/12 has order 4
    system = LemmaSystem(h=(12,), a=((3,),), d=(4,), p=2, gamma=2, x=(3,))
    assert system.coefficients() == [[1]]
    assert satisfies(system, solve_lifting(system))


def test_random_systems_against_brute_force():
    rng = random.Random(2024)
    for _ in range(150):
        system = random_lemma_system(rng, max_modulus=27, max_m=3)
        s = solve_lifting(system)
        assert satisfies(system, s)
        if (system.p**system.gamma) ** len(system.h) <= 4000:
            assert has_solution(system)


def test_crt_combine():
    assert crt_combine([([1], 2), ([2], 3)]) == [5]
    out = crt_combine([([1, 3], 4), ([2, 0], 9), ([4, 1], 5)])
    for residues, n in [([1, 3], 4), ([2, 0], 9), ([4, 1], 5)]:
        assert [o % n for o in out] == [r % n for r in residues]
    assert all(0 <= o < 180 for o in out)
    with pytest.raises(ValueError):
        crt_combine([([1], 4), ([1], 6)])
    assert crt_combine([]) == []
