import itertools
import math
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abcover import matrix as mx


def leibniz_det(M):
    n = len(M)
    total = 0
    for perm in itertools.permutations(range(n)):
        inversions = sum(1 for i in range(n) for j in range(i + 1, n) if perm[i] > perm[j])
        total += (-1) ** inversions * math.prod(M[i][perm[i]] for i in range(n))
    return total


def minor_gcd(M, size):
    rows, cols = len(M), len(M[0])
    g = 0
    for r in itertools.combinations(range(rows), size):
        for c in itertools.combinations(range(cols), size):
            g = math.gcd(g, mx.det([[M[i][j] for j in c] for i in r]))
    return g


matrices = st.integers(1, 5).flatmap(
    lambda r: st.integers(1, 5).flatmap(
        lambda c: st.lists(st.lists(st.integers(-30, 30), min_size=c, max_size=c), min_size=r, max_size=r)
    )
)


def test_snf_small_example():
    U, D, V = mx.snf([[2, 4], [6, 8]])
    assert D == [[2, 0], [0, 4]]
    assert mx.matmul(mx.matmul(U, [[2, 4], [6, 8]]), V) == D


def test_snf_of_presentation_with_extra_relation():
    M = [[4, 0, 0], [0, 4, 0], [0, 0, 4], [2, 2, 2]]
    _, D, _ = mx.snf(M)
    assert mx.diagonal(D) == [2, 4, 4]
    assert D[3] == [0, 0, 0]


def test_snf_zero_and_empty():
    _, D, _ = mx.snf([[0, 0], [0, 0]])
    assert D == [[0, 0], [0, 0]]
    U, D, V = mx.snf([], cols=2)
    assert D == [] and V == mx.identity(2)


@settings(max_examples=150, deadline=None)
@given(matrices)
def test_snf_properties(M):
    U, D, V = mx.snf(M)
    assert mx.matmul(mx.matmul(U, M), V) == D
    assert abs(mx.det(U)) == 1 and abs(mx.det(V)) == 1
    diag = mx.diagonal(D)
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    nonzero = [d for d in diag if d]
    assert all(d > 0 for d in nonzero)
    assert diag[: len(nonzero)] == nonzero
    assert all(b % a == 0 for a, b in zip(nonzero, nonzero[1:]))
    # product of the first s invariant factors is the gcd of the s×s minors
    for s in range(1, min(len(M), len(M[0]), 3) + 1):
        assert math.prod(diag[:s]) == minor_gcd(M, s)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(st.integers(-9, 9), min_size=n, max_size=n), min_size=n, max_size=n)))
def test_det_matches_leibniz(M):
    assert mx.det(M) == leibniz_det(M)


def test_snf_full_inverse():
    rng = random.Random(5)
    for _ in range(100):
        r, c = rng.randint(1, 5), rng.randint(1, 5)
        M = [[rng.randint(-20, 20) for _ in range(c)] for _ in range(r)]
        _, _, V, Vinv = mx.snf_full(M)
        assert mx.matmul(V, Vinv) == mx.identity(c)


def test_hnf_rows_is_echelon_and_spans():
    rows = [[2, 4, 6], [1, 1, 1], [3, 5, 7]]
    H = mx.hnf_rows(rows, 3)
    assert H == [[1, 1, 1], [0, 2, 4]]
    for r in rows:
        assert mx.echelon_coords(H, r) is not None
    assert mx.echelon_coords(H, [0, 1, 0]) is None


def test_kernel_and_solve():
    M = [[1, 2, 3], [2, 4, 6]]
    K = mx.kernel(M, 3)
    assert len(K) == 2
    for v in K:
        assert mx.matvec(M, v) == [0, 0]
    assert mx.solve([[2, 0], [0, 3]], [4, 9], 2) == [2, 3]
    assert mx.solve([[2]], [3], 1) is None


@settings(max_examples=100, deadline=None)
@given(matrices, st.data())
def test_solve_finds_integer_solutions(M, data):
    x = data.draw(st.lists(st.integers(-5, 5), min_size=len(M[0]), max_size=len(M[0])))
    b = mx.matvec(M, x)
    y = mx.solve(M, b, len(M[0]))
    assert y is not None and mx.matvec(M, y) == b


def test_rank():
    assert mx.rank([[1, 2], [2, 4]]) == 1
    assert mx.rank([[0]]) == 0
    with pytest.raises(ValueError):
        mx.det([[1, 2]])
