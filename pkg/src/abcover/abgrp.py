"""Finitely generated abelian groups in invariant-factor form.

A group is ``Z/d_1 + ... + Z/d_t + Z^r`` with ``2 <= d_1 | d_2 | ... | d_t``.
Elements are tuples of ints in those canonical coordinates, reduced eagerly
(torsion coordinate u lives in ``[0, d_u)``).  Homomorphisms are integer
matrices whose columns are the images of the source generators.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

from . import matrix as mx

Element = tuple[int, ...]


class IllDefinedHomomorphism(ValueError):
    pass


class NotExact(ValueError):
    pass


@dataclass(frozen=True)
class FgAbGroup:
    invariants: tuple[int, ...] = ()
    free_rank: int = 0

    def __post_init__(self) -> None:
        object.__setattr__(self, "invariants", tuple(int(d) for d in self.invariants))
        for d in self.invariants:
            if d < 2:
                raise ValueError(f"torsion invariant {d} < 2")
        for a, b in zip(self.invariants, self.invariants[1:]):
            if b % a:
                raise ValueError(f"invariants {self.invariants} break the divisibility chain")
        if self.free_rank < 0:
            raise ValueError("negative free rank")

    @classmethod
    def cyclic(cls, n: int) -> "FgAbGroup":
        """Z/n (n = 0 gives Z, n = 1 the trivial group)."""
        if n == 0:
            return cls((), 1)
        return cls((n,) if n > 1 else ())

    @classmethod
    def free(cls, r: int) -> "FgAbGroup":
        return cls((), r)

    @classmethod
    def from_moduli(cls, moduli: Sequence[int]) -> "FgAbGroup":
        """Canonical form of the direct sum of Z/n_i (0 meaning Z)."""
        return canonicalize([_unit(len(moduli), i, n) for i, n in enumerate(moduli)], len(moduli))[0]

    @property
    def ngens(self) -> int:
        return len(self.invariants) + self.free_rank

    @property
    def moduli(self) -> tuple[int, ...]:
        return self.invariants + (0,) * self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.ngens == 0

    @property
    def order(self) -> int | float:
        return math.prod(self.invariants) if self.is_finite else math.inf

    @property
    def exponent(self) -> int:
        return self.invariants[-1] if self.invariants and self.is_finite else (1 if self.is_trivial else 0)

    def zero(self) -> Element:
        return (0,) * self.ngens

    def gens(self) -> list[Element]:
        return [tuple(int(i == u) for i in range(self.ngens)) for u in range(self.ngens)]

    def reduce(self, coords: Sequence[int]) -> Element:
        if len(coords) != self.ngens:
            raise ValueError(f"expected {self.ngens} coordinates, got {len(coords)}")
        return tuple(int(x) % d if d else int(x) for x, d in zip(coords, self.moduli))

    def add(self, x: Sequence[int], y: Sequence[int]) -> Element:
        return self.reduce([a + b for a, b in zip(x, y)])

    def scale(self, n: int, x: Sequence[int]) -> Element:
        return self.reduce([n * a for a in x])

    def neg(self, x: Sequence[int]) -> Element:
        return self.scale(-1, x)

    def combine(self, coeffs: Sequence[int], elems: Sequence[Sequence[int]]) -> Element:
        total = [0] * self.ngens
        for c, e in zip(coeffs, elems):
            for u, a in enumerate(e):
                total[u] += c * a
        return self.reduce(total)

    def element_order(self, x: Sequence[int]) -> int:
        """Order of x; 0 stands for infinite order."""
        x = self.reduce(x)
        if any(x[len(self.invariants):]):
            return 0
        return math.lcm(1, *(d // math.gcd(a, d) for a, d in zip(x, self.invariants)))

    def elements(self) -> Iterator[Element]:
        if not self.is_finite:
            raise ValueError("cannot enumerate an infinite group")
        return itertools.product(*(range(d) for d in self.invariants))

    def relation_rows(self) -> mx.Matrix:
        """Relations d_u e_u of the canonical presentation (torsion only)."""
        return [_unit(self.ngens, u, d) for u, d in enumerate(self.invariants)]

    def to_json(self) -> dict:
        return {"invariants": list(self.invariants), "free_rank": self.free_rank}

    def __str__(self) -> str:
        parts = [f"Z/{d}" for d in self.invariants] + ["Z"] * self.free_rank
        return " + ".join(parts) if parts else "0"


def _unit(n: int, i: int, scale: int = 1) -> list[int]:
    v = [0] * n
    v[i] = scale
    return v


@dataclass(frozen=True)
class Homomorphism:
    """Columns of ``matrix`` are images of the source canonical generators."""

    source: FgAbGroup
    target: FgAbGroup
    matrix: tuple[tuple[int, ...], ...]
    check: bool = field(default=True, compare=False, repr=False)

    def __post_init__(self) -> None:
        M = tuple(tuple(int(a) for a in row) for row in self.matrix)
        if len(M) != self.target.ngens or any(len(row) != self.source.ngens for row in M):
            raise ValueError(
                f"matrix shape does not match {self.target.ngens}x{self.source.ngens}"
            )
        # keep columns reduced in the target
        cols = [self.target.reduce([M[i][u] for i in range(len(M))]) for u in range(self.source.ngens)]
        M = tuple(tuple(col[i] for col in cols) for i in range(self.target.ngens))
        object.__setattr__(self, "matrix", M)
        if self.check:
            for u, d in enumerate(self.source.invariants):
                if any(self.target.scale(d, self.column(u))):
                    raise IllDefinedHomomorphism(
                        f"generator {u} has order {d} but its image does not"
                    )

    @classmethod
    def from_images(cls, source: FgAbGroup, target: FgAbGroup, images: Sequence[Sequence[int]]) -> "Homomorphism":
        images = [list(im) for im in images]
        return cls(source, target, tuple(tuple(im[i] for im in images) for i in range(target.ngens)))

    @classmethod
    def identity(cls, G: FgAbGroup) -> "Homomorphism":
        return cls.from_images(G, G, G.gens())

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> "Homomorphism":
        return cls.from_images(source, target, [target.zero()] * source.ngens)

    def column(self, u: int) -> Element:
        return tuple(row[u] for row in self.matrix)

    def images(self) -> list[Element]:
        return [self.column(u) for u in range(self.source.ngens)]

    def __call__(self, x: Sequence[int]) -> Element:
        x = self.source.reduce(x)
        return self.target.reduce(mx.matvec(self.matrix, x)) if self.matrix else self.target.zero()

    def compose(self, other: "Homomorphism") -> "Homomorphism":
        """self ∘ other."""
        if other.target != self.source:
            raise ValueError("cannot compose: groups do not match")
        return Homomorphism.from_images(other.source, self.target, [self(im) for im in other.images()])

    def preimage(self, y: Sequence[int]) -> Element | None:
        """Some x with f(x) = y, or None when y is not in the image."""
        y = self.target.reduce(y)
        if self.source.ngens == 0:
            return () if not any(y) else None
        s = solve_mixed_congruences(self.matrix, y, self.target.moduli) if self.target.ngens else [0] * self.source.ngens
        return None if s is None else self.source.reduce(s)

    def kernel(self) -> "Subquotient":
        return kernel_subquotient(self)

    def image(self) -> "Subquotient":
        return subgroup(self.target, self.images())

    def is_injective(self) -> bool:
        return self.kernel().group.is_trivial

    def is_surjective(self) -> bool:
        return subgroup_quotient(self.target, self.images())[0].is_trivial


class Subquotient:
    """The group L/R for lattices R ⊆ L ⊆ Z^n, in canonical form.

    ``lifts[u]`` is a vector of L representing canonical generator u, and
    ``coords(v)`` sends a vector of L to its canonical coordinates.
    """

    def __init__(self, upper: Sequence[Sequence[int]], lower: Sequence[Sequence[int]], n: int):
        self.n = n
        self.basis = mx.hnf_rows(list(upper) + list(lower), n)
        rels = []
        for v in lower:
            y = mx.echelon_coords(self.basis, v)
            if y is None:
                raise ValueError("lower lattice is not contained in the upper one")
            rels.append(y)
        rank = len(self.basis)
        self.group, self._to_canon, lifts = _canonical(rels, rank)
        self.lifts: list[Element] = [
            tuple(mx.matvec(mx.transpose(self.basis, n), w)) if rank else (0,) * n for w in lifts
        ]

    def contains(self, v: Sequence[int]) -> bool:
        return mx.echelon_coords(self.basis, v) is not None

    def coords(self, v: Sequence[int]) -> Element:
        y = mx.echelon_coords(self.basis, v)
        if y is None:
            raise ValueError(f"{tuple(v)} is not in the lattice")
        return self.group.reduce(mx.matvec(self._to_canon, y)) if self.group.ngens else ()


def _canonical(relations: Sequence[Sequence[int]], n: int) -> tuple[FgAbGroup, mx.Matrix, list[list[int]]]:
    """Core of :func:`canonicalize`.

    Returns the group, the matrix sending Z^n coordinates to canonical
    coordinates, and for each canonical generator a vector of Z^n lifting it.
    """
    rels = [list(r) for r in relations if any(r)]
    if not rels:
        G = FgAbGroup((), n)
        return G, mx.identity(n), mx.identity(n)
    U, D, V, Vinv = mx.snf_full(rels)
    diag = mx.diagonal(D) + [0] * (n - min(len(rels), n))
    keep = [i for i, d in enumerate(diag) if d != 1]
    # x ↦ x·V moves relations onto the diagonal; row i of V^{-1} lifts generator i
    to_canon = [[V[a][i] for a in range(n)] for i in keep]
    lifts = [Vinv[i] for i in keep]
    G = FgAbGroup(tuple(diag[i] for i in keep if diag[i]), sum(1 for i in keep if diag[i] == 0))
    return G, to_canon, lifts


def snf(M: Sequence[Sequence[int]]) -> tuple[mx.Matrix, mx.Matrix, mx.Matrix]:
    return mx.snf(M)


def canonicalize(relations: Sequence[Sequence[int]], num_generators: int) -> tuple[FgAbGroup, Homomorphism]:
    """Group presented by ``num_generators`` generators and the given relation rows.

    >>> G, f = canonicalize([[4, 0, 0], [0, 4, 0], [0, 0, 4], [2, 2, 2]], 3)
    >>> G.invariants
    (2, 4, 4)
    """
    for r in relations:
        if len(r) != num_generators:
            raise ValueError("relation length does not match the number of generators")
    G, to_canon, _ = _canonical(relations, num_generators)
    return G, Homomorphism(FgAbGroup.free(num_generators), G, tuple(map(tuple, to_canon)), check=False)


def subgroup(G: FgAbGroup, gens: Sequence[Sequence[int]]) -> Subquotient:
    """The subgroup generated by ``gens``; its lifts are elements of G (unreduced)."""
    rels = G.relation_rows()
    return Subquotient([list(g) for g in gens] + rels, rels, G.ngens)


def subgroup_order(G: FgAbGroup, gens: Sequence[Sequence[int]]) -> int | float:
    return subgroup(G, gens).group.order


def subgroup_inclusion(G: FgAbGroup, gens: Sequence[Sequence[int]]) -> Homomorphism:
    S = subgroup(G, gens)
    return Homomorphism.from_images(S.group, G, [G.reduce(v) for v in S.lifts])


def subgroup_quotient(G: FgAbGroup, gens: Sequence[Sequence[int]]) -> tuple[FgAbGroup, Homomorphism]:
    """G/⟨gens⟩ in canonical form together with the projection."""
    Q, to_canon, _ = _canonical(G.relation_rows() + [list(g) for g in gens], G.ngens)
    return Q, Homomorphism(G, Q, tuple(map(tuple, to_canon)))


def kernel_subquotient(f: Homomorphism) -> Subquotient:
    S, T = f.source, f.target
    s, t = S.ngens, T.ngens
    if t == 0:
        lattice = mx.identity(s)
    else:
        # f(x) = 0  iff  M·x = diag(target moduli)·y for some integer y
        big = [list(f.matrix[i]) + [-T.moduli[i] if i == j else 0 for j in range(t)] for i in range(t)]
        lattice = [row[:s] for row in mx.kernel(big, s + t)]
    rels = S.relation_rows()
    return Subquotient(lattice + rels, rels, s)


def hom_kernel(f: Homomorphism) -> list[Element]:
    """Generators of ker f (canonical generators of the kernel); [] if trivial."""
    K = kernel_subquotient(f)
    return [f.source.reduce(v) for v in K.lifts]


def solve_mixed_congruences(
    A: Sequence[Sequence[int]], b: Sequence[int], moduli: Sequence[int]
) -> list[int] | None:
    """Solve (A·s)_i ≡ b_i mod moduli_i (0 = exact equality).

    Returns the lexicographically least solution that is reduced modulo the
    lattice of homogeneous solutions, or None when no solution exists.

    >>> solve_mixed_congruences([[2, 1], [1, 0]], [1, 0], [4, 2])
    [0, 1]
    >>> solve_mixed_congruences([[2]], [1], [4]) is None
    True
    """
    rows = len(A)
    if len(b) != rows or len(moduli) != rows:
        raise ValueError("inconsistent dimensions")
    m = len(A[0]) if rows else 0
    if rows == 0:
        return [0] * m
    big = [list(A[i]) + [-moduli[i] if i == j else 0 for j in range(rows)] for i in range(rows)]
    z = mx.solve(big, list(b), m + rows)
    if z is None:
        return None
    homog = mx.hnf_rows([row[:m] for row in mx.kernel(big, m + rows)], m)
    return mx.echelon_reduce(homog, z[:m])


class TensorProduct:
    """G ⊗ K with canonical coordinates and the bilinear evaluation map."""

    def __init__(self, G: FgAbGroup, K: FgAbGroup):
        self.left, self.right = G, K
        self.pairs = [(u, v) for u in range(G.ngens) for v in range(K.ngens)]
        n = len(self.pairs)
        rels = [_unit(n, i, math.gcd(G.moduli[u], K.moduli[v])) for i, (u, v) in enumerate(self.pairs)]
        self.group, self._to_canon, self._lifts = _canonical(rels, n)

    def basic(self, u: int, v: int) -> Element:
        """Coordinates of e_u ⊗ f_v."""
        i = self.pairs.index((u, v))
        return self.group.reduce([row[i] for row in self._to_canon]) if self.group.ngens else ()

    def eval(self, x: Sequence[int], y: Sequence[int]) -> Element:
        x, y = self.left.reduce(x), self.right.reduce(y)
        total = [0] * len(self.pairs)
        for i, (u, v) in enumerate(self.pairs):
            total[i] = x[u] * y[v]
        return self.group.reduce(mx.matvec(self._to_canon, total)) if self.group.ngens else ()

    def expand(self, z: Sequence[int]) -> list[tuple[int, int, int]]:
        """Write z as a sum of basic tensors: list of (coefficient, u, v)."""
        z = self.group.reduce(z)
        pair_coeffs = [0] * len(self.pairs)
        for w, lift in zip(z, self._lifts):
            for i, a in enumerate(lift):
                pair_coeffs[i] += w * a
        return [(c, u, v) for c, (u, v) in zip(pair_coeffs, self.pairs) if c]


def tensor_with(G: FgAbGroup, K: FgAbGroup) -> tuple[FgAbGroup, Callable[[Sequence[int], Sequence[int]], Element]]:
    T = TensorProduct(G, K)
    return T.group, T.eval


def tensor_map(f: Homomorphism, g: Homomorphism, src: TensorProduct, dst: TensorProduct) -> Homomorphism:
    """f ⊗ g : src → dst."""
    if src.left != f.source or src.right != g.source or dst.left != f.target or dst.right != g.target:
        raise ValueError("tensor products do not match the maps")
    images = []
    for z in src.group.gens():
        acc = dst.group.zero()
        for c, u, v in src.expand(z):
            acc = dst.group.add(acc, dst.group.scale(c, dst.eval(f.column(u), g.column(v))))
        images.append(acc)
    return Homomorphism.from_images(src.group, dst.group, images)


def multiplication_kernel(G: FgAbGroup, n: int) -> Subquotient:
    """The n-torsion subgroup G[n]."""
    return kernel_subquotient(Homomorphism.from_images(G, G, [G.scale(n, e) for e in G.gens()]))


def sequence_splits(inc: Homomorphism, proj: Homomorphism) -> tuple[bool, Homomorphism | None]:
    """Decide whether 0 → K → E → G → 0 splits and return a section if it does.

    The obstruction is computed generator by generator: lift e_u of Z/d_u
    to E, write d_u·lift = inc(k_u); the sequence splits iff every k_u lies
    in d_u·K (the Ext class in ⊕ K/d_u K vanishes).
    """
    K, E, G = inc.source, inc.target, proj.target
    if proj.source != E:
        raise NotExact("inc and proj do not compose")
    if not inc.is_injective():
        raise NotExact("inclusion is not injective")
    if not proj.is_surjective():
        raise NotExact("projection is not surjective")
    if any(any(proj(im)) for im in inc.images()):
        raise NotExact("image of inc is not contained in ker proj")
    for x in hom_kernel(proj):
        if inc.preimage(x) is None:
            raise NotExact("ker proj is larger than the image of inc")

    section = []
    for u, e in enumerate(G.gens()):
        lift = proj.preimage(e)
        assert lift is not None
        d = G.moduli[u]
        if d == 0:
            section.append(lift)
            continue
        k = inc.preimage(E.scale(d, lift))
        assert k is not None
        a = solve_mixed_congruences([[d if i == j else 0 for j in range(K.ngens)] for i in range(K.ngens)], list(k), K.moduli) if K.ngens else []
        if a is None:
            return False, None
        section.append(E.add(lift, E.neg(inc(a))))
    return True, Homomorphism.from_images(G, E, section)
