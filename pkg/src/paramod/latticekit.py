"""Full-rank lattices in the weight space and their finite quotients.

A :class:`Lattice` is spanned by rational rows in fundamental-weight
coordinates. Its bilinear form is the normalized invariant form multiplied by
``scale``; scaling the form by ``k`` models the lattice ``sqrt(k) L`` without
irrational coordinates.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import NamedTuple, Sequence

from sympy import Matrix as SymMatrix
from sympy import ZZ
from sympy.matrices.normalforms import hermite_normal_form, smith_normal_decomp

from . import _linalg as la
from .errors import LatticeError
from .rootsys import AlgebraDescriptor, WeightVec, inner


@dataclass(frozen=True, eq=False)
class Lattice:
    alg: AlgebraDescriptor
    basis: la.Matrix
    label: str = ""
    scale: Fraction = Fraction(1)

    def __post_init__(self):
        basis = la.to_matrix(self.basis)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "scale", Fraction(self.scale))
        if len(basis) != self.alg.rank or any(len(r) != self.alg.rank for r in basis):
            raise LatticeError(f"basis must be {self.alg.rank}x{self.alg.rank}")
        if la.det(basis) == 0:
            raise LatticeError(f"degenerate basis for lattice {self.label!r}")

    @cached_property
    def gram(self) -> la.Matrix:
        return la.scale(la.matmul(la.matmul(self.basis, self.alg.gram), la.transpose(self.basis)), self.scale)

    @cached_property
    def basis_inverse(self) -> la.Matrix:
        return la.inverse(self.basis)

    @property
    def rank(self) -> int:
        return self.alg.rank

    def vectors(self) -> tuple[WeightVec, ...]:
        return tuple(WeightVec(r) for r in self.basis)

    def form(self, u: Sequence, v: Sequence) -> Fraction:
        """The lattice's (scaled) bilinear form on weight-coordinate vectors."""
        return self.scale * inner(self.alg, u, v)

    def coordinates(self, x: Sequence) -> tuple[Fraction, ...]:
        """Coordinates of ``x`` in this lattice's basis (rational in general)."""
        return la.vecmat(tuple(x), self.basis_inverse)

    def contains(self, x: Sequence) -> bool:
        return all(c.denominator == 1 for c in self.coordinates(x))

    def contains_lattice(self, other: "Lattice") -> bool:
        return all(self.contains(r) for r in other.basis)

    def determinant(self) -> Fraction:
        return la.det(self.gram)

    def is_integral(self) -> bool:
        return la.is_integral(self.gram)

    def is_even(self) -> bool:
        return self.is_integral() and all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def is_positive_definite(self) -> bool:
        return la.leading_minors_positive(self.gram)

    def __eq__(self, other):
        if not isinstance(other, Lattice):
            return NotImplemented
        return (
            self.alg is other.alg
            and self.scale == other.scale
            and self.contains_lattice(other)
            and other.contains_lattice(self)
        )

    __hash__ = None

    def __repr__(self):
        return f"Lattice({self.label or '?'}, {self.alg.name}, scale={self.scale})"


class StandardLattices(NamedTuple):
    Q: Lattice
    Q_L: Lattice
    P: Lattice
    Q_dual: Lattice


def _row_span_basis(rows: Sequence[Sequence[int]]) -> list[list[int]]:
    """Integer basis of the row span of an integer matrix (Hermite normal form)."""
    h = hermite_normal_form(SymMatrix(rows).T)
    return [[int(x) for x in row] for row in h.T.tolist()]


@lru_cache(maxsize=None)
def standard_lattices(alg: AlgebraDescriptor) -> StandardLattices:
    l = alg.rank
    q = Lattice(alg, [r.coords for r in alg.simple_roots], "Q")
    long_rc = [[int(x) for x in alg.to_root_coords(r)] for r in alg.long_roots]
    ql_rc = _row_span_basis(long_rc)
    q_l = Lattice(alg, [alg.from_root_coords(c).coords for c in ql_rc], "Q_L")
    p = Lattice(alg, la.identity(l), "P")
    q_dual = dual_lattice(q)
    q_dual = Lattice(alg, q_dual.basis, "Q°")
    return StandardLattices(q, q_l, p, q_dual)


def dual_lattice(L: Lattice) -> Lattice:
    """{x : (x, L) in Z} for the lattice's own (scaled) form."""
    g = L.gram
    if la.det(g) == 0:
        raise LatticeError("degenerate form")
    basis = la.matmul(la.inverse(g), L.basis)
    return Lattice(L.alg, basis, f"{L.label}°" if L.label else "", L.scale)


def scale(L: Lattice, s) -> Lattice:
    """Multiply the bilinear form by ``s`` (models sqrt(s) * L)."""
    s = Fraction(s)
    if s <= 0:
        raise LatticeError(f"scale must be positive, got {s}")
    if s == 1:
        return L
    return Lattice(L.alg, L.basis, f"sqrt({s}){L.label}", L.scale * s)


def multiple(L: Lattice, n) -> Lattice:
    """The sublattice n*L (coordinates multiplied, form unchanged)."""
    n = Fraction(n)
    if n == 0:
        raise LatticeError("zero multiple")
    return Lattice(L.alg, la.scale(L.basis, n), f"{n}{L.label}", L.scale)


@dataclass(frozen=True, eq=False)
class CosetSystem:
    """The finite group sup/sub with canonical representatives.

    ``sup`` is rewritten in a basis e_1..e_l adapted to ``sub`` (Smith normal
    form), so that sub = span(d_j e_j). The class of x = sum c_j e_j is the
    mixed-radix tuple (c_j mod d_j); the representative is sum r_j e_j with
    0 <= r_j < d_j, ordered lexicographically in r.
    """

    sup: Lattice
    sub: Lattice
    reps: tuple[WeightVec, ...]
    order: int
    elementary_divisors: tuple[int, ...]
    _adapted_inverse: la.Matrix = field(repr=False)
    _divisors: tuple[int, ...] = field(repr=False)

    def residues(self, x: Sequence) -> tuple[int, ...]:
        c = la.vecmat(tuple(x), self._adapted_inverse)
        if any(v.denominator != 1 for v in c):
            raise LatticeError(f"{x} is not in {self.sup.label}")
        return tuple(int(v) % d for v, d in zip(c, self._divisors) if d != 1)

    def index(self, x: Sequence) -> int:
        """Position in ``reps`` of the class of x."""
        idx = 0
        for r, d in zip(self.residues(x), self.elementary_divisors):
            idx = idx * d + r
        return idx

    def reduce(self, x: Sequence) -> WeightVec:
        return self.reps[self.index(x)]

    def congruent(self, x: Sequence, y: Sequence) -> bool:
        return self.residues(x) == self.residues(y)

    def __len__(self):
        return self.order


def _shorten(x: Sequence[Fraction], sub: Lattice) -> tuple[Fraction, ...]:
    """Greedy descent of x within x + sub (only used to make representatives readable)."""
    alg = sub.alg
    x = tuple(x)
    moves = [r for b in sub.basis for r in (b, tuple(-c for c in b))]
    norm = inner(alg, x, x)
    improved = True
    while improved:
        improved = False
        for m in moves:
            y = tuple(a + b for a, b in zip(x, m))
            n = inner(alg, y, y)
            if n < norm:
                x, norm, improved = y, n, True
    return x


def quotient(sup: Lattice, sub: Lattice) -> CosetSystem:
    if sup.alg is not sub.alg or sup.scale != sub.scale:
        raise LatticeError("lattices live in different spaces")
    t = la.matmul(sub.basis, sup.basis_inverse)
    if not la.is_integral(t):
        raise LatticeError(f"{sub.label or 'sub'} is not contained in {sup.label or 'sup'}")
    d, u, v = smith_normal_decomp(SymMatrix(la.as_int_rows(t)), domain=ZZ)
    l = sup.rank
    divisors = [int(d[i, i]) for i in range(l)]
    if any(x == 0 for x in divisors):
        raise LatticeError("sub is not of full rank")
    divisors = [abs(x) for x in divisors]
    # U T V = D  =>  sub = U^-1 D (V^-1 sup): adapted basis E = V^-1 sup
    v_inv = la.to_matrix(v.inv().tolist())
    adapted = la.matmul(v_inv, sup.basis)
    elem = tuple(x for x in divisors if x != 1)
    active = [_shorten(adapted[i], sub) for i, x in enumerate(divisors) if x != 1]
    den = la.common_denominator(active) if active else 1
    gens = [[int(x * den) for x in row] for row in active]
    reps = []
    for r in itertools.product(*(range(x) for x in elem)):
        vec = [0] * l
        for ri, g in zip(r, gens):
            if ri:
                for j in range(l):
                    vec[j] += ri * g[j]
        reps.append(WeightVec(tuple(Fraction(x, den) for x in vec)))
    order = 1
    for x in elem:
        order *= x
    return CosetSystem(sup, sub, tuple(reps), order, elem, la.inverse(adapted), tuple(divisors))


def quotient_order(sup: Lattice, sub: Lattice) -> int:
    """|sup/sub| from the determinant alone (cross-check for :func:`quotient`)."""
    return abs(int(la.det(la.matmul(sub.basis, sup.basis_inverse))))


@lru_cache(maxsize=None)
def root_quotient(alg: AlgebraDescriptor, k: int) -> CosetSystem:
    """Q / kQ_L, whose classes label the beta_i."""
    std = standard_lattices(alg)
    return quotient(std.Q, multiple(std.Q_L, k))


@lru_cache(maxsize=None)
def orbifold_group(alg: AlgebraDescriptor, k: int) -> CosetSystem:
    """G = (1/k)P / Q°."""
    std = standard_lattices(alg)
    return quotient(multiple(std.P, Fraction(1, k)), std.Q_dual)


def duality_pairing_check(alg: AlgebraDescriptor, k: int) -> bool:
    """True iff (beta, alpha) -> exp(2 pi i <beta, alpha>) makes Q/kQ_L and (1/k)P/Q° dual."""
    a = root_quotient(alg, k)
    g = orbifold_group(alg, k)
    # well defined on classes: integral on (sub x sup) and (sup x sub)
    for x in a.sub.basis:
        for y in g.sup.basis:
            if inner(alg, x, y).denominator != 1:
                return False
    for x in a.sup.basis:
        for y in g.sub.basis:
            if inner(alg, x, y).denominator != 1:
                return False
    # a character of G is determined by its values on generators of (1/k)P
    gens = g.sup.basis
    table = {tuple(inner(alg, b, y) % 1 for y in gens) for b in a.reps}
    # injective beta -> character, and both groups have the same size
    return len(table) == a.order == g.order
