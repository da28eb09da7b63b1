"""Root systems, weights and Weyl groups of the simple Lie algebras A-G.

Weights are stored in the basis of fundamental weights. The invariant form is
normalized so that long roots have squared length 2; in this basis it is the
exact rational Gram matrix ``gram[i][j] = <Lambda_i, Lambda_j>``.
"""
from __future__ import annotations

import os
from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import prod
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _linalg as la
from .errors import InvalidAlgebraError, WeylCapExceeded

DEFAULT_WEYL_CAP = 10**7

_F = Fraction


@dataclass(frozen=True)
class WeightVec:
    """Exact rational weight, coordinates in the fundamental-weight basis."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(_F(c) for c in self.coords))

    @classmethod
    def of(cls, *coords) -> "WeightVec":
        return cls(tuple(coords))

    @classmethod
    def zero(cls, rank: int) -> "WeightVec":
        return cls((0,) * rank)

    def __len__(self):
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __getitem__(self, i):
        return self.coords[i]

    def __add__(self, other: "WeightVec") -> "WeightVec":
        _check_len(self, other)
        return WeightVec(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "WeightVec") -> "WeightVec":
        _check_len(self, other)
        return WeightVec(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "WeightVec":
        return WeightVec(tuple(-a for a in self.coords))

    def __mul__(self, s) -> "WeightVec":
        s = _F(s)
        return WeightVec(tuple(a * s for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, s) -> "WeightVec":
        return self * (1 / _F(s))

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self.coords)

    def as_ints(self) -> tuple[int, ...]:
        if not self.is_integral:
            raise ValueError(f"{self} is not an integral weight")
        return tuple(int(c) for c in self.coords)

    def __repr__(self):
        return "WeightVec(" + ", ".join(str(c) for c in self.coords) + ")"


def _check_len(u, v):
    if len(u) != len(v):
        raise ValueError(f"dimension mismatch: {len(u)} vs {len(v)}")


class WeylElement(NamedTuple):
    """Integer matrix acting on column vectors of weight coordinates."""

    matrix: np.ndarray
    sign: int

    def __call__(self, w: WeightVec) -> WeightVec:
        m = self.matrix
        return WeightVec(tuple(sum(int(m[i, j]) * w.coords[j] for j in range(len(w))) for i in range(len(w))))


# Squared lengths of simple roots and the off-diagonal form <alpha_i, alpha_j>,
# Bourbaki numbering.
def _dynkin(series: str, l: int):
    h = _F(1, 2)
    if series == "A" and l >= 1:
        norms = [2] * l
        edges = {(i, i + 1): -1 for i in range(l - 1)}
    elif series == "B" and l >= 2:
        norms = [2] * (l - 1) + [1]
        edges = {(i, i + 1): -1 for i in range(l - 1)}
    elif series == "C" and l >= 2:
        norms = [1] * (l - 1) + [2]
        edges = {(i, i + 1): -h for i in range(l - 2)}
        edges[(l - 2, l - 1)] = -1
    elif series == "D" and l >= 4:
        norms = [2] * l
        edges = {(i, i + 1): -1 for i in range(l - 2)}
        edges[(l - 3, l - 1)] = -1
    elif series == "E" and l in (6, 7, 8):
        norms = [2] * l
        edges = {(0, 2): -1, (1, 3): -1}
        edges.update({(i, i + 1): -1 for i in range(2, l - 1)})
    elif series == "F" and l == 4:
        norms = [2, 2, 1, 1]
        edges = {(0, 1): -1, (1, 2): -1, (2, 3): -h}
    elif series == "G" and l == 2:
        norms = [_F(2, 3), 2]
        edges = {(0, 1): -1}
    else:
        raise InvalidAlgebraError(
            f"no simple Lie algebra of type {series}{l}; valid: A_l (l>=1), B_l/C_l (l>=2), "
            "D_l (l>=4), E_6/E_7/E_8, F_4, G_2"
        )
    form = [[_F(0)] * l for _ in range(l)]
    for i in range(l):
        form[i][i] = _F(norms[i])
    for (i, j), v in edges.items():
        form[i][j] = form[j][i] = _F(v)
    return form


_DEGREES = {
    "E6": (2, 5, 6, 8, 9, 12),
    "E7": (2, 6, 8, 10, 12, 14, 18),
    "E8": (2, 8, 12, 14, 18, 20, 24, 30),
    "F4": (2, 6, 8, 12),
    "G2": (2, 6),
}


def _degrees(series: str, l: int) -> tuple[int, ...]:
    if series == "A":
        return tuple(range(2, l + 2))
    if series in "BC":
        return tuple(range(2, 2 * l + 1, 2))
    if series == "D":
        return tuple(sorted(list(range(2, 2 * l - 1, 2)) + [l]))
    return _DEGREES[f"{series}{l}"]


@dataclass(frozen=True, eq=False)
class AlgebraDescriptor:
    series: str
    rank: int
    cartan_matrix: tuple[tuple[int, ...], ...]
    gram: la.Matrix
    simple_roots: tuple[WeightVec, ...]
    positive_roots: tuple[WeightVec, ...]
    theta: WeightVec
    rho: WeightVec
    dual_coxeter: int
    dim_g: int
    marks: tuple[int, ...]
    # positive roots in simple-root coordinates, same order as positive_roots
    positive_root_coords: tuple[tuple[int, ...], ...] = field(repr=False)
    simple_root_norms: tuple[Fraction, ...] = field(repr=False)

    @property
    def name(self) -> str:
        return f"{self.series}{self.rank}"

    def __repr__(self):
        return f"AlgebraDescriptor({self.name})"

    def __reduce__(self):
        return (build_algebra, (self.series, self.rank))

    @cached_property
    def comarks(self) -> tuple[int, ...]:
        """<Lambda_i, theta>, so that <Lambda, theta> = sum_i Lambda_i * comark_i."""
        return tuple(int(a * n / 2) for a, n in zip(self.marks, self.simple_root_norms))

    @cached_property
    def roots(self) -> tuple[WeightVec, ...]:
        return self.positive_roots + tuple(-r for r in self.positive_roots)

    @cached_property
    def long_roots(self) -> tuple[WeightVec, ...]:
        return tuple(r for r in self.roots if inner(self, r, r) == 2)

    def fundamental_weight(self, i: int) -> WeightVec:
        return WeightVec(tuple(int(j == i) for j in range(self.rank)))

    @cached_property
    def fundamental_weights(self) -> tuple[WeightVec, ...]:
        return tuple(self.fundamental_weight(i) for i in range(self.rank))

    @cached_property
    def coroot_dual_weights(self) -> tuple[WeightVec, ...]:
        """lambda_i = (<theta,theta>/<alpha_i,alpha_i>) Lambda_i; <alpha_i, lambda_j> = delta_ij."""
        return tuple(self.fundamental_weight(i) * (2 / n) for i, n in enumerate(self.simple_root_norms))

    @cached_property
    def int_form(self) -> tuple[int, np.ndarray]:
        """(d, G) with G = d * gram an integer matrix, for fast exact inner products."""
        d = la.common_denominator(self.gram)
        return d, np.array([[int(x * d) for x in row] for row in self.gram], dtype=np.int64)

    @cached_property
    def cartan_inverse(self) -> la.Matrix:
        return la.inverse(la.to_matrix(self.cartan_matrix))

    def to_root_coords(self, w: WeightVec) -> tuple[Fraction, ...]:
        """Coordinates of ``w`` in the basis of simple roots."""
        return la.vecmat(w.coords, self.cartan_inverse)

    def from_root_coords(self, c: Sequence) -> WeightVec:
        return WeightVec(la.vecmat(c, self.cartan_matrix))

    def in_root_lattice(self, w: WeightVec) -> bool:
        return all(x.denominator == 1 for x in self.to_root_coords(w))

    @cached_property
    def weyl_order(self) -> int:
        """|W| as the product of the degrees of the basic invariants."""
        return prod(_degrees(self.series, self.rank))


def build_algebra(series: str, rank: int) -> AlgebraDescriptor:
    """The (unique, cached) descriptor of the simple Lie algebra of the given type."""
    return _build(str(series).upper(), int(rank))


@lru_cache(maxsize=None)
def _build(series: str, rank: int) -> AlgebraDescriptor:
    form = _dynkin(series, rank)
    l = rank
    cartan = tuple(tuple(int(2 * form[i][j] / form[j][j]) for j in range(l)) for i in range(l))
    d = [form[j][j] / 2 for j in range(l)]
    gram = la.matmul(la.inverse(la.to_matrix(cartan)), [[d[i] if i == j else 0 for j in range(l)] for i in range(l)])

    # closure of the simple roots under root strings, in simple-root coordinates
    simple = [tuple(int(i == j) for j in range(l)) for i in range(l)]
    pos = list(simple)
    seen = set(pos)
    idx = 0
    while idx < len(pos):
        beta = pos[idx]
        idx += 1
        for i in range(l):
            pairing = sum(beta[j] * cartan[j][i] for j in range(l))  # <beta, alpha_i^vee>
            p = 0
            down = list(beta)
            while True:
                down[i] -= 1
                if tuple(down) in seen:
                    p += 1
                else:
                    break
            if p - pairing > 0:
                up = list(beta)
                up[i] += 1
                up = tuple(up)
                if up not in seen:
                    seen.add(up)
                    pos.append(up)
    pos.sort(key=lambda c: (sum(c), c))
    to_w = lambda c: WeightVec(la.vecmat(c, cartan))
    theta_c = pos[-1]
    rho = WeightVec((1,) * l)
    alg = AlgebraDescriptor(
        series=series,
        rank=l,
        cartan_matrix=cartan,
        gram=gram,
        simple_roots=tuple(to_w(c) for c in simple),
        positive_roots=tuple(to_w(c) for c in pos),
        theta=to_w(theta_c),
        rho=rho,
        dual_coxeter=0,
        dim_g=l + 2 * len(pos),
        marks=tuple(theta_c),
        positive_root_coords=tuple(pos),
        simple_root_norms=tuple(form[i][i] for i in range(l)),
    )
    object.__setattr__(alg, "dual_coxeter", int(inner(alg, rho, alg.theta)) + 1)
    return alg


def parse_algebra(text: str) -> AlgebraDescriptor:
    """Parse names like ``A1``, ``g2``, ``E_6``."""
    t = text.replace("_", "").strip()
    if len(t) < 2 or not t[1:].isdigit():
        raise InvalidAlgebraError(f"cannot parse algebra name {text!r}")
    return build_algebra(t[0], int(t[1:]))


def inner(alg: AlgebraDescriptor, u: WeightVec | Sequence, v: WeightVec | Sequence) -> Fraction:
    """Exact <u, v> = u^T F v for weights in fundamental-weight coordinates."""
    u = tuple(u)
    v = tuple(v)
    if len(u) != alg.rank or len(v) != alg.rank:
        raise ValueError(f"dimension mismatch: rank {alg.rank}, got {len(u)} and {len(v)}")
    g = alg.gram
    return sum((_F(u[i]) * g[i][j] * _F(v[j]) for i in range(alg.rank) for j in range(alg.rank) if u[i] and v[j]), _F(0))


def inner_complex(alg: AlgebraDescriptor, u: Sequence, v: Sequence) -> complex:
    """Float/complex version of :func:`inner` for non-rational arguments."""
    g = np.array([[float(x) for x in row] for row in alg.gram])
    return complex(np.asarray(u, dtype=complex) @ g @ np.asarray(v, dtype=complex))


def weyl_cap() -> int:
    return int(os.environ.get("PARAMOD_WEYL_CAP", DEFAULT_WEYL_CAP))


def simple_reflection_matrix(alg: AlgebraDescriptor, i: int) -> np.ndarray:
    # s_i(lambda)_j = lambda_j - lambda_i * C_ij
    m = np.eye(alg.rank, dtype=np.int64)
    for j in range(alg.rank):
        m[j, i] -= alg.cartan_matrix[i][j]
    return m


_WEYL_CACHE: dict[str, tuple[WeylElement, ...]] = {}


def weyl_group(alg: AlgebraDescriptor, cap: int | None = None) -> tuple[WeylElement, ...]:
    """All Weyl group elements with their signs (-1)^length, by BFS closure."""
    cap = weyl_cap() if cap is None else cap
    if alg.weyl_order > cap:
        raise WeylCapExceeded(alg.name, alg.weyl_order, cap)
    if alg.name in _WEYL_CACHE:
        return _WEYL_CACHE[alg.name]
    gens = [simple_reflection_matrix(alg, i) for i in range(alg.rank)]
    ident = np.eye(alg.rank, dtype=np.int64)
    elements = [WeylElement(ident, 1)]
    seen = {ident.tobytes()}
    queue = deque(elements)
    while queue:
        g = queue.popleft()
        for s in gens:
            h = g.matrix @ s
            key = h.tobytes()
            if key not in seen:
                seen.add(key)
                el = WeylElement(h, -g.sign)
                elements.append(el)
                queue.append(el)
    for el in elements:
        el.matrix.setflags(write=False)
    out = tuple(elements)
    _WEYL_CACHE[alg.name] = out
    return out


def weyl_matrices(alg: AlgebraDescriptor, cap: int | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Stacked (|W|, l, l) matrices and sign vector, for vectorized sums."""
    els = weyl_group(alg, cap)
    return np.stack([e.matrix for e in els]), np.array([e.sign for e in els], dtype=np.int64)


def reflect(alg: AlgebraDescriptor, coords: Sequence, i: int) -> tuple:
    c = coords[i]
    row = alg.cartan_matrix[i]
    return tuple(x - c * row[j] for j, x in enumerate(coords))


def to_dominant(alg: AlgebraDescriptor, coords: Sequence) -> tuple[tuple, int]:
    """Dominant representative of the Weyl orbit and the sign of the element used."""
    coords = tuple(coords)
    sign = 1
    while True:
        for i, x in enumerate(coords):
            if x < 0:
                coords = reflect(alg, coords, i)
                sign = -sign
                break
        else:
            return coords, sign


def weyl_orbit(alg: AlgebraDescriptor, coords: Sequence) -> list[tuple]:
    """The Weyl orbit of a weight (raw coordinate tuples)."""
    start, _ = to_dominant(alg, coords)
    orbit = [start]
    seen = {start}
    queue = deque(orbit)
    while queue:
        c = queue.popleft()
        for i in range(alg.rank):
            if c[i] != 0:
                d = reflect(alg, c, i)
                if d not in seen:
                    seen.add(d)
                    orbit.append(d)
                    queue.append(d)
    return orbit


def is_dominant(w: Iterable) -> bool:
    return all(x >= 0 for x in w)
