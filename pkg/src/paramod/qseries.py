"""Truncated q-expansions with a rational leading exponent, eta, lattice theta.

A :class:`QSeries` represents ``q^offset * sum_{n=0}^{depth} coeffs[n] q^n``,
known to be exact for the exponents offset .. offset+depth and unknown
beyond. Binary operations narrow to the smallest valid range.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _linalg as la
from .errors import LatticeError
from .latticekit import CosetSystem, Lattice, dual_lattice, quotient

TWO_PI_I = 2j * math.pi


def _check_tau(tau: complex) -> complex:
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError(f"tau must lie in the upper half-plane, got {tau}")
    return tau


@dataclass(frozen=True)
class QSeries:
    offset: Fraction
    coeffs: tuple
    depth: int

    def __post_init__(self):
        object.__setattr__(self, "offset", Fraction(self.offset))
        coeffs = tuple(self.coeffs)
        if len(coeffs) < self.depth + 1:
            coeffs = coeffs + (0,) * (self.depth + 1 - len(coeffs))
        object.__setattr__(self, "coeffs", coeffs[: self.depth + 1])
        if self.depth < 0:
            raise ValueError("depth must be >= 0")

    @classmethod
    def one(cls, depth: int) -> "QSeries":
        return cls(Fraction(0), (1,), depth)

    @classmethod
    def zero(cls, depth: int) -> "QSeries":
        return cls(Fraction(0), (), depth)

    @classmethod
    def from_coeffs(cls, coeffs: Sequence, offset=0) -> "QSeries":
        return cls(Fraction(offset), tuple(coeffs), len(coeffs) - 1)

    @property
    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    @property
    def top(self) -> Fraction:
        """Largest exponent that is still exact."""
        return self.offset + self.depth

    def __getitem__(self, n: int):
        return self.coeffs[n]

    def coeff_at(self, exponent) -> object:
        n = Fraction(exponent) - self.offset
        if n.denominator != 1 or n < 0:
            return 0
        if n > self.depth:
            raise IndexError(f"exponent {exponent} beyond truncation {self.top}")
        return self.coeffs[int(n)]

    def trim(self) -> "QSeries":
        """Drop leading zeros so that ``offset`` is the true leading exponent."""
        n = next((i for i, c in enumerate(self.coeffs) if c != 0), None)
        if n is None or n == 0:
            return self
        return QSeries(self.offset + n, self.coeffs[n:], self.depth - n)

    def truncate(self, depth: int) -> "QSeries":
        return QSeries(self.offset, self.coeffs, min(depth, self.depth))

    def shift(self, r) -> "QSeries":
        """Multiply by q^r."""
        return QSeries(self.offset + Fraction(r), self.coeffs, self.depth)

    def map(self, f) -> "QSeries":
        return QSeries(self.offset, tuple(f(c) for c in self.coeffs), self.depth)

    def __neg__(self):
        return self.map(lambda c: -c)

    def __add__(self, other):
        if not isinstance(other, QSeries):
            other = QSeries(Fraction(0), (other,), self.depth)
        gap = other.offset - self.offset
        if gap.denominator != 1:
            raise ValueError("offsets differ by a non-integer; cannot add")
        lo = min(self.offset, other.offset)
        hi = min(self.top, other.top)
        if hi < lo:
            raise ValueError("no overlapping valid range")
        depth = int(hi - lo)
        out = [0] * (depth + 1)
        for s in (self, other):
            start = int(s.offset - lo)
            for i, c in enumerate(s.coeffs):
                if start + i > depth:
                    break
                out[start + i] += c
        return QSeries(lo, tuple(out), depth)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, QSeries):
            return self.map(lambda c: c * other)
        depth = min(self.depth, other.depth)
        a, b = self.coeffs, other.coeffs
        out = [0] * (depth + 1)
        for i in range(depth + 1):
            if a[i] == 0:
                continue
            ai = a[i]
            for j in range(depth + 1 - i):
                if b[j]:
                    out[i + j] += ai * b[j]
        return QSeries(self.offset + other.offset, tuple(out), depth)

    __rmul__ = __mul__

    def reciprocal(self) -> "QSeries":
        lead = self.coeffs[0]
        if lead == 0:
            raise ZeroDivisionError("leading coefficient is zero; trim() first")
        exact = isinstance(lead, (int, Fraction))
        inv0 = Fraction(1) / lead if exact else 1 / lead
        out = [inv0]
        for n in range(1, self.depth + 1):
            acc = sum(self.coeffs[i] * out[n - i] for i in range(1, n + 1))
            out.append(-acc * inv0)
        if exact:
            out = [int(c) if Fraction(c).denominator == 1 else c for c in out]
        return QSeries(-self.offset, tuple(out), self.depth)

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return self.reciprocal() ** (-n)
        result = QSeries(Fraction(0), (1,), self.depth)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, QSeries):
            return self * other.reciprocal()
        return self.map(lambda c: c / other)

    def evaluate(self, tau: complex) -> complex:
        """sum_n coeffs[n] exp(2 pi i tau (offset + n)); the truncation is not estimated here."""
        tau = _check_tau(tau)
        q = cmath.exp(TWO_PI_I * tau)
        acc = 0j
        for c in reversed(self.coeffs):
            acc = acc * q + complex(c)
        return acc * cmath.exp(TWO_PI_I * tau * float(self.offset))

    def tail_bound(self, tau: complex) -> float:
        """max|c| |q|^(offset+depth+1) / (1-|q|): an estimate of the dropped terms."""
        tau = _check_tau(tau)
        aq = math.exp(-2 * math.pi * tau.imag)
        cmax = max((abs(complex(c)) for c in self.coeffs), default=0.0)
        return cmax * aq ** float(self.offset + self.depth + 1) / (1 - aq)

    def __call__(self, tau: complex) -> complex:
        return self.evaluate(tau)

    def __repr__(self):
        terms = [f"{c}q^{self.offset + i}" for i, c in enumerate(self.coeffs[:8]) if c != 0]
        more = " + ..." if self.depth >= 8 else ""
        return f"QSeries({' + '.join(terms) or '0'}{more} + O(q^{self.top + 1}))"


def euler_phi(depth: int) -> QSeries:
    """prod_{n>=1} (1 - q^n) via the pentagonal number theorem."""
    out = [0] * (depth + 1)
    for m in itertools.count(0):
        hit = False
        for j in ((m, -m) if m else (0,)):
            e = j * (3 * j - 1) // 2
            if e <= depth:
                out[e] += -1 if j % 2 else 1
                hit = True
        if not hit:
            break
    return QSeries(Fraction(0), tuple(out), depth)


def eta_series(depth: int) -> QSeries:
    """Dedekind eta: q^(1/24) prod_{n>=1} (1 - q^n)."""
    if depth < 1:
        raise ValueError("depth must be >= 1")
    return euler_phi(depth).shift(Fraction(1, 24))


def evaluate(qs: QSeries, tau: complex) -> tuple[complex, float]:
    """Value and tail-bound estimate."""
    return qs.evaluate(tau), qs.tail_bound(tau)


def geometric_series(depth: int) -> QSeries:
    return QSeries(Fraction(0), (1,) * (depth + 1), depth)


# -- lattice theta functions ----------------------------------------------------

def _min_eigen_lower_bound(gram: la.Matrix) -> float:
    """Gershgorin lower bound for the smallest eigenvalue, float fallback when it is <= 0."""
    bound = min(gram[i][i] - sum(abs(gram[i][j]) for j in range(len(gram)) if j != i) for i in range(len(gram)))
    if bound > 0:
        return float(bound)
    ev = float(np.linalg.eigvalsh(np.array(gram, dtype=float)).min())
    if ev <= 0:
        raise LatticeError("form is not positive definite")
    return ev * (1 - 1e-9)


def coset_vectors(L: Lattice, lam: Sequence, radius) -> list[tuple[tuple[Fraction, ...], Fraction]]:
    """All (v, (v,v)/2) with v in L + lam and (v,v)/2 <= radius, exact."""
    if not L.is_positive_definite():
        raise LatticeError(f"{L} is not positive definite")
    lam = tuple(Fraction(x) for x in lam)
    radius = Fraction(radius)
    mu = _min_eigen_lower_bound(L.gram)
    r = math.sqrt(2 * float(radius) / mu) + 1e-9
    c0 = L.coordinates(lam)
    ranges = [range(math.ceil(-r - float(c)), math.floor(r - float(c)) + 1) for c in c0]
    den = la.common_denominator([lam] + list(L.basis))
    d_form, g_int = L.alg.int_form
    basis_int = np.array([[int(x * den) for x in row] for row in L.basis], dtype=object)
    lam_int = np.array([int(x * den) for x in lam], dtype=object)
    g_obj = g_int.astype(object)
    scale = L.scale / (d_form * den * den)
    out = []
    for n in itertools.product(*ranges):
        v = lam_int + np.array(n, dtype=object) @ basis_int
        half = scale * int(v @ g_obj @ v) / 2
        if half <= radius:
            out.append((tuple(Fraction(int(x), den) for x in v), half))
    return out


def theta_eval(L: Lattice, lam: Sequence, h: Sequence, tau: complex, radius=None) -> complex:
    """theta_{L+lam}(h, tau) = sum_{v in L+lam} exp(2 pi i (h, v)) q^{(v,v)/2}.

    ``h`` may be complex (weight coordinates); the pairing is the lattice's own
    scaled form. Vectors with (v,v)/2 > radius are dropped; see
    :func:`theta_tail_bound`.
    """
    tau = _check_tau(tau)
    if radius is None:
        radius = default_radius(tau)
    vecs = coset_vectors(L, lam, radius)
    g = np.array([[float(x) for x in row] for row in L.alg.gram]) * float(L.scale)
    hg = np.asarray(h, dtype=complex) @ g
    total = 0j
    for v, half in vecs:
        total += cmath.exp(TWO_PI_I * (complex(hg @ np.array([float(x) for x in v])) + tau * float(half)))
    return total


def default_radius(tau: complex, eps: float = 1e-17) -> Fraction:
    """Norm radius beyond which |q|^radius < eps."""
    t = -math.log(eps) / (2 * math.pi * complex(tau).imag)
    return Fraction(math.ceil(t))


def theta_tail_bound(L: Lattice, radius, tau: complex) -> float:
    """Rough bound on the dropped shell: (points per unit shell) * |q|^radius / (1 - |q|)."""
    tau = _check_tau(tau)
    aq = math.exp(-2 * math.pi * tau.imag)
    mu = _min_eigen_lower_bound(L.gram)
    # lattice points with |c|^2 <= 2(R+1)/mu in a box, crude but monotone in R
    shell = (2 * math.sqrt(2 * (float(radius) + 1) / mu) + 1) ** L.rank
    return shell * aq ** float(radius) / (1 - aq)


@dataclass(frozen=True)
class LatticeSMatrix:
    cosets: CosetSystem
    phases: tuple[tuple[Fraction, ...], ...]  # (lam, lam') mod 1, entry = |L°/L|^-1/2 e^{-2 pi i phase}
    matrix: np.ndarray


def lattice_S_matrix(L: Lattice) -> LatticeSMatrix:
    if not L.is_even():
        raise LatticeError(f"{L} is not an even lattice")
    if not L.is_positive_definite():
        raise LatticeError(f"{L} is not positive definite")
    cos = quotient(dual_lattice(L), L)
    reps = cos.reps
    phases = tuple(tuple(L.form(a, b) % 1 for b in reps) for a in reps)
    norm = cos.order ** -0.5
    mat = np.array([[norm * cmath.exp(-TWO_PI_I * float(p)) for p in row] for row in phases])
    return LatticeSMatrix(cos, phases, mat)
