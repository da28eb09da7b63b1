"""Level-k data of the untwisted affine algebra: integrable highest weights,
conformal weights, the Kac-Peterson S-matrix, weight multiplicities and
characters.

Multiplicities use the affine Freudenthal recursion. With mu = k Lambda_0 +
lam - n delta (lam a finite weight, n the energy depth) it reads

    (|Lambda+rho|^2 - |lam+rho|^2 + 2(k+h)n) mult(lam, n)
        = 2 sum_{alpha>0} sum_{j>=1} (lam + j alpha | alpha) mult(lam + j alpha, n - j m)

over positive affine roots alpha + m delta (real, multiplicity 1) and m delta
(imaginary, multiplicity rank), where (lam + j(alpha + m delta) | alpha + m delta)
= <lam, alpha> + j<alpha, alpha> + k m. Only dominant lam are stored.

The affine S-matrix computed here coincides with the one coming from Zhu's
modular invariance for L(k,0); the two are not computed separately.
"""
from __future__ import annotations

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np

from .errors import ResourceLimitError
from .latticekit import multiple, quotient_order, standard_lattices
from .qseries import TWO_PI_I, _check_tau
from .rootsys import AlgebraDescriptor, WeightVec, inner, to_dominant, weyl_matrices, weyl_orbit

DEFAULT_ENTRY_BUDGET = 2_000_000


@dataclass(frozen=True)
class AffineLabel:
    weight: WeightVec
    level: int

    def __post_init__(self):
        if not isinstance(self.weight, WeightVec):
            object.__setattr__(self, "weight", WeightVec(tuple(self.weight)))
        if not self.weight.is_integral or any(c < 0 for c in self.weight):
            raise ValueError(f"{self.weight} is not a dominant integral weight")

    def check(self, alg: AlgebraDescriptor) -> "AffineLabel":
        if len(self.weight) != alg.rank:
            raise ValueError(f"weight {self.weight} has wrong rank for {alg.name}")
        if level_of(alg, self.weight) > self.level:
            raise ValueError(f"<{self.weight}, theta> exceeds level {self.level}")
        return self

    def __repr__(self):
        return f"AffineLabel({tuple(int(c) for c in self.weight)}, k={self.level})"


def level_of(alg: AlgebraDescriptor, weight: Sequence) -> int:
    """<weight, theta> for a weight in fundamental coordinates."""
    return int(sum(int(c) * a for c, a in zip(weight, alg.comarks)))


@lru_cache(maxsize=None)
def dominant_weights(alg: AlgebraDescriptor, k: int) -> tuple[AffineLabel, ...]:
    if k < 0:
        raise ValueError("level must be >= 0")
    ranges = [range(k // a + 1) for a in alg.comarks]
    out = [
        AffineLabel(WeightVec(c), k)
        for c in itertools.product(*ranges)
        if sum(x * a for x, a in zip(c, alg.comarks)) <= k
    ]
    return tuple(out)


def central_charge(alg: AlgebraDescriptor, k: int) -> Fraction:
    return Fraction(k * alg.dim_g, k + alg.dual_coxeter)


def conformal_weight(alg: AlgebraDescriptor, k: int, weight: Sequence) -> Fraction:
    """n_Lambda = <Lambda + 2 rho, Lambda> / 2(k + h)."""
    w = WeightVec(tuple(weight))
    return inner(alg, w + alg.rho * 2, w) / (2 * (k + alg.dual_coxeter))


def _as_weight(x) -> WeightVec:
    if isinstance(x, AffineLabel):
        return x.weight
    return x if isinstance(x, WeightVec) else WeightVec(tuple(x))


# -- Kac-Peterson S ------------------------------------------------------------------

@lru_cache(maxsize=None)
def kac_peterson_S(alg: AlgebraDescriptor, k: int, cap: int | None = None) -> np.ndarray:
    """S_{Lambda,Lambda'} over dominant_weights(alg, k), in that order.

    The Weyl sum is accumulated exactly as signed counts of the phases
    -<w(Lambda+rho), Lambda'+rho>/(k+h) mod 1 and only then turned into floats.
    """
    labels = dominant_weights(alg, k)
    mats, signs = weyl_matrices(alg, cap)
    d, g = alg.int_form
    K = k + alg.dual_coxeter
    modulus = d * K
    std = standard_lattices(alg)
    order = quotient_order(std.P, multiple(std.Q_L, K))
    prefactor = (1j ** len(alg.positive_roots)) * order ** -0.5
    shifted = np.array([[int(c) + 1 for c in lab.weight] for lab in labels], dtype=np.int64)
    n = len(labels)
    s = np.zeros((n, n), dtype=complex)
    roots_of_unity = np.exp(-TWO_PI_I * np.arange(modulus) / modulus)
    for a in range(n):
        orbit = mats @ shifted[a]  # (|W|, l)
        pairing = orbit @ g @ shifted.T  # (|W|, n) = d * <w(L+rho), L'+rho>
        residues = np.mod(pairing, modulus)
        for b in range(n):
            counts = np.bincount(residues[:, b], weights=signs, minlength=modulus)
            s[a, b] = prefactor * (counts @ roots_of_unity)
    return s


# -- multiplicities ------------------------------------------------------------------

class MultTable:
    """Multiplicities mult(lam, n) of weight lam at depth n in L(k, Lambda).

    ``entries`` holds dominant lam only; lookups of other weights go through the
    Weyl group. After construction the table is read-only.
    """

    def __init__(self, alg: AlgebraDescriptor, label: AffineLabel, max_depth: int, entries: dict):
        self.alg = alg
        self.label = label
        self.max_depth = max_depth
        self.entries = entries
        self._dom_cache: dict = {}

    def _dominant(self, lam: tuple) -> tuple:
        d = self._dom_cache.get(lam)
        if d is None:
            d = to_dominant(self.alg, lam)[0]
            self._dom_cache[lam] = d
        return d

    def mult(self, lam: Sequence, n: int) -> int:
        if n < 0:
            return 0
        if n > self.max_depth:
            raise IndexError(f"depth {n} beyond table depth {self.max_depth}")
        lam = tuple(int(c) for c in lam)
        return self.entries.get((self._dominant(lam), n), 0)

    def __getitem__(self, key) -> int:
        lam, n = key
        return self.mult(lam, n)

    def string(self, lam: Sequence, depth: int | None = None) -> list[int]:
        depth = self.max_depth if depth is None else depth
        return [self.mult(lam, n) for n in range(depth + 1)]

    def dominant_at(self, n: int) -> list[tuple[tuple, int]]:
        return sorted((lam, m) for (lam, d), m in self.entries.items() if d == n and m)

    def weights_at(self, n: int):
        """All (lam, mult) with nonzero multiplicity at depth n."""
        for lam, m in self.dominant_at(n):
            for mu in weyl_orbit(self.alg, lam):
                yield mu, m


_TABLES: dict = {}


def weight_multiplicities(
    alg: AlgebraDescriptor, k: int, weight, max_depth: int, budget: int = DEFAULT_ENTRY_BUDGET
) -> MultTable:
    label = AffineLabel(_as_weight(weight), k).check(alg)
    key = (alg.name, k, label.weight.as_ints())
    cached = _TABLES.get(key)
    if cached is not None and cached.max_depth >= max_depth:
        return cached
    table = MultTable(alg, label, max_depth, _freudenthal(alg, k, label.weight.as_ints(), max_depth, budget))
    _TABLES[key] = table
    return table


def _freudenthal(alg: AlgebraDescriptor, k: int, top: tuple, max_depth: int, budget: int) -> dict:
    l = alg.rank
    dform, g_np = alg.int_form
    g = g_np.tolist()
    K = k + alg.dual_coxeter
    cinv = alg.cartan_inverse
    det_c = math.lcm(*(x.denominator for row in cinv for x in row))
    cinv_int = [[int(x * det_c) for x in row] for row in cinv]

    def ip(u, v):
        return sum(u[i] * g[i][j] * v[j] for i in range(l) if u[i] for j in range(l) if v[j])

    def root_coords_scaled(w):
        return [sum(w[i] * cinv_int[i][j] for i in range(l)) for j in range(l)]

    pos = [r.as_ints() for r in alg.positive_roots]
    pos_set = set(pos)
    roots = pos + [tuple(-x for x in r) for r in pos]
    gr = {r: [sum(g[i][j] * r[j] for j in range(l)) for i in range(l)] for r in roots}
    rr = {r: ip(r, r) for r in roots}
    theta_rc = root_coords_scaled(alg.theta.as_ints())
    top_norm = ip(top, top)
    top_rho = tuple(a + 1 for a in top)
    top_rho_norm = ip(top_rho, top_rho)
    step = 2 * k * dform  # norm bound grows by 2k per unit depth (scaled by dform)

    # dominant weights in top + Q that can occur up to max_depth, with the first
    # depth at which they can occur (norm bound and cone condition)
    max_bound = top_norm + step * max_depth
    diag = [g[i][i] for i in range(l)]
    ranges = [range(math.isqrt(max_bound // diag[i]) + 1) for i in range(l)]
    start: dict = {}
    for lam in itertools.product(*ranges):
        nrm = ip(lam, lam)
        if nrm > max_bound:
            continue
        diff = root_coords_scaled(tuple(a - b for a, b in zip(top, lam)))
        if any(x % det_c for x in diff):
            continue
        diff = [x // det_c for x in diff]
        n0 = max(0, -((top_norm - nrm) // step)) if k else 0
        # cone: n*theta + (top - lam) has nonnegative simple-root coordinates
        while n0 <= max_depth and any(n0 * t // det_c + x < 0 for t, x in zip(theta_rc, diff)):
            n0 += 1
        if n0 <= max_depth:
            start[lam] = n0
    n_entries = sum(max_depth + 1 - n0 for n0 in start.values())
    if n_entries > budget:
        raise ResourceLimitError(
            f"multiplicity table for {alg.name} level {k} depth {max_depth} needs {n_entries} entries "
            f"(budget {budget})"
        )
    norms = {lam: ip(lam, lam) for lam in start}
    rho_norm = {lam: ip(tuple(a + 1 for a in lam), tuple(a + 1 for a in lam)) for lam in start}
    order = sorted(start, key=lambda lam: -rho_norm[lam])
    entries: dict = {}
    dom_cache: dict = {}

    def lookup(mu, n):
        d = dom_cache.get(mu)
        if d is None:
            d = to_dominant(alg, mu)[0]
            dom_cache[mu] = d
        n0 = start.get(d)
        if n0 is None or n < n0:
            return 0
        return entries[(d, n)]

    def bound(depth):
        return top_norm + step * depth

    for n in range(max_depth + 1):
        for lam in order:
            if start[lam] > n:
                continue
            if n == 0 and lam == top:
                entries[(lam, 0)] = 1
                continue
            coef = top_rho_norm - rho_norm[lam] + 2 * K * n * dform
            lam_norm = norms[lam]
            total = 0
            for a in roots:
                lam_a = sum(x * y for x, y in zip(lam, gr[a]))
                aa = rr[a]
                # m = 0 only for positive roots
                if a in pos_set:
                    j = 1
                    while True:
                        nrm = lam_norm + 2 * j * lam_a + j * j * aa
                        if nrm > bound(n):
                            break
                        mu = tuple(x + j * y for x, y in zip(lam, a))
                        total += (lam_a + j * aa) * lookup(mu, n)
                        j += 1
                for m in range(1, n + 1):
                    for j in range(1, n // m + 1):
                        nn = n - j * m
                        nrm = lam_norm + 2 * j * lam_a + j * j * aa
                        if nrm > bound(nn):
                            continue
                        mu = tuple(x + j * y for x, y in zip(lam, a))
                        total += (lam_a + j * aa + k * m * dform) * lookup(mu, nn)
            for m in range(1, n + 1):
                for j in range(1, n // m + 1):
                    total += l * k * m * dform * lookup(lam, n - j * m)
            if coef <= 0:
                raise ArithmeticError(f"non-positive Freudenthal coefficient at {lam}, depth {n}")
            val, rem = divmod(2 * total, coef)
            if rem:
                raise ArithmeticError(f"non-integral multiplicity at {lam}, depth {n}")
            entries[(lam, n)] = val
    return entries


def weyl_kac_rank1(k: int, a: int, max_depth: int) -> dict[tuple[int, int], int]:
    """Multiplicities for A_1 at level k, highest weight a*Lambda_1, from the
    Weyl-Kac numerator divided by the affine denominator.

    Returns {(b, n): mult} for weight b*Lambda_1 at depth n. Independent of
    the Freudenthal route; used only as an oracle.
    """
    K = k + 2
    num: dict = defaultdict(int)
    bound = int(math.isqrt(max_depth // max(K, 1)) + 2)
    for n in range(-bound - a, bound + a + 1):
        e = n * (a + 1) + K * n * n
        if 0 <= e <= max_depth:
            z = a + 1 + 2 * K * n
            num[(e, z - 1)] += 1
            num[(e, -z - 1)] -= 1
    poly = dict(num)

    def times_geometric(p, m, zstep):
        # multiply by 1/(1 - q^m z^zstep) = sum_j q^{mj} z^{j zstep}
        out: dict = defaultdict(int)
        for (e, z), c in p.items():
            j = 0
            while e + m * j <= max_depth:
                out[(e + m * j, z + j * zstep)] += c
                j += 1
        return {key: v for key, v in out.items() if v}

    for m in range(1, max_depth + 1):
        for zstep in (0, 2, -2):
            poly = times_geometric(poly, m, zstep)
    # divide by (1 - z^-2): Q_b = P_b + Q_{b+2}
    result: dict = {}
    by_depth: dict = defaultdict(dict)
    for (e, z), c in poly.items():
        by_depth[e][z] = c
    for e, p in by_depth.items():
        if not p:
            continue
        hi, lo = max(p), min(p)
        acc = {0: 0, 1: 0}
        for z in range(hi, lo - 1, -1):
            par = z % 2
            acc[par] += p.get(z, 0)
            if acc[par]:
                result[(z, e)] = acc[par]
        if acc[0] or acc[1]:
            raise ArithmeticError(f"numerator not divisible by (1 - z^-2) at depth {e}")
    return result


# -- characters ------------------------------------------------------------------------

class Evaluation(NamedTuple):
    value: complex
    tail_bound: float


def affine_character_eval_bounded(
    alg: AlgebraDescriptor, k: int, weight, h: Sequence, tau: complex, max_depth: int
) -> Evaluation:
    """chi_Lambda(h, tau) = sum mult(lam, n) e^{2 pi i <lam, h>} q^{n_Lambda + n - c/24}.

    ``h`` is given in fundamental-weight coordinates and may be complex.
    """
    tau = _check_tau(tau)
    w = _as_weight(weight)
    table = weight_multiplicities(alg, k, w, max_depth)
    gram = np.array([[float(x) for x in row] for row in alg.gram])
    hg = np.asarray(h, dtype=complex) @ gram
    base = float(conformal_weight(alg, k, w) - central_charge(alg, k) / 24)
    total = 0j
    last = 0.0
    for n in range(max_depth + 1):
        level_sum = 0j
        level_abs = 0.0
        for lam, m in table.dominant_at(n):
            orbit = np.array(weyl_orbit(alg, lam), dtype=float)
            terms = np.exp(TWO_PI_I * (orbit @ hg + tau * (base + n)))
            level_sum += m * terms.sum()
            level_abs += m * np.abs(terms).sum()
        total += level_sum
        last = level_abs
    aq = math.exp(-2 * math.pi * tau.imag)
    return Evaluation(total, last * aq / (1 - aq))


def affine_character_eval(
    alg: AlgebraDescriptor, k: int, weight, h: Sequence, tau: complex, max_depth: int
) -> complex:
    return affine_character_eval_bounded(alg, k, weight, h, tau, max_depth).value
