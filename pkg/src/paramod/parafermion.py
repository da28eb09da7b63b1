"""Parafermion modules M^{Lambda,lambda} of K(g,k): branching functions,
label identifications, modular data and numeric verification.

A raw label is (Lambda, beta) with Lambda in P_+^k and beta a representative
of Q/kQ_L; the module is M^{Lambda, Lambda+beta}. Two raw labels name the same
module when they are related by lambda -> lambda + kQ_L (built into the raw
labels) or by a simple current (Lambda, lambda) -> (Lambda^(i), lambda + k Lambda_i)
for a node i with mark 1. Lambda^(i) is found by matching branching series.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .affinekit import (
    AffineLabel,
    affine_character_eval_bounded,
    central_charge,
    conformal_weight,
    dominant_weights,
    kac_peterson_S,
    weight_multiplicities,
)
from .errors import VerificationError
from .latticekit import multiple, orbifold_group, quotient_order, root_quotient, scale, standard_lattices
from .qseries import QSeries, _check_tau, default_radius, euler_phi, theta_eval
from .rootsys import AlgebraDescriptor, WeightVec, inner, to_dominant

FINGERPRINT_DEPTHS = (20, 30, 40, 50, 60)
INTRA_CLASS_TOL = 1e-10


@dataclass(frozen=True)
class ParafermionLabel:
    Lambda: AffineLabel
    beta: WeightVec
    beta_index: int

    @property
    def weight(self) -> WeightVec:
        """lambda = Lambda + beta."""
        return self.Lambda.weight + self.beta

    def key(self) -> tuple:
        return (self.Lambda.weight.as_ints(), self.beta_index)

    def __str__(self):
        lam = ",".join(str(int(c)) for c in self.Lambda.weight)
        beta = ",".join(str(c) for c in self.beta)
        return f"({lam};{beta})"


def parafermion_central_charge(alg: AlgebraDescriptor, k: int) -> Fraction:
    return central_charge(alg, k) - alg.rank


# -- branching functions -------------------------------------------------------------

def _reduce_weight(alg: AlgebraDescriptor, k: int, lam: tuple) -> tuple:
    """A short representative of W(lam + kQ_L); the branching series only depends on it."""
    moves = [tuple(k * c for c in r.as_ints()) for r in alg.long_roots]
    lam = to_dominant(alg, lam)[0]
    norm = inner(alg, lam, lam)
    improved = True
    while improved:
        improved = False
        for m in moves:
            mu = to_dominant(alg, tuple(a + b for a, b in zip(lam, m)))[0]
            n = inner(alg, mu, mu)
            if n < norm:
                lam, norm, improved = mu, n, True
                break
    return lam


def branching_function(
    alg: AlgebraDescriptor, k: int, Lambda, lam: Sequence, max_depth: int, reduce: bool = True
) -> QSeries:
    """Graded character of M^{Lambda,lam} as q^(h - c/24) * (integer series).

    Returns the zero series when lam - Lambda is not in the root lattice. With
    ``reduce`` the weight is first moved to a short representative of
    W(lam + kQ_L); without it the multiplicities of lam itself are used.
    """
    Lw = Lambda.weight if isinstance(Lambda, AffineLabel) else WeightVec(tuple(Lambda))
    AffineLabel(Lw, k).check(alg)
    lam = WeightVec(tuple(lam))
    if not alg.in_root_lattice(lam - Lw):
        return QSeries.zero(max_depth)
    mu = lam.as_ints()
    if reduce:
        mu = _reduce_weight(alg, k, mu)
    top = Lw.as_ints()
    d_top, d_mu = inner(alg, Lw, Lw), inner(alg, mu, mu)
    m0 = max(0, math.ceil((d_mu - d_top) / (2 * k)))
    while True:
        table = weight_multiplicities(alg, k, top, m0 + max_depth)
        found = next((m for m in range(m0, table.max_depth + 1) if table.mult(mu, m)), None)
        if found is None:
            m0 = table.max_depth + 1
            continue
        if found + max_depth <= table.max_depth:
            m0 = found
            break
        m0 = found
    string = QSeries(Fraction(0), tuple(table.mult(mu, m0 + n) for n in range(max_depth + 1)), max_depth)
    l = alg.rank
    body = string * euler_phi(max_depth) ** l
    offset = (
        conformal_weight(alg, k, Lw)
        - central_charge(alg, k) / 24
        + Fraction(l, 24)
        - inner(alg, mu, mu) / (2 * k)
        + m0
    )
    return body.shift(offset)


def parafermion_T(alg: AlgebraDescriptor, k: int, label: ParafermionLabel) -> Fraction:
    """h - c/24 mod 1 for M^{Lambda, Lambda+beta}."""
    Lw = label.Lambda.weight
    lam = label.weight
    e = (
        conformal_weight(alg, k, Lw)
        - inner(alg, lam, lam) / (2 * k)
        - central_charge(alg, k) / 24
        + Fraction(alg.rank, 24)
    )
    return e % 1


# -- labels and identifications ------------------------------------------------------

@lru_cache(maxsize=None)
def raw_labels(alg: AlgebraDescriptor, k: int) -> tuple[ParafermionLabel, ...]:
    cos = root_quotient(alg, k)
    return tuple(
        ParafermionLabel(L, b, j) for L in dominant_weights(alg, k) for j, b in enumerate(cos.reps)
    )


@dataclass(frozen=True)
class Identification:
    """Lambda -> Lambda^(i) for one simple-current node i."""

    node: int
    image: dict  # Lambda coords -> Lambda^(i) coords
    fingerprint_depth: int


@dataclass(frozen=True, eq=False)
class LabelClasses:
    raw: tuple[ParafermionLabel, ...]
    classes: tuple[tuple[int, ...], ...]  # indices into raw, sorted; first is the representative
    class_of: tuple[int, ...]  # raw index -> class index
    identifications: tuple[Identification, ...]

    @property
    def representatives(self) -> tuple[ParafermionLabel, ...]:
        return tuple(self.raw[c[0]] for c in self.classes)


@lru_cache(maxsize=None)
def _raw_series(alg: AlgebraDescriptor, k: int, depth: int) -> tuple[QSeries, ...]:
    return tuple(branching_function(alg, k, r.Lambda, r.weight, depth) for r in raw_labels(alg, k))


def _shift_target(alg, k, cos, raw_index, label: ParafermionLabel, node: int, target: tuple):
    """Raw index of (target, lambda + k Lambda_node), or None if not congruent mod Q."""
    shift = [0] * alg.rank
    shift[node] = k
    mu = label.weight + WeightVec(tuple(shift))
    diff = mu - WeightVec(target)
    if not alg.in_root_lattice(diff):
        return None
    return raw_index[(target, cos.index(diff))]


def _find_identification(alg, k, node, start_depth) -> Identification:
    cos = root_quotient(alg, k)
    raws = raw_labels(alg, k)
    raw_index = {r.key(): i for i, r in enumerate(raws)}
    weights = [L.weight.as_ints() for L in dominant_weights(alg, k)]
    t_phase = [parafermion_T(alg, k, r) for r in raws]
    by_lambda: dict = {}
    for i, r in enumerate(raws):
        by_lambda.setdefault(r.Lambda.weight.as_ints(), []).append(i)
    depths = [d for d in FINGERPRINT_DEPTHS if d >= start_depth] or [start_depth]
    for depth in depths:
        series = _raw_series(alg, k, depth)
        image: dict = {}
        ambiguous = False
        for lam in weights:
            matches = []
            for cand in weights:
                ok = True
                for i in by_lambda[lam]:
                    j = _shift_target(alg, k, cos, raw_index, raws[i], node, cand)
                    if j is None or t_phase[i] != t_phase[j] or series[i] != series[j]:
                        ok = False
                        break
                if ok:
                    matches.append(cand)
            if not matches:
                raise VerificationError(
                    f"{alg.name} level {k}: no Lambda^({node + 1}) for Lambda={lam} at fingerprint depth {depth}"
                )
            if len(matches) > 1:
                ambiguous = True
                break
            image[lam] = matches[0]
        if not ambiguous:
            if sorted(image.values()) != sorted(weights):
                raise VerificationError(f"{alg.name} level {k}: Lambda -> Lambda^({node + 1}) is not a bijection")
            return Identification(node, image, depth)
    raise VerificationError(
        f"{alg.name} level {k}: fingerprints up to depth {depths[-1]} do not determine Lambda^({node + 1})"
    )


def expected_class_count(alg: AlgebraDescriptor, k: int) -> Fraction:
    std = standard_lattices(alg)
    n = len(dominant_weights(alg, k)) * root_quotient(alg, k).order
    return Fraction(n, quotient_order(std.P, std.Q))


@lru_cache(maxsize=None)
def label_classes(alg: AlgebraDescriptor, k: int, fingerprint_depth: int = 20) -> LabelClasses:
    if k < 1:
        raise ValueError("level must be >= 1")
    raws = raw_labels(alg, k)
    cos = root_quotient(alg, k)
    raw_index = {r.key(): i for i, r in enumerate(raws)}
    nodes = [i for i, a in enumerate(alg.marks) if a == 1]
    idents = tuple(_find_identification(alg, k, i, fingerprint_depth) for i in nodes)
    # orbits of the simple-current moves
    parent = list(range(len(raws)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for ident in idents:
        for i, r in enumerate(raws):
            target = ident.image[r.Lambda.weight.as_ints()]
            j = _shift_target(alg, k, cos, raw_index, r, ident.node, target)
            a, b = find(i), find(j)
            if a != b:
                parent[max(a, b)] = min(a, b)
    groups: dict = {}
    for i in range(len(raws)):
        groups.setdefault(find(i), []).append(i)
    classes = sorted((tuple(sorted(g, key=lambda i: raws[i].key())) for g in groups.values()),
                     key=lambda c: raws[c[0]].key())
    expected = expected_class_count(alg, k)
    if len(classes) != expected:
        raise VerificationError(
            f"{alg.name} level {k}: {len(classes)} label classes, expected "
            f"|P_+^k||Q/kQ_L|/|P/Q| = {expected}"
        )
    class_of = [0] * len(raws)
    for c, members in enumerate(classes):
        for i in members:
            class_of[i] = c
    return LabelClasses(raws, tuple(classes), tuple(class_of), idents)


def canonical_labels(alg: AlgebraDescriptor, k: int, fingerprint_depth: int = 20) -> tuple[ParafermionLabel, ...]:
    return label_classes(alg, k, fingerprint_depth).representatives


# -- modular data --------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ParafermionData:
    algebra: AlgebraDescriptor
    level: int
    labels: tuple[ParafermionLabel, ...]
    T_phases: tuple[Fraction, ...]
    S: np.ndarray
    central_charge: Fraction
    classes: LabelClasses = field(repr=False)

    @property
    def T(self) -> np.ndarray:
        return np.diag([cmath.exp(2j * math.pi * float(t)) for t in self.T_phases])

    def __len__(self):
        return len(self.labels)


def raw_S(alg: AlgebraDescriptor, k: int) -> np.ndarray:
    """|P/kQ_L|^{-1/2} S_A[Lambda, Lambda'] exp(+2 pi i <lambda, lambda'>/k) on raw labels.

    The sign of the phase is the conjugate of the lattice S entry, as the
    lattice factor enters the decomposition through its complex conjugate.
    """
    raws = raw_labels(alg, k)
    s_a = kac_peterson_S(alg, k)
    lam_index = {L.weight.as_ints(): i for i, L in enumerate(dominant_weights(alg, k))}
    std = standard_lattices(alg)
    norm = quotient_order(std.P, multiple(std.Q_L, k)) ** -0.5
    n = len(raws)
    out = np.empty((n, n), dtype=complex)
    idx = [lam_index[r.Lambda.weight.as_ints()] for r in raws]
    wts = [r.weight for r in raws]
    for a in range(n):
        for b in range(a, n):
            phase = (inner(alg, wts[a], wts[b]) / k) % 1
            v = norm * s_a[idx[a], idx[b]] * cmath.exp(2j * math.pi * float(phase))
            out[a, b] = out[b, a] = v
    return out


@lru_cache(maxsize=None)
def parafermion_S(alg: AlgebraDescriptor, k: int, fingerprint_depth: int = 20) -> ParafermionData:
    lc = label_classes(alg, k, fingerprint_depth)
    sraw = raw_S(alg, k)
    classes = lc.classes
    n = len(classes)
    s = np.empty((n, n), dtype=complex)
    for a, ca in enumerate(classes):
        for b in range(a, n):
            cb = classes[b]
            block = sraw[np.ix_(ca, cb)]
            # every raw row of class a must see the same entries, so the
            # class sum over b does not depend on the chosen representative
            row_sums = block.sum(axis=1)
            col_sums = block.sum(axis=0)
            ref = block[0, 0]
            spread = max(
                np.abs(block - ref).max(),
                np.abs(row_sums - row_sums[0]).max(),
                np.abs(col_sums - col_sums[0]).max(),
            )
            if spread > INTRA_CLASS_TOL:
                raise VerificationError(
                    f"{alg.name} level {k}: S entries differ by {spread:.3g} between identified labels "
                    f"{lc.raw[ca[0]]} / {lc.raw[cb[0]]}"
                )
            # the formula is symmetric in the two labels; mirror so S is exactly symmetric
            s[a, b] = s[b, a] = row_sums[0]
    labels = lc.representatives
    phases = tuple(parafermion_T(alg, k, r) for r in labels)
    return ParafermionData(alg, k, labels, phases, s, parafermion_central_charge(alg, k), lc)


def modular_residuals(data: ParafermionData) -> dict[str, float]:
    s, t = data.S, data.T
    n = len(s)
    s2 = s @ s
    st = s @ t
    perm = np.abs(s2)
    return {
        "unitarity": float(np.abs(s @ s.conj().T - np.eye(n)).max()),
        "symmetry": float(np.abs(s - s.T).max()),
        "st_cubed": float(np.abs(st @ st @ st - s2).max()),
        "s2_permutation": float(
            max(np.abs(perm - np.round(perm)).max(), np.abs(s2.imag).max(),
                np.abs(np.round(perm).sum(axis=0) - 1).max(), np.abs(np.round(perm).sum(axis=1) - 1).max())
        ),
    }


def verlinde_fusion(data: ParafermionData, tol: float = 1e-6) -> np.ndarray:
    """N[a, b, c] = sum_m S_am S_bm conj(S_cm) / S_0m, rounded after an integrality check."""
    s = data.S
    vac = s[0]
    if np.any(vac.real <= 0) or np.abs(vac.imag).max() > 1e-12:
        raise VerificationError("vacuum row of S is not strictly positive")
    n_raw = np.einsum("am,bm,cm->abc", s, s, s.conj() / vac)
    rounded = np.round(n_raw.real)
    err = np.abs(n_raw - rounded)
    worst = np.unravel_index(np.argmax(err), err.shape)
    if err[worst] > tol or rounded.min() < 0:
        raise VerificationError(
            f"fusion coefficient N{tuple(int(x) for x in worst)} = {n_raw[worst]:.6g} is not a nonnegative integer"
        )
    return rounded.astype(int)


def quantum_dimensions(data: ParafermionData) -> np.ndarray:
    return (data.S[0] / data.S[0, 0]).real


# -- verification --------------------------------------------------------------------

@dataclass(frozen=True)
class LabelResidual:
    label: str
    residual: float
    tail_bound: float


@dataclass(frozen=True)
class TransformReport:
    tau: complex
    depth: int
    residual: float
    rows: tuple[LabelResidual, ...]

    def passes(self, tol: float) -> bool:
        return self.residual < tol


def verify_S_transform(alg: AlgebraDescriptor, k: int, tau: complex, max_depth: int) -> TransformReport:
    """Compare Z_a(-1/tau) with sum_b S_ab Z_b(tau) for every canonical label."""
    tau = _check_tau(tau)
    data = parafermion_S(alg, k)
    series = [branching_function(alg, k, r.Lambda, r.weight, max_depth) for r in data.labels]
    st = -1 / tau
    at_tau = np.array([z.evaluate(tau) for z in series])
    tail_tau = np.array([z.tail_bound(tau) for z in series])
    rows = []
    for a, z in enumerate(series):
        lhs = z.evaluate(st)
        rhs = data.S[a] @ at_tau
        bound = z.tail_bound(st) + float(np.abs(data.S[a]) @ tail_tau)
        rows.append(LabelResidual(str(data.labels[a]), float(abs(lhs - rhs)), bound))
    return TransformReport(tau, max_depth, max(r.residual for r in rows), tuple(rows))


@dataclass(frozen=True)
class OrbifoldReport:
    lhs: complex
    rhs: complex
    residual: float
    group_order: int


def orbifold_rhs_terms(alg: AlgebraDescriptor, k: int, Lambda, beta_index: int, tau: complex, max_depth: int):
    """(theta value, [(alpha, phase, chi_Lambda(alpha, tau))]) for the orbifold sum."""
    Lw = Lambda.weight if isinstance(Lambda, AffineLabel) else WeightVec(tuple(Lambda))
    cos = root_quotient(alg, k)
    lam = Lw + cos.reps[beta_index]
    std = standard_lattices(alg)
    lat = scale(std.Q_L, k)
    theta = theta_eval(lat, lam / k, [0] * alg.rank, tau, default_radius(tau))
    group = orbifold_group(alg, k)
    terms = []
    for alpha in group.reps:
        phase = cmath.exp(-2j * math.pi * float(inner(alg, alpha, lam)))
        chi = affine_character_eval_bounded(alg, k, Lw, [float(c) for c in alpha], tau, max_depth).value
        terms.append((alpha, phase, chi))
    return theta, terms


def verify_orbifold_identity(
    alg: AlgebraDescriptor, k: int, Lambda, beta_index: int, tau: complex, max_depth: int
) -> OrbifoldReport:
    """Z_{M^{Lambda,Lambda+beta}} against (1/|G|) eta^l / theta * sum_alpha e^{-2 pi i <alpha, lambda>} chi_Lambda(alpha)."""
    tau = _check_tau(tau)
    Lw = Lambda.weight if isinstance(Lambda, AffineLabel) else WeightVec(tuple(Lambda))
    cos = root_quotient(alg, k)
    lam = Lw + cos.reps[beta_index]
    lhs = branching_function(alg, k, Lw, lam, max_depth).evaluate(tau)
    theta, terms = orbifold_rhs_terms(alg, k, Lw, beta_index, tau, max_depth)
    eta = euler_phi(max_depth).shift(Fraction(1, 24)).evaluate(tau)
    order = len(terms)
    rhs = eta ** alg.rank / theta * sum(p * c for _, p, c in terms) / order
    return OrbifoldReport(lhs, rhs, float(abs(lhs - rhs)), order)
