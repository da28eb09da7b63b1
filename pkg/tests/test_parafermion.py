import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import ISING_S, best_permutation_distance
from paramod.affinekit import affine_character_eval, dominant_weights, weyl_kac_rank1
from paramod.latticekit import root_quotient, scale, standard_lattices
from paramod.parafermion import (
    branching_function,
    canonical_labels,
    label_classes,
    modular_residuals,
    parafermion_S,
    parafermion_T,
    quantum_dimensions,
    raw_labels,
    raw_S,
    verify_orbifold_identity,
    verify_S_transform,
    verlinde_fusion,
)
from paramod.qseries import QSeries, euler_phi, theta_eval
from paramod.rootsys import WeightVec, build_algebra

A1 = build_algebra("A", 1)
A2 = build_algebra("A", 2)


def test_trivial_parafermion():
    z = branching_function(A1, 1, (0,), (0,), 20)
    assert z == QSeries(0, (1,), 20)


def test_ising_vacuum_branching():
    # oracle: Weyl-Kac multiplicities of the zero weight times phi(q) by hand
    depth = 12
    wk = weyl_kac_rank1(2, 0, depth)
    string = [wk.get((0, n), 0) for n in range(depth + 1)]
    phi = [1] + [0] * depth
    for m in range(1, depth + 1):
        phi = [phi[i] - (phi[i - m] if i >= m else 0) for i in range(depth + 1)]
    expected = [sum(string[i] * phi[n - i] for i in range(n + 1)) for n in range(depth + 1)]
    z = branching_function(A1, 2, (0,), (0,), depth)
    assert z.offset == Fraction(-1, 48)
    assert list(z.coeffs) == expected
    assert list(z.coeffs[:6]) == [1, 0, 1, 1, 2, 2]


def test_zero_series_outside_root_lattice():
    z = branching_function(A1, 2, (0,), (1,), 10)
    assert z.is_zero
    z = branching_function(A2, 2, (1, 0), (0, 0), 10)
    assert z.is_zero


@pytest.mark.parametrize("name,k,Lam,lam", [("A1", 2, (0,), (0,)), ("A1", 3, (1,), (1,)), ("A1", 3, (1,), (-1,)), ("A2", 2, (1, 0), (1, 0)), ("B2", 1, (0, 0), (0, 0))])
def test_periodicity(name, k, Lam, lam):
    alg = build_algebra(name[0], int(name[1:]))
    base = branching_function(alg, k, Lam, lam, 30, reduce=False)
    assert all(isinstance(c, int) and c >= 0 for c in base.coeffs)
    for root in alg.long_roots[:4]:
        shifted = WeightVec(tuple(lam)) + root * k
        assert branching_function(alg, k, Lam, shifted, 30, reduce=False) == base


@settings(max_examples=25, deadline=None)
@given(a=st.integers(0, 3), b=st.integers(-6, 6))
def test_branching_reduction_matches_direct(a, b):
    # the short-representative shortcut against the multiplicities of lambda itself
    if (b - a) % 2:
        b += 1
    direct = branching_function(A1, 3, (a,), (b,), 8, reduce=False)
    assert branching_function(A1, 3, (a,), (b,), 8) == direct


def test_canonical_labels_ising():
    labels = canonical_labels(A1, 2)
    assert len(labels) == 3
    lc = label_classes(A1, 2)
    (ident,) = lc.identifications
    assert ident.image[(0,)] == (2,)
    # (0, 0) and (2L1, 2L1) lie in one class
    idx = {r.key(): i for i, r in enumerate(lc.raw)}
    beta_of_2 = root_quotient(A1, 2).index(WeightVec((0,)))
    assert lc.class_of[idx[((0,), 0)]] == lc.class_of[idx[((2,), beta_of_2)]]
    assert len(canonical_labels(A1, 1)) == 1


@pytest.mark.parametrize("k", [1, 2, 3])
def test_identification_is_diagram_automorphism_a2(k):
    # simple currents of A2 rotate the extended Dynkin labels (a0, a1, a2)
    lc = label_classes(A2, k)
    for ident in lc.identifications:
        for (a1, a2), img in ident.image.items():
            a0 = k - a1 - a2
            assert img in {(a0, a1), (a2, a0)}


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_identification_a1(k):
    (ident,) = label_classes(A1, k).identifications
    assert ident.image == {(a,): (k - a,) for a in range(k + 1)}


@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_T_matches_branching_offset(k):
    for r in raw_labels(A1, k):
        z = branching_function(A1, k, r.Lambda, r.weight, 5)
        assert parafermion_T(A1, k, r) == z.offset % 1


def test_T_examples():
    vac = canonical_labels(A1, 2)[0]
    assert parafermion_T(A1, 2, vac) == Fraction(47, 48)
    data = parafermion_S(A1, 2)
    raws = raw_labels(A1, 2)
    lc = data.classes
    for members in lc.classes:
        phases = {parafermion_T(A1, 2, raws[i]) for i in members}
        assert len(phases) == 1


def test_ising_S():
    data = parafermion_S(A1, 2)
    assert best_permutation_distance(data.S, ISING_S) < 1e-8
    assert data.central_charge == Fraction(1, 2)
    assert np.abs(data.S - data.S.T).max() == 0


def test_trivial_S():
    data = parafermion_S(A1, 1)
    assert len(data) == 1 and abs(data.S[0, 0] - 1) < 1e-12


@pytest.mark.parametrize("name,k", [("A1", 3), ("A1", 4), ("A2", 2), ("B2", 1), ("G2", 1), ("C3", 1)])
def test_intra_class_consistency(name, k):
    alg = build_algebra(name[0], int(name[1:]))
    lc = label_classes(alg, k)
    s = raw_S(alg, k)
    for ca in lc.classes:
        for cb in lc.classes:
            block = s[np.ix_(ca, cb)]
            assert np.abs(block - block[0, 0]).max() < 1e-10


@pytest.mark.parametrize("name,k", [("A1", 2), ("A1", 3), ("A1", 4), ("A2", 1), ("A2", 2), ("B2", 1), ("G2", 1), ("B2", 2), ("A3", 1)])
def test_modular_data_axioms(name, k):
    data = parafermion_S(build_algebra(name[0], int(name[1:])), k)
    res = modular_residuals(data)
    assert res["unitarity"] < 1e-10
    assert res["symmetry"] < 1e-12
    assert res["st_cubed"] < 1e-8
    assert res["s2_permutation"] < 1e-8
    d = quantum_dimensions(data)
    assert (d >= 1 - 1e-12).all()
    assert (data.S[0].real > 0).all()


@pytest.mark.parametrize("name,k", [("A1", 2), ("A1", 3), ("A1", 4), ("A2", 1), ("A2", 2)])
def test_verlinde(name, k):
    data = parafermion_S(build_algebra(name[0], int(name[1:])), k)
    N = verlinde_fusion(data)
    n = len(data)
    assert (N[0] == np.eye(n, dtype=int)).all()
    assert (N >= 0).all()
    assert (N == N.transpose(1, 0, 2)).all()


def test_ising_fusion():
    data = parafermion_S(A1, 2)
    N = verlinde_fusion(data)
    h = [(t + data.central_charge / 24) % 1 for t in data.T_phases]
    sig, eps = h.index(Fraction(1, 16)), h.index(Fraction(1, 2))
    assert list(N[sig, sig]) == [1 if c in (0, eps) else 0 for c in range(3)]
    assert list(N[eps, eps]) == [1, 0, 0]


def test_potts_spectrum():
    data = parafermion_S(A1, 3)
    h = sorted((t + data.central_charge / 24) % 1 for t in data.T_phases)
    assert data.central_charge == Fraction(4, 5)
    assert h == sorted([Fraction(0), Fraction(2, 3), Fraction(2, 3), Fraction(1, 15), Fraction(1, 15), Fraction(2, 5)])


def test_verify_S_transform():
    assert verify_S_transform(A1, 1, 0.3 + 0.9j, 10).residual < 1e-15
    rep = verify_S_transform(A1, 3, 1.1j, 60)
    assert rep.residual < 1e-5
    assert len(rep.rows) == 6
    assert rep.passes(1e-5)


def test_verify_S_transform_rank2():
    rep = verify_S_transform(A2, 2, 0.1 + 1.05j, 20)
    assert rep.residual < 1e-6


@pytest.mark.parametrize("k", [1, 2])
def test_orbifold_identity(k):
    for L in dominant_weights(A1, k):
        for j in range(root_quotient(A1, k).order):
            rep = verify_orbifold_identity(A1, k, L, j, 1.1j, 40)
            assert rep.residual < 1e-6
            assert rep.group_order == k


def test_orbifold_identity_a2():
    rep = verify_orbifold_identity(A2, 2, (1, 0), 1, 1.1j, 16)
    assert rep.residual < 1e-6


def test_character_resummation():
    # chi_Lambda(0, tau) = sum_beta theta_{sqrt(k) Q_L + lambda/sqrt(k)} / eta^l * Z_{M^{Lambda, lambda}}
    k, tau, depth = 2, 1.1j, 40
    lat = scale(standard_lattices(A1).Q_L, k)
    cos = root_quotient(A1, k)
    eta = euler_phi(depth).shift(Fraction(1, 24)).evaluate(tau)
    for L in dominant_weights(A1, k):
        total = 0
        for beta in cos.reps:
            lam = L.weight + beta
            z = branching_function(A1, k, L, lam, depth).evaluate(tau)
            total += theta_eval(lat, lam / k, [0], tau) / eta * z
        chi = affine_character_eval(A1, k, L, [0], tau, depth)
        assert abs(total - chi) < 1e-6
