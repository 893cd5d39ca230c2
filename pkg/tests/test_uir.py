from dataclasses import replace
from fractions import Fraction

import numpy as np
import pytest

from hamrep import groups, uir
from hamrep.groups import GroupParams
from hamrep.repops import apply_to_samples, op_distance
from hamrep.uir import RepLabels


def psi(x, tt):
    return np.exp(-0.5 * x @ x - 0.2 * tt * tt) * (1 + 0.3 * x[0])


PTS = np.array([[0.3, 0.0], [-1.2, 0.0], [2.0, 0.0]])


def test_labels_validation_and_json():
    L = RepLabels(lam=2.0, j=Fraction(3, 2), basis="position_time", diag="velocity_diag")
    assert RepLabels.from_json(L.to_json()) == L
    assert L.half_integer and L.basis_choice == ("position_time", "velocity_diag")
    assert RepLabels.from_json({"j": "1", "basis_choice": ["momentum_time", "force_diag"]}).j == 1
    for bad in (dict(j=0.3), dict(j=-1), dict(hbar=0.0), dict(basis="energy")):
        with pytest.raises(ValueError):
            RepLabels(**bad)


@pytest.mark.parametrize("fam,attr", [("WeylHeisenberg", "lam"), ("Hamilton", "kappa"), ("Galilei", "mu"),
                                      ("QuantumHamilton", "lam"), ("QuantumHamilton", "mu")])
def test_degenerate_labels(fam, attr):
    with pytest.raises(uir.DegenerateLabels, match="Quotient"):
        uir.check_labels(replace(RepLabels(), **{attr: 0.0}), fam)


def test_spin_needs_three_dimensions():
    with pytest.raises(ValueError):
        uir.check_labels(RepLabels(j=1), "Hamilton", 2)
    uir.check_labels(RepLabels(j=0), "Hamilton", 2)


@pytest.mark.parametrize("fam", ["WeylHeisenberg", "Hamilton", "Galilei", "GalileiConjugate", "QuantumHamilton"])
@pytest.mark.parametrize("basis", uir.BASES)
@pytest.mark.parametrize("diag", uir.DIAGS)
def test_catalog_brackets(fam, basis, diag):
    L = RepLabels(lam=1.3, mu=0.7, alpha=-1.1, kappa=0.9, hbar=0.8, j=1, basis=basis, diag=diag)
    assert uir.catalog_commutator_check(L, fam, 3) < 1e-12


def test_weyl_heisenberg_factors():
    # translation parameter a multiplies by exp(-i a x / hbar); b shifts by -lam b
    L = RepLabels(lam=1.3, hbar=0.7, j=0)
    got = apply_to_samples(uir.wh_rep(L, ([0.5], [0.0], 0.0)), psi, PTS)
    assert np.allclose(got, [np.exp(-0.5j * x / 0.7) * psi(np.array([x]), 0) for x in PTS[:, 0]])
    got = apply_to_samples(uir.wh_rep(L, ([0.0], [0.5], 0.0)), psi, PTS)
    assert np.allclose(got, [psi(np.array([x - 1.3 * 0.5]), 0) for x in PTS[:, 0]])
    u = uir.wh_rep(L, ([0.0], [0.0], 0.9))
    assert np.isclose(u.c0, -1.3 * 0.9 / 0.7)


def test_hamilton_factors():
    L = RepLabels(kappa=1.7, j=0)
    rv = uir.hamilton_rep(L, GroupParams.make(1, v=[0.5]))
    got = apply_to_samples(rv.internal.with_c0(rv.base.c0), psi, PTS)
    assert np.allclose(got, [np.exp(-1j * 1.7 * 0.5 * x) * psi(np.array([x]), 0) for x in PTS[:, 0]])
    rv = uir.hamilton_rep(L, GroupParams.make(1, f=[0.5]))
    got = apply_to_samples(rv.internal, psi, PTS)
    assert np.allclose(got, [psi(np.array([x - 0.5]), 0) for x in PTS[:, 0]])
    # the central r acts as exp(-i kappa r / 2)
    assert np.isclose(uir.hamilton_rep(L, GroupParams.make(1, r=0.8)).base.c0, -1.7 * 0.4)


def test_qha_boost_closed_form():
    # U psi(p, tt) = exp(-i v tt p/hbar - i v^2 mu tt/(2 hbar)) psi(p + mu v, tt)
    mu, v, h = 1.5, 0.7, 0.9
    L = RepLabels(mu=mu, hbar=h, j=0)
    rv = uir.qha_rep(L, GroupParams.make(1, v=[v]))
    pts = np.array([[0.4, 0.8], [-1.0, -0.3], [2.2, 1.1]])
    got = apply_to_samples(rv.base, psi, pts)
    want = [np.exp(-1j * v * t * p / h - 1j * v * v * mu * t / (2 * h)) * psi(np.array([p + mu * v]), t)
            for p, t in pts]
    assert np.allclose(got, want)


def test_identity_and_unitarity():
    L = RepLabels(j=1)
    e = uir.qha_rep(L, GroupParams.identity(3))
    assert np.allclose(e.dj, np.eye(3)) and op_distance(e.base, e.base.identity(3)) == 0
    rng = np.random.default_rng(0)
    for _ in range(5):
        g = uir.random_family_element(rng, "QuantumHamilton", 3)
        assert uir.check_unitary(uir.qha_rep(L, g))


def test_rotation_lift():
    rng = np.random.default_rng(1)
    for _ in range(10):
        R = groups.random_rotation(rng, 3)
        assert np.abs(groups.su2_project(uir.rotation_lift(R)) - R).max() < 1e-12


@pytest.mark.parametrize("fam,j", [("WeylHeisenberg", 0), ("Hamilton", 0), ("Hamilton", Fraction(1, 2)),
                                   ("Hamilton", 1), ("Galilei", Fraction(1, 2)), ("QuantumHamilton", 0),
                                   ("QuantumHamilton", Fraction(1, 2)), ("QuantumHamilton", Fraction(3, 2))])
def test_homomorphism(fam, j):
    L = RepLabels(lam=0.8, mu=1.2, alpha=-0.6, kappa=1.4, hbar=1.1, j=j)
    rep = uir.verify_homomorphism(fam, L, trials=25, seed=3)
    assert rep.passed, rep.max_dev
    assert set(rep.to_json()) == {"family", "labels", "trials", "seed", "max_dev", "pass", "notes"}


@pytest.mark.parametrize("basis", uir.BASES)
@pytest.mark.parametrize("diag", uir.DIAGS)
def test_homomorphism_all_bases(basis, diag):
    L = RepLabels(lam=1.3, mu=0.9, alpha=1.7, kappa=-0.8, hbar=0.6, basis=basis, diag=diag)
    assert uir.verify_homomorphism("QuantumHamilton", L, trials=20, seed=1).passed
    assert uir.verify_homomorphism("Hamilton", L, trials=10, seed=1).passed


def test_homomorphism_n1_n2():
    L = RepLabels(j=0, lam=1.2)
    for n in (1, 2):
        assert uir.verify_homomorphism("QuantumHamilton", L, trials=10, seed=0, n=n).passed


def test_cover_sign():
    rng = np.random.default_rng(2)
    for j in (Fraction(1, 2), 1, Fraction(3, 2)):
        L = RepLabels(j=j)
        g = groups.random_cover_element(rng)
        a, b = uir.qha_rep(L, g), uir.qha_rep(L, g.negate())
        assert np.allclose(b.dj, (-1) ** int(2 * j) * a.dj)


def test_quoted_form_notes():
    notes = uir.quoted_form_notes(RepLabels(), trials=4)
    text = "\n".join(notes)
    assert "kappa*r/2: homomorphic=True, equals built after phase conjugation=True" in text
    assert "half-term q.p: conjugated built phase constant = -0.5" in text


@pytest.mark.parametrize("seed", range(4))
def test_casimir_eigenvalues(seed):
    rng = np.random.default_rng(seed)
    L = RepLabels(lam=rng.uniform(0.5, 2), mu=rng.uniform(0.5, 2), alpha=rng.uniform(-2, -0.5),
                  kappa=rng.uniform(0.5, 2), hbar=rng.uniform(0.5, 1.5), eps=rng.uniform(-1, 1),
                  j=Fraction(int(rng.integers(0, 4)), 2))
    jj = float(L.j * (L.j + 1))
    hl = L.hbar * L.lam
    want = {
        ("Hamilton", 1): L.kappa, ("Hamilton", 2): L.kappa ** 2 * jj,
        ("Galilei", 1): L.mu, ("Galilei", 2): 2 * L.mu * L.eps, ("Galilei", 3): L.mu ** 2 * jj,
        ("GalileiConjugate", 3): L.alpha ** 2 * jj,
        ("QuantumHamilton", 1): hl, ("QuantumHamilton", 2): L.mu, ("QuantumHamilton", 3): L.alpha,
        ("QuantumHamilton", 4): -hl * L.kappa - L.mu * L.alpha,
        ("QuantumHamilton", 5): (hl * L.kappa) ** 2 * jj,
    }
    for (fam, k), w in want.items():
        got = uir.casimir_eigenvalue(L, k, fam)
        assert abs(got - w) < 1e-9 * max(1, abs(w)), (fam, k)
        assert abs(uir.derived_eigenvalue(L, k, fam) - w) < 1e-12


def test_quoted_and_derived_differ_only_for_c4_c5():
    L = RepLabels(lam=1.3, mu=0.7, alpha=0.4, kappa=1.1)
    for k in (1, 2, 3):
        assert uir.quoted_eigenvalue(L, k) == uir.derived_eigenvalue(L, k)
    for k in (4, 5):
        assert uir.quoted_eigenvalue(L, k) != uir.derived_eigenvalue(L, k)


def test_rep_of_unknown_family():
    with pytest.raises(KeyError):
        uir.rep_of("Euclidean", RepLabels(), GroupParams.identity(3))
