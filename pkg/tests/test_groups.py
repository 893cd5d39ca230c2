from fractions import Fraction

import numpy as np
import pytest
from scipy.linalg import expm
from scipy.spatial.transform import Rotation

from hamrep import groups
from hamrep.groups import GroupParams, CoverParams, product, inverse, to_matrix


def _rng(k):
    return np.random.default_rng([5, k])


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_product_matches_matrices(n):
    for k in range(50):
        rng = _rng(k)
        a, b = groups.random_element(rng, n), groups.random_element(rng, n)
        assert np.abs(to_matrix(product(a, b)) - to_matrix(a) @ to_matrix(b)).max() < 1e-11


@pytest.mark.parametrize("n", [1, 3])
def test_group_axioms(n):
    e = GroupParams.identity(n)
    for k in range(30):
        rng = _rng(k)
        a, b, c = (groups.random_element(rng, n) for _ in range(3))
        assert groups.max_dev(product(product(a, b), c), product(a, product(b, c))) < 1e-11
        assert groups.max_dev(product(a, inverse(a)), e) < 1e-12
        assert groups.max_dev(product(inverse(a), a), e) < 1e-12
        assert groups.max_dev(product(e, a), a) == 0


def test_matrix_roundtrip():
    g = groups.random_element(_rng(0), 3)
    assert groups.max_dev(groups.from_matrix(to_matrix(g)), g) < 1e-14
    assert to_matrix(g).shape == (groups.matrix_size(3),) * 2


def test_invalid_elements():
    with pytest.raises(groups.InvalidElement):
        GroupParams.make(2, R=np.array([[1.0, 1.0], [0.0, 1.0]]))
    with pytest.raises(groups.InvalidElement):
        GroupParams.make(2, R=np.diag([1.0, -1.0]))
    with pytest.raises(groups.InvalidElement):
        groups.check_su2(np.diag([1.0, 2.0]))


def test_json_roundtrip():
    g = groups.random_element(_rng(1), 3)
    h = GroupParams.from_json(g.to_json())
    assert groups.max_dev(g, h) == 0
    partial = GroupParams.from_json({"n": 2, "v": [1.0, 0.0]})
    assert np.allclose(partial.R, np.eye(2)) and partial.v[0] == 1.0


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_generator_matrices_reproduce_brackets(n):
    assert groups.generator_commutator_defect(n) == 0


def test_generator_is_tangent():
    # expm of a small multiple of a generator matrix lands on the group
    gens = groups.matrix_log_generators(2)
    for lab in ("G_1", "F_2", "P_1", "Q_2", "E", "T"):
        M = expm(1e-3 * gens[lab])
        g = groups.from_matrix(M)
        assert np.abs(to_matrix(g) - M).max() < 1e-12


def test_factorization_reassembles():
    for k in range(20):
        g = groups.random_element(_rng(k), 3)
        heis, cent, ham, rot = groups.factorize(g)
        assert groups.max_dev(groups.reassemble((heis, cent, ham, rot)), g) < 1e-12
        assert groups.max_dev(product(product(product(heis, cent), ham), rot), g) < 1e-12


def test_cocycle_identity():
    for k in range(100):
        rng = _rng(k)
        xs = [groups.random_element(rng, 3, central=False) for _ in range(3)]
        assert groups.cocycle_defect(*xs) < 1e-11


def test_cocycle_rejects_central_input():
    with pytest.raises(groups.InvalidElement):
        groups.cocycle(GroupParams.make(2, s=1.0), GroupParams.identity(2))


def test_su2_projection_is_double_cover():
    for k in range(50):
        rng = _rng(k)
        u, w = groups.random_su2(rng), groups.random_su2(rng)
        R = groups.su2_project(u)
        assert np.allclose(R.T @ R, np.eye(3)) and np.isclose(np.linalg.det(R), 1)
        assert np.abs(groups.su2_project(u @ w) - R @ groups.su2_project(w)).max() < 1e-12
        assert np.abs(groups.su2_project(-u) - R).max() < 1e-15


def test_su2_exp_covers_rotation():
    for axis, ang in [((0, 0, 1), 0.3), ((1, 2, -1), 2.1), ((1, 0, 0), np.pi)]:
        want = Rotation.from_rotvec(ang * np.asarray(axis) / np.linalg.norm(axis)).as_matrix()
        assert np.abs(groups.su2_project(groups.su2_exp(axis, ang)) - want).max() < 1e-12


def _character(j, theta):
    # trace of the spin-j matrix of a rotation by theta
    return np.sin((2 * j + 1) * theta / 2) / np.sin(theta / 2)


@pytest.mark.parametrize("tj", range(7))
def test_wigner_d(tj):
    j = Fraction(tj, 2)
    d = tj + 1
    assert np.abs(groups.wigner_d(j, -np.eye(2)) - (-1) ** tj * np.eye(d)).max() < 1e-14
    for k in range(10):
        rng = _rng(k)
        u, w = groups.random_su2(rng), groups.random_su2(rng)
        Du = groups.wigner_d(j, u)
        assert np.abs(Du.conj().T @ Du - np.eye(d)).max() < 1e-12
        assert np.abs(groups.wigner_d(j, u @ w) - Du @ groups.wigner_d(j, w)).max() < 1e-12
    theta = 1.234
    assert np.isclose(np.trace(groups.wigner_d(j, groups.su2_exp((1, 1, 0), theta))), _character(float(j), theta))


def test_wigner_d_half_is_identity_map():
    u = groups.random_su2(_rng(9))
    assert np.abs(groups.wigner_d(Fraction(1, 2), u) - u).max() < 1e-15


def test_wigner_d_rejects_bad_spin():
    with pytest.raises(ValueError):
        groups.wigner_d(0.3, np.eye(2))


@pytest.mark.parametrize("j", [Fraction(1, 2), 1, Fraction(3, 2), 2])
def test_spin_matrices(j):
    S = groups.spin_matrices(j)
    jj = float(j) * (float(j) + 1)
    tot = sum(s @ s for s in S.values())
    assert np.abs(tot - jj * np.eye(int(2 * j + 1))).max() < 1e-12
    for s in S.values():
        assert np.abs(s - s.conj().T).max() < 1e-14
    # exp(-i theta S_12) is the spin matrix of the lifted rotation in the 1-2 plane
    th = 0.7
    U = expm(th * groups.spin_generator(1, 2))
    assert np.abs(expm(-1j * th * S[(1, 2)]) - groups.wigner_d(j, U)).max() < 1e-12


def test_cover_params():
    rng = _rng(4)
    c = groups.random_cover_element(rng)
    assert isinstance(c, CoverParams) and c.n == 3
    assert np.abs(groups.su2_project(c.Rbar) - c.project().R).max() < 1e-12
    d = groups.random_cover_element(rng)
    cd = product(c, d)
    assert groups.max_dev(cd.project(), product(c.project(), d.project())) < 1e-12
    with pytest.raises(groups.InvalidElement):
        product(c, d.project())
    with pytest.raises(groups.InvalidElement):
        CoverParams.lift(groups.random_su2(rng), GroupParams.identity(3))
