from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hamrep import liealg
from hamrep.liealg import builtin_algebra, bracket, jacobi_check, invariant_count


@pytest.mark.parametrize("family", liealg.FAMILIES)
@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_builtins_satisfy_jacobi(family, n):
    rep = jacobi_check(builtin_algebra(family, n))
    assert rep.ok, rep.violations[:3]


def test_dimensions():
    # hand counts: so(n) has n(n-1)/2, each vector generator n, scalars 1
    so = lambda n: n * (n - 1) // 2
    for n in (1, 2, 3, 4):
        assert builtin_algebra("WeylHeisenberg", n).dim == 2 * n + 1
        assert builtin_algebra("Hamilton", n).dim == so(n) + 2 * n + 1
        assert builtin_algebra("Galilei", n).dim == so(n) + 2 * n + 2
        assert builtin_algebra("QuantumHamilton", n).dim == so(n) + 4 * n + 6
        assert builtin_algebra("Euclidean", n).dim == so(n) + n


def test_aliases():
    assert liealg.canonical_family("qha") == "QuantumHamilton"
    assert liealg.canonical_family("GA") == "Galilei"
    with pytest.raises(ValueError):
        liealg.canonical_family("poincare")


def test_heisenberg_relations_in_qha():
    alg = builtin_algebra("QuantumHamilton", 3)
    for i in range(1, 4):
        for j in range(1, 4):
            got = bracket(alg, alg.unit(f"P_{i}"), alg.unit(f"Q_{j}"))
            want = alg.unit("I") if i == j else [0] * alg.dim
            assert [abs(x) for x in got] == [abs(Fraction(x)) for x in want]
    assert alg.hbar_symbolic("P_1", "Q_1")


def test_broken_table_is_caught():
    alg = builtin_algebra("Hamilton", 3)
    # flip one side of [G_1, F_1] only
    t = alg.bracket_basis(alg.idx("G_1"), alg.idx("F_1"))
    bad = alg.with_bracket("G_1", "F_1", {k: -v for k, v in t.items()}, both=False)
    rep = jacobi_check(bad)
    assert not rep.ok
    assert ("G_1", "F_1") in rep.antisymmetry


def test_broken_jacobi_is_caught():
    # e(3) with one rotation bracket doubled: still antisymmetric, no longer Lie
    # (so(3) alone would not do, its Jacobi identity survives any rescaling)
    alg = builtin_algebra("Euclidean", 3)
    a, b = alg.idx("J_12"), alg.idx("J_23")
    terms = {k: 2 * v for k, v in alg.bracket_basis(a, b).items()}
    bad = alg.with_bracket(a, b, terms)
    rep = jacobi_check(bad)
    assert not rep.ok and not rep.antisymmetry and rep.violations


vec = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=7), min_size=15, max_size=15)


@settings(max_examples=40, deadline=None)
@given(vec, vec, st.fractions(min_value=-3, max_value=3, max_denominator=5))
def test_bracket_bilinear_antisymmetric(x, y, c):
    alg = builtin_algebra("QuantumHamilton", 2)
    assert alg.dim == 15
    xy = bracket(alg, x, y)
    assert xy == [-v for v in bracket(alg, y, x)]
    cx = [c * v for v in x]
    assert bracket(alg, cx, y) == [c * v for v in xy]


def test_structure_constants_dense_matches_sparse():
    alg = builtin_algebra("Galilei", 3)
    arr = alg.structure_constants()
    for (a, b), terms in alg.brackets.items():
        for k, v in terms.items():
            assert arr[a, b, k] == float(v)
    assert np.allclose(arr, -arr.transpose(1, 0, 2))


def test_exact_rank_matches_numpy():
    rng = np.random.default_rng(3)
    for _ in range(30):
        r, c = rng.integers(1, 7, size=2)
        k = int(rng.integers(1, min(r, c) + 1))
        M = rng.integers(-4, 5, size=(r, k)) @ rng.integers(-4, 5, size=(k, c))
        assert liealg.exact_rank(M.tolist()) == np.linalg.matrix_rank(M)


def test_invariant_counts_small_cases():
    # so(3): Casimir J^2 only; e(3): J.P and P^2; heisenberg: central I only
    so3 = liealg.quotient(liealg.subspace(builtin_algebra("Euclidean", 3), ["G_1", "G_2", "G_3"]))
    assert invariant_count(so3) == 1
    assert invariant_count(builtin_algebra("Euclidean", 3)) == 2
    assert invariant_count(builtin_algebra("Euclidean", 2)) == 1
    for n in (1, 2, 3):
        assert invariant_count(builtin_algebra("WeylHeisenberg", n)) == 1
    assert invariant_count(liealg.abelian_algebra(4)) == 4


def test_invariant_count_parity():
    # K(x) is antisymmetric, so its rank is even and dim - count is even
    for fam in liealg.FAMILIES:
        for n in (1, 2, 3, 4):
            alg = builtin_algebra(fam, n)
            assert (alg.dim - invariant_count(alg)) % 2 == 0


def test_invariant_count_rejects_zero_trials():
    with pytest.raises(ValueError):
        invariant_count(builtin_algebra("Hamilton", 2), trials=0)


def test_ideal_and_quotient():
    wh = builtin_algebra("WeylHeisenberg", 2)
    s = liealg.subspace(wh, ["I"])
    assert liealg.is_ideal(s)
    q = liealg.quotient(s)
    assert q.dim == 4 and not q.brackets

    qha = builtin_algebra("QuantumHamilton", 3)
    bad = liealg.subspace(qha, [lab for lab in qha.basis if lab[0] in "IPQET"])
    assert not liealg.is_ideal(bad)
    with pytest.raises(liealg.NotAnIdeal):
        liealg.quotient(bad)


def test_subspace_validation():
    alg = builtin_algebra("Hamilton", 2)
    with pytest.raises(ValueError):
        liealg.subspace(alg, ["R", "R"])


@pytest.mark.parametrize("row", [r for r in liealg.QUOTIENT_ROWS if r.kernel != "IPQET"],
                         ids=lambda r: f"{r.parent}-{r.kernel}")
def test_quotient_rows(row):
    for n in (2, 3):
        c = liealg.check_quotient_row(row, n)
        assert c.ok, c


def test_quotient_row_ipqet_is_not_an_ideal():
    # [G, P] and [F, Q] leave the kernel, so no quotient exists
    row = next(r for r in liealg.QUOTIENT_ROWS if r.kernel == "IPQET")
    c = liealg.check_quotient_row(row, 3)
    assert not c.ideal and not c.ok


def test_counts_where_tabulated_parity_is_consistent():
    for fam in ("WeylHeisenberg", "Hamilton"):
        for n in (1, 2, 3, 4):
            got = invariant_count(builtin_algebra(fam, n))
            assert got == liealg.count_formula(fam, n) == liealg.TABULATED_COUNTS[fam][n - 1]


def test_galilei_family_counts():
    # dim parity forces these; the generic rank is even
    got = {fam: [invariant_count(builtin_algebra(fam, n)) for n in (1, 2, 3, 4)]
           for fam in ("Galilei", "QuantumHamilton")}
    assert got == {"Galilei": [2, 3, 3, 4], "QuantumHamilton": [4, 5, 5, 6]}
