import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st

from defektum.exceptions import ClassificationError
from defektum.tightbinding import (
    SALCAO, TBModel, build_hamiltonian, build_trigonal_hamiltonian, classify_irreps, solve_levels,
)

GRID = list(itertools.product([-2.0, -0.3, 0.0, 1.5], [-1.7, -0.5, -0.01, 0.01, 0.5, 2.0]))


def test_uniform_matrix():
    m = build_hamiltonian(0.0, -1.0).matrix
    assert np.array_equal(np.diag(m), np.zeros(4))
    assert np.all(m[~np.eye(4, dtype=bool)] == -1.0)


def test_zero_hopping_fourfold():
    ls = solve_levels(build_hamiltonian(0.7, 0.0))
    assert len(ls.levels) == 1 and ls.levels[0].degeneracy == 4
    assert ls.levels[0].energy == pytest.approx(0.7)


def test_direct_diagonalization():
    ls = solve_levels(build_hamiltonian(-1.0, -0.5))
    assert np.allclose(ls.eigenvalues, np.linalg.eigvalsh(build_hamiltonian(-1.0, -0.5).matrix), atol=1e-14)
    assert [lv.degeneracy for lv in ls.levels] == [1, 3]
    assert ls.levels[0].energy == pytest.approx(-2.5)
    assert ls.levels[1].energy == pytest.approx(-0.5)


@pytest.mark.parametrize("alpha,beta", GRID)
def test_splitting_is_four_beta(alpha, beta):
    ls = classify_irreps(solve_levels(build_hamiltonian(alpha, beta)), "Td")
    split = ls.levels[-1].energy - ls.levels[0].energy
    assert split == pytest.approx(4 * abs(beta), rel=1e-12, abs=1e-15)
    labels = [lv.irrep for lv in ls.levels]
    assert labels == (["a1", "t2"] if beta < 0 else ["t2", "a1"])
    assert sum(lv.degeneracy for lv in ls.levels) == 4
    assert ls.eigenvalues.sum() == pytest.approx(4 * alpha, rel=1e-10, abs=1e-12)


def test_a1_vector_uniform():
    ls = solve_levels(build_hamiltonian(0.0, -1.0))
    c = ls.subspace(ls.levels[0])[:, 0]
    assert np.allclose(np.abs(c), 0.5, atol=1e-10)
    assert np.allclose(np.abs(c), np.abs(SALCAO["a1"]), atol=1e-10)


def test_salcao_orthonormal():
    basis = np.vstack([SALCAO["a1"], SALCAO["t2"]])
    assert np.allclose(basis @ basis.T, np.eye(4), atol=1e-15)


def test_trigonal_spectrum():
    # axial alpha 0, basal 0, beta_ax -1, beta_bas -0.5: e at +0.5, a1 at (-1 +- sqrt(13))/2
    ls = classify_irreps(solve_levels(build_trigonal_hamiltonian(0.0, 0.0, -1.0, -0.5)), "C3v")
    energies = [lv.energy for lv in ls.levels]
    assert energies == pytest.approx([(-1 - np.sqrt(13)) / 2, 0.5, (-1 + np.sqrt(13)) / 2], abs=1e-12)
    assert [lv.irrep for lv in ls.levels] == ["a1", "e", "a1"]
    assert [lv.degeneracy for lv in ls.levels] == [1, 2, 1]


def test_td_classification_rejects_broken_symmetry():
    ls = solve_levels(build_trigonal_hamiltonian(0.3, 0.0, -1.0, -0.5))
    with pytest.raises(ClassificationError):
        classify_irreps(ls, "Td")


def test_unknown_group():
    with pytest.raises(ClassificationError):
        classify_irreps(solve_levels(build_hamiltonian(0, -1)), "C2v")


def test_model_invariants():
    with pytest.raises(ValueError):
        TBModel(np.zeros(2), np.array([[0.0, 1.0], [2.0, 0.0]]))
    with pytest.raises(ValueError):
        TBModel(np.zeros(2), np.array([[1.0, 1.0], [1.0, 0.0]]))
    with pytest.raises(ValueError):
        TBModel(np.zeros(1), np.zeros((1, 1)))


@given(st.floats(-3, 3), st.floats(-3, 3), st.floats(-2, 2), st.floats(-2, 2),
       st.permutations(range(4)))
def test_permutation_and_orthonormality(a_ax, a_bas, b_ax, b_bas, perm):
    model = build_trigonal_hamiltonian(a_ax, a_bas, b_ax, b_bas)
    ls = solve_levels(model)
    v = ls.eigenvectors
    assert np.allclose(v.T @ v, np.eye(4), atol=1e-10)
    assert sum(lv.degeneracy for lv in ls.levels) == 4
    p = np.eye(4)[list(perm)]
    permuted = TBModel(p @ model.alpha, p @ model.beta @ p.T)
    assert np.allclose(solve_levels(permuted).eigenvalues, ls.eigenvalues, atol=1e-10)
    assert ls.eigenvalues.sum() == pytest.approx(model.alpha.sum(), abs=1e-10)
