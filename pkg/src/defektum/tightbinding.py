"""Tight-binding model of the four vacancy dangling orbitals.

The active space is the four sp3 dangling orbitals around a vacancy. Overlap
integrals are neglected, so the levels are the eigenvalues of an ordinary
symmetric matrix with onsite energies on the diagonal and hopping integrals
off it.
"""

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .exceptions import ClassificationError

DEFAULT_DEGENERACY_TOL = 1e-9

# symmetry-adapted combinations of the four dangling orbitals (rows)
SALCAO = {
    "a1": np.array([[1.0, 1.0, 1.0, 1.0]]) / 2.0,
    "t2": np.array([
        [1.0, -1.0, 1.0, -1.0],
        [1.0, 1.0, -1.0, -1.0],
        [1.0, -1.0, -1.0, 1.0],
    ]) / 2.0,
}


@dataclass(frozen=True, eq=False)
class TBModel:
    """Onsite energies ``alpha`` (eV, one per site) and hopping matrix ``beta`` (eV)."""

    alpha: np.ndarray
    beta: np.ndarray

    def __post_init__(self):
        beta = np.asarray(self.beta, dtype=float)
        n = beta.shape[0]
        if beta.shape != (n, n) or n < 2:
            raise ValueError("hopping matrix must be square with at least 2 sites")
        if not np.allclose(beta, beta.T, rtol=0, atol=1e-12):
            raise ValueError("hopping matrix must be symmetric")
        if np.any(np.diag(beta) != 0.0):
            raise ValueError("hopping matrix must have a zero diagonal")
        alpha = np.broadcast_to(np.asarray(self.alpha, dtype=float), (n,)).copy()
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "beta", beta)

    @property
    def n_sites(self):
        return len(self.alpha)

    @property
    def matrix(self):
        return np.diag(self.alpha) + self.beta


@dataclass(frozen=True)
class Level:
    energy: float
    degeneracy: int
    irrep: Optional[str] = None
    # column indices into LevelSet.eigenvectors
    states: tuple = ()


@dataclass(frozen=True, eq=False)
class LevelSet:
    levels: tuple
    eigenvalues: np.ndarray = field(repr=False)
    eigenvectors: np.ndarray = field(repr=False)

    @property
    def energies(self):
        return [lvl.energy for lvl in self.levels]

    @property
    def degeneracies(self):
        return [lvl.degeneracy for lvl in self.levels]

    @property
    def irreps(self):
        return [lvl.irrep for lvl in self.levels]

    def subspace(self, level):
        return self.eigenvectors[:, list(level.states)]


def build_hamiltonian(alpha, beta_uniform):
    """Uniform four-site model: every site equivalent, every pair hopping ``beta_uniform``."""
    beta = np.full((4, 4), float(beta_uniform))
    np.fill_diagonal(beta, 0.0)
    return TBModel(np.full(4, float(alpha)), beta)


def build_trigonal_hamiltonian(alpha_ax, alpha_bas, beta_ax, beta_bas):
    """Four-site model with site 0 on the trigonal axis and sites 1-3 basal."""
    beta = np.full((4, 4), float(beta_bas))
    beta[0, :] = beta[:, 0] = float(beta_ax)
    np.fill_diagonal(beta, 0.0)
    return TBModel(np.array([alpha_ax, alpha_bas, alpha_bas, alpha_bas], dtype=float), beta)


def solve_levels(model, tol=DEFAULT_DEGENERACY_TOL):
    """Diagonalize the model and group eigenvalues into degenerate levels.

    Two consecutive eigenvalues belong to the same level when they differ by
    at most ``tol`` times the largest eigenvalue magnitude.
    """
    w, v = np.linalg.eigh(model.matrix)
    scale = max(float(np.max(np.abs(w))), np.finfo(float).tiny)
    groups = [[0]]
    for k in range(1, len(w)):
        if w[k] - w[groups[-1][-1]] <= tol * scale:
            groups[-1].append(k)
        else:
            groups.append([k])
    levels = tuple(
        Level(float(np.mean(w[g])), len(g), None, tuple(g)) for g in groups
    )
    return LevelSet(levels, w, v)


def _weight(subspace, vectors):
    # squared norm of the projection of each vector onto the subspace
    proj = vectors @ subspace
    return np.sum(proj**2, axis=1)


def classify_irreps(ls, group, tol=1e-6):
    """Attach irreducible-representation labels to each level.

    ``Td``: every level must lie entirely in the a1 or the t2 SALCAO
    subspace. ``C3v``: site 0 is axial; nondegenerate levels symmetric under
    permutations of the basal sites are ``a1`` (otherwise ``a``), doubly
    degenerate levels are ``e``.
    """
    n = ls.eigenvectors.shape[0]
    if n != 4:
        raise ClassificationError("irrep classification needs the four-site vacancy model")
    labelled = []
    if group == "Td":
        for lvl in ls.levels:
            sub = ls.subspace(lvl)
            a1 = _weight(sub, SALCAO["a1"]).sum()
            t2 = _weight(sub, SALCAO["t2"]).sum()
            if lvl.degeneracy == 1 and abs(a1 - 1.0) < tol:
                label = "a1"
            elif lvl.degeneracy == 3 and abs(t2 - 3.0) < tol:
                label = "t2"
            else:
                raise ClassificationError(
                    f"level at {lvl.energy:g} eV (degeneracy {lvl.degeneracy}) is not a Td irrep")
            labelled.append(replace(lvl, irrep=label))
    elif group == "C3v":
        for lvl in ls.levels:
            sub = ls.subspace(lvl)
            if lvl.degeneracy == 1:
                c = sub[:, 0]
                label = "a1" if np.ptp(c[1:]) < tol else "a"
            elif lvl.degeneracy == 2:
                # e levels carry no weight on the axial site and sum to zero over the base
                if np.any(np.abs(sub[0]) > tol) or np.any(np.abs(sub[1:].sum(axis=0)) > tol):
                    raise ClassificationError(f"doubly degenerate level at {lvl.energy:g} eV is not e")
                label = "e"
            else:
                raise ClassificationError(
                    f"degeneracy {lvl.degeneracy} at {lvl.energy:g} eV is impossible in C3v")
            labelled.append(replace(lvl, irrep=label))
    else:
        raise ClassificationError(f"irrep labels available for Td and C3v only, not {group}")
    return LevelSet(tuple(labelled), ls.eigenvalues, ls.eigenvectors)
