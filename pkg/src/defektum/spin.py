"""Spin Hamiltonians: spin matrices, zero-field splitting spectra, the
point-dipole ZFS tensor of a voxelized spin density, principal-axis (D, E)
extraction and grouping of hyperfine tensors by equivalent nuclei."""

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ._parallel import ordered_map
from .constants import ANG_TO_M, DIPOLAR_PREFACTOR_MHZ_M3
from .fields import normalized_weights, wrap_vectors

DEFAULT_HYPERFINE_TOL = 1e-4

# pairs evaluated per work item; fixed so the reduction does not depend on thread count
_PAIR_BUDGET = 1 << 21


def _check_spin(S):
    two_s = Fraction(S).limit_denominator(2) * 2
    if two_s.denominator != 1 or two_s < 1 or abs(float(two_s) - 2 * S) > 1e-12:
        raise ValueError(f"spin must be a positive multiple of 1/2, got {S}")
    return int(two_s)


def spin_matrices(S):
    """Spin operators (Sx, Sy, Sz) for spin ``S`` in the |S, m> basis, m descending."""
    two_s = _check_spin(S)
    s = two_s / 2
    m = s - np.arange(two_s + 1)
    # <m+1|S+|m> = sqrt(s(s+1) - m(m+1))
    sp = np.diag(np.sqrt(s * (s + 1) - m[1:] * (m[1:] + 1)), k=1).astype(complex)
    sm = sp.conj().T
    sx = 0.5 * (sp + sm)
    sy = -0.5j * (sp - sm)
    sz = np.diag(m).astype(complex)
    return sx, sy, sz


@dataclass(frozen=True, eq=False)
class ZfsLevels:
    energies: np.ndarray  # MHz, ascending
    transitions: np.ndarray  # MHz, from the lowest level


def zfs_hamiltonian(D, E, S):
    sx, sy, sz = spin_matrices(S)
    n = sz.shape[0]
    return D * (sz @ sz - S * (S + 1) / 3.0 * np.eye(n)) + E * (sx @ sx - sy @ sy)


def zfs_levels(D, E, S):
    """Eigenvalues of D(Sz^2 - S(S+1)/3) + E(Sx^2 - Sy^2) and transitions from the lowest level."""
    if _check_spin(S) < 2:
        raise ValueError("no zero-field splitting for doublets")
    w = np.linalg.eigvalsh(zfs_hamiltonian(D, E, S))
    return ZfsLevels(w, w[1:] - w[0])


@dataclass(frozen=True, eq=False)
class ZfsResult:
    tensor: np.ndarray  # MHz, symmetric traceless
    D: float
    E: float
    axis: np.ndarray

    @property
    def eigenvalues(self):
        return np.linalg.eigvalsh(self.tensor)


def _fix_sign(v):
    for k in (2, 1, 0):
        if abs(v[k]) > 1e-12:
            return v if v[k] > 0 else -v
    return v


def principal_zfs(tensor, sym_tol=1e-9):
    """Extract (D, E, axis) from a symmetric ZFS tensor in MHz.

    The quantization axis is the eigenvector of largest-magnitude eigenvalue
    lambda_z; D = 3/2 lambda_z and E = (lambda_x - lambda_y)/2 >= 0. The axis
    sign makes its z component positive (ties fall back to y, then x). Any
    isotropic part of the input is removed first.
    """
    t = np.asarray(tensor, dtype=float)
    if t.shape != (3, 3):
        raise ValueError("tensor must be 3x3")
    scale = max(float(np.max(np.abs(t))), 1.0)
    if np.max(np.abs(t - t.T)) > sym_tol * scale:
        raise ValueError("ZFS tensor is not symmetric")
    t = 0.5 * (t + t.T)
    t = t - np.trace(t) / 3.0 * np.eye(3)
    if np.max(np.abs(t)) <= 1e-12 * scale:
        return 0.0, 0.0, np.array([0.0, 0.0, 1.0])
    w, v = np.linalg.eigh(t)
    iz = int(np.argmax(np.abs(w)))
    rest = [k for k in range(3) if k != iz]
    ix, iy = sorted(rest, key=lambda k: -w[k])
    D = 1.5 * w[iz]
    E = 0.5 * (w[ix] - w[iy])
    return float(D), float(E), _fix_sign(v[:, iz])


def zfs_result(tensor):
    t = np.asarray(tensor, dtype=float)
    t = 0.5 * (t + t.T)
    t = t - np.trace(t) / 3.0 * np.eye(3)
    D, E, axis = principal_zfs(t)
    return ZfsResult(t, D, E, axis)


def dipolar_tensor(field, S, cutoff=0.0, threads=None):
    """ZFS tensor of a spin density in the classical point-dipole approximation.

    Each voxel carries the spin ``w_i = rho_i dV`` (the field is rescaled to
    integrate to 2S). The tensor is

        D_ab = C / (2S(2S-1)) * sum_{i<j} w_i w_j (r^2 delta_ab - 3 r_a r_b) / r^5

    with C = (mu0/4pi)(g_e mu_B)^2 / h, pair vectors taken under the minimum
    image and clamped to at least half a voxel diagonal. Voxels with
    ``|w_i| <= cutoff * max|w|`` are dropped.

    Work is split into chunks whose size depends only on the voxel count, and
    partial sums are added in chunk order, so results are bit-identical for
    any ``threads``.
    """
    two_s = _check_spin(S)
    if two_s < 2:
        raise ValueError("no zero-field splitting for doublets")
    w = normalized_weights(field, target=float(two_s)).reshape(-1)
    keep = np.abs(w) > cutoff * np.max(np.abs(w)) if cutoff > 0 else w != 0.0
    idx = np.flatnonzero(keep)
    if len(idx) < 2:
        raise ValueError("need at least two nonzero voxels")
    pts = field.grid_points_ang().reshape(-1, 3)[idx]
    wk = w[idx]
    cell = field.cell_ang
    rmin = 0.5 * np.linalg.norm(field.voxel_ang.sum(axis=0))
    n = len(idx)
    chunk = max(1, _PAIR_BUDGET // n)

    def partial(start):
        stop = min(start + chunk, n)
        d = wrap_vectors(pts[None, :, :] - pts[start:stop, None, :], cell)
        r2 = np.einsum("abi,abi->ab", d, d)
        self_pair = np.zeros_like(r2, dtype=bool)
        rows = np.arange(stop - start)
        self_pair[rows, rows + start] = True
        r2 = np.maximum(r2, rmin * rmin)
        r = np.sqrt(r2)
        pair_w = np.where(self_pair, 0.0, wk[start:stop, None] * wk[None, :]) / r**5
        iso = np.einsum("ab,ab->", pair_w, r2)
        aniso = np.einsum("ab,abi,abj->ij", pair_w, d, d)
        return iso * np.eye(3) - 3.0 * aniso

    acc = np.zeros((3, 3))
    for part in ordered_map(partial, range(0, n, chunk), threads):
        acc += part
    # ordered-pair sum counts every pair twice; lengths Angstrom -> m
    acc *= 0.5 / ANG_TO_M**3
    tensor = DIPOLAR_PREFACTOR_MHZ_M3 / (two_s * (two_s - 1)) * acc
    return zfs_result(tensor)


def two_dipole_d(separation_ang):
    """|D| (MHz) of two unit spins forming a triplet at ``separation_ang``: 3/2 C / r^3."""
    r = separation_ang * ANG_TO_M
    return 1.5 * DIPOLAR_PREFACTOR_MHZ_M3 / r**3


# ---------------------------------------------------------------------------
# hyperfine


@dataclass(frozen=True)
class HyperfineRecord:
    species: str
    isotope: object
    multiplicity: int
    axx: float
    ayy: float
    azz: float

    @property
    def eigenvalues(self):
        return (self.axx, self.ayy, self.azz)


def expand_hyperfine_rows(rows):
    """Turn grouped table rows ``{count, species, isotope, axx_mhz, ayy_mhz, azz_mhz}`` into per-nucleus records."""
    out = []
    for row in rows:
        for _ in range(int(row["count"])):
            out.append(HyperfineRecord(row["species"], row.get("isotope"), 1,
                                       float(row["axx_mhz"]), float(row["ayy_mhz"]), float(row["azz_mhz"])))
    return out


def _close(a, b, rel_tol):
    return all(abs(x - y) <= rel_tol * max(abs(x), abs(y), 1e-300) for x, y in zip(a, b))


def group_equivalent_nuclei(records, rel_tol=DEFAULT_HYPERFINE_TOL):
    """Merge nuclei of the same species and isotope whose sorted eigenvalue triples agree.

    Returns records sorted by species, then by descending |Azz|.
    """
    if not rel_tol > 0:
        raise ValueError("rel_tol must be positive")
    groups = []
    for rec in records:
        key = sorted(rec.eigenvalues)
        for g in groups:
            if g["species"] == rec.species and g["isotope"] == rec.isotope and _close(g["key"], key, rel_tol):
                g["count"] += rec.multiplicity
                break
        else:
            groups.append({"species": rec.species, "isotope": rec.isotope, "key": key,
                           "count": rec.multiplicity, "rep": rec})
    merged = [HyperfineRecord(g["species"], g["isotope"], g["count"], g["rep"].axx, g["rep"].ayy, g["rep"].azz)
              for g in groups]
    return sorted(merged, key=lambda r: (r.species, -abs(r.azz)))
