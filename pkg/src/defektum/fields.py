"""Volumetric scalar fields on periodic grids (Gaussian cube format) and
sphere-integrated localization factors."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._parallel import ordered_map
from .constants import BOHR_TO_ANG
from .exceptions import ParseError

DEFAULT_LOCALIZATION_THRESHOLD = 0.1
NORMALIZATION_TOL = 0.02

UNITS = ("bohr", "angstrom")


def length_scale(unit):
    """Factor converting ``unit`` lengths to Angstrom."""
    if unit == "bohr":
        return BOHR_TO_ANG
    if unit == "angstrom":
        return 1.0
    raise ValueError(f"unknown length unit {unit!r}")


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Values on a periodic grid.

    Grid point (i, j, k) sits at ``origin + i*voxel[0] + j*voxel[1] + k*voxel[2]``.
    ``origin`` and ``voxel`` are stored in ``unit`` ("bohr" or "angstrom") so
    that files round-trip unchanged; use the ``*_ang`` properties for
    Angstrom.
    """

    values: np.ndarray
    voxel: np.ndarray
    origin: np.ndarray = field(default_factory=lambda: np.zeros(3))
    unit: str = "angstrom"
    atoms: tuple = ()  # (Z, charge, (x, y, z)) in ``unit``
    comments: tuple = ("", "")

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.ndim != 3:
            raise ValueError("values must be a 3-D array")
        voxel = np.asarray(self.voxel, dtype=float).reshape(3, 3)
        if abs(np.linalg.det(voxel)) < 1e-14:
            raise ValueError("degenerate cell")
        length_scale(self.unit)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "voxel", voxel)
        object.__setattr__(self, "origin", np.asarray(self.origin, dtype=float).reshape(3))

    @property
    def shape(self):
        return self.values.shape

    @property
    def voxel_ang(self):
        return self.voxel * length_scale(self.unit)

    @property
    def origin_ang(self):
        return self.origin * length_scale(self.unit)

    @property
    def cell_ang(self):
        return self.voxel_ang * np.array(self.shape)[:, None]

    @property
    def voxel_volume(self):
        """Voxel volume in cubic Angstrom."""
        return abs(float(np.linalg.det(self.voxel_ang)))

    def integral(self):
        return float(self.values.sum()) * self.voxel_volume

    def grid_points_ang(self, i=None):
        """Cartesian grid points (Angstrom); one slab when ``i`` is given."""
        n1, n2, n3 = self.shape
        v = self.voxel_ang
        ii = np.arange(n1) if i is None else np.array([i])
        jj, kk = np.arange(n2), np.arange(n3)
        pts = (ii[:, None, None, None] * v[0] + jj[None, :, None, None] * v[1]
               + kk[None, None, :, None] * v[2]) + self.origin_ang
        return pts[0] if i is not None else pts


def _tokens_with_lines(lines, start):
    for lineno, line in enumerate(lines[start:], start=start + 1):
        for tok in line.split():
            yield lineno, tok


def parse_volumetric(text):
    """Parse a Gaussian cube document.

    Layout: two comment lines; ``natoms ox oy oz``; three axis lines
    ``n vx vy vz`` (positive n means bohr, negative means Angstrom); natoms
    atom lines ``Z charge x y z``; then the values with the last axis
    fastest.
    """
    lines = text.splitlines()
    if len(lines) < 6:
        raise ParseError("truncated cube header", len(lines) + 1)

    def numbers(lineno, count, kinds):
        toks = lines[lineno - 1].split()
        if len(toks) < count:
            raise ParseError(f"expected {count} fields", lineno)
        try:
            return [k(t) for k, t in zip(kinds, toks[:count])]
        except ValueError:
            raise ParseError("non-numeric header field", lineno) from None

    natoms, ox, oy, oz = numbers(3, 4, (int, float, float, float))
    counts, axes = [], []
    for k in range(3):
        n, vx, vy, vz = numbers(4 + k, 4, (int, float, float, float))
        if n == 0:
            raise ParseError("zero grid points along an axis", 4 + k)
        counts.append(n)
        axes.append((vx, vy, vz))
    signs = {n > 0 for n in counts}
    if len(signs) != 1:
        raise ParseError("mixed length units on axis lines", 4)
    unit = "bohr" if counts[0] > 0 else "angstrom"
    shape = tuple(abs(n) for n in counts)

    atoms = []
    nat = abs(natoms)
    if len(lines) < 6 + nat:
        raise ParseError("truncated atom block", len(lines) + 1)
    for a in range(nat):
        lineno = 7 + a
        z, q, x, y, w = numbers(lineno, 5, (int, float, float, float, float))
        atoms.append((z, q, (x, y, w)))
    start = 6 + nat
    if natoms < 0:
        # orbital cube: one extra line listing the orbital indices
        start += 1

    expected = shape[0] * shape[1] * shape[2]
    values = np.empty(expected)
    count = 0
    lineno = start
    for lineno, tok in _tokens_with_lines(lines, start):
        if count >= expected:
            raise ParseError(f"more than {expected} values", lineno)
        try:
            values[count] = float(tok)
        except ValueError:
            raise ParseError(f"non-numeric value {tok!r}", lineno) from None
        count += 1
    if count < expected:
        raise ParseError(f"expected {expected} values, found {count}", len(lines) + 1)

    return ScalarField(values.reshape(shape), np.array(axes), np.array([ox, oy, oz]), unit,
                       tuple(atoms), (lines[0], lines[1]))


def read_volumetric(path):
    with open(path) as fh:
        return parse_volumetric(fh.read())


def format_volumetric(f, precision=16):
    """Write ``f`` as a cube document; the default precision round-trips exactly."""
    num = f"{{:.{precision}E}}"
    sign = 1 if f.unit == "bohr" else -1
    out = [f.comments[0], f.comments[1]]
    out.append(f"{len(f.atoms):5d} " + " ".join(num.format(c) for c in f.origin))
    for n, v in zip(f.shape, f.voxel):
        out.append(f"{sign * n:5d} " + " ".join(num.format(c) for c in v))
    for z, q, pos in f.atoms:
        out.append(f"{z:5d} {num.format(q)} " + " ".join(num.format(c) for c in pos))
    n1, n2, n3 = f.shape
    for i in range(n1):
        for j in range(n2):
            row = f.values[i, j]
            for k0 in range(0, n3, 6):
                out.append(" ".join(num.format(x) for x in row[k0:k0 + 6]))
    return "\n".join(out) + "\n"


def write_volumetric(f, path, precision=16):
    with open(path, "w") as fh:
        fh.write(format_volumetric(f, precision))


def min_cell_width(cell):
    """Smallest perpendicular distance between opposite faces of ``cell``."""
    vol = abs(np.linalg.det(cell))
    areas = [np.linalg.norm(np.cross(cell[(k + 1) % 3], cell[(k + 2) % 3])) for k in range(3)]
    return vol / max(areas)


def wrap_vectors(d, cell):
    # minimum image by fractional rounding; exact for orthogonal cells
    inv = np.linalg.inv(cell)
    frac = d @ inv
    frac -= np.round(frac)
    return frac @ cell


def normalized_weights(f, target=1.0, tol=NORMALIZATION_TOL):
    """Per-voxel weights (value times voxel volume) rescaled to sum to ``target``."""
    w = f.values * f.voxel_volume
    total = float(w.sum())
    if not abs(total - target) <= tol * abs(target):
        raise ValueError(f"field integrates to {total:.6g}, expected {target:g} within {tol:.0%}")
    return w * (target / total)


def localization_factor(f, center, radius, unit="angstrom", threads=None):
    """Fraction of a normalized density inside a sphere.

    Voxels count when their grid point lies within ``radius`` of ``center``
    under the minimum-image convention. ``center`` and ``radius`` are in
    ``unit``. The field must integrate to one within 2 %; it is renormalized.
    """
    scale = length_scale(unit)
    c = np.asarray(center, dtype=float) * scale
    r = float(radius) * scale
    if not r > 0:
        raise ValueError("radius must be positive")
    cell = f.cell_ang
    if r > 0.5 * min_cell_width(cell):
        raise ValueError("sphere overlaps its own periodic image")
    w = normalized_weights(f)

    def slab(i):
        d = wrap_vectors(f.grid_points_ang(i) - c, cell)
        inside = np.einsum("jki,jki->jk", d, d) <= r * r
        return float(w[i][inside].sum())

    total = 0.0
    for part in ordered_map(slab, range(f.shape[0]), threads):
        total += part
    return total


@dataclass(frozen=True)
class LevelLocalization:
    band: int
    L: float
    label: str


def classify_localized_levels(levels, threshold=DEFAULT_LOCALIZATION_THRESHOLD):
    """Label each ``(band, L)`` pair as localized (L >= threshold) or delocalized."""
    out = []
    for band, L in levels:
        if not -1e-9 <= L <= 1.0 + NORMALIZATION_TOL:
            raise ValueError(f"localization factor {L} of band {band} outside [0, 1]")
        out.append(LevelLocalization(int(band), float(L), "localized" if L >= threshold else "delocalized"))
    return out


def gaussian_field(shape, cell_length, sigma, center, unit="angstrom"):
    """Normalized isotropic density ~ exp(-r^2/sigma^2) on a cubic periodic grid.

    Lengths are in ``unit``. Used for fixtures and self-checks.
    """
    n = np.asarray(shape)
    voxel = np.diag(cell_length / n)
    f0 = ScalarField(np.zeros(tuple(n)), voxel, unit=unit)
    scale = length_scale(unit)
    d = wrap_vectors(f0.grid_points_ang() - np.asarray(center) * scale, f0.cell_ang)
    r2 = np.einsum("...i,...i->...", d, d)
    vals = np.exp(-r2 / (sigma * scale) ** 2)
    vals /= vals.sum() * f0.voxel_volume
    return ScalarField(vals, voxel, unit=unit)
