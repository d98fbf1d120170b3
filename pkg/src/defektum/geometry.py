"""Defect structures: extended-XYZ parsing, neighbor-shell distances, local
point-group detection and mass-weighted displacements between geometries.

Lengths are in Angstrom and masses in amu throughout. The marker species
``X`` stands for a vacancy site; it has zero mass and is ignored by
mass-weighted quantities.
"""

import itertools
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from ._elements import ATOMIC_MASSES, ISOTOPE_MASSES
from .exceptions import ParseError

VACANCY = "X"

# candidate labels, highest order first; also the detection tie-break order
POINT_GROUPS = ("Td", "D2d", "C3v", "C2v", "C1h", "C1")

DEFAULT_SYMMETRY_TOL = 1e-2

_SYMBOL_RE = re.compile(r"^(\d+)?([A-Z][a-z]?)$")
_LATTICE_RE = re.compile(r'Lattice\s*=\s*"([^"]*)"')


@dataclass(frozen=True, eq=False)
class Structure:
    """Atoms with optional periodic lattice.

    Attributes:
        species: chemical symbols, ``"X"`` for a vacancy marker.
        positions: (N, 3) Cartesian coordinates in Angstrom.
        masses: (N,) masses in amu.
        isotopes: mass numbers, ``None`` where no isotope was given.
        lattice: (3, 3) lattice vectors as rows, or ``None`` for a cluster.
    """

    species: tuple
    positions: np.ndarray
    masses: np.ndarray
    isotopes: tuple = ()
    lattice: Optional[np.ndarray] = None

    def __post_init__(self):
        pos = np.asarray(self.positions, dtype=float).reshape(-1, 3)
        masses = np.asarray(self.masses, dtype=float).reshape(-1)
        object.__setattr__(self, "positions", pos)
        object.__setattr__(self, "masses", masses)
        object.__setattr__(self, "species", tuple(self.species))
        if not self.isotopes:
            object.__setattr__(self, "isotopes", (None,) * len(self.species))
        if not (len(self.species) == len(pos) == len(masses) == len(self.isotopes)):
            raise ValueError("species, positions, masses and isotopes differ in length")
        if not np.all(np.isfinite(pos)):
            raise ValueError("positions must be finite")
        for sym, m in zip(self.species, masses):
            if sym == VACANCY:
                if m != 0.0:
                    raise ValueError("vacancy marker must have zero mass")
            elif not m > 0.0:
                raise ValueError(f"mass of {sym} must be positive")
        if self.lattice is not None:
            lat = np.asarray(self.lattice, dtype=float).reshape(3, 3)
            if abs(np.linalg.det(lat)) < 1e-12:
                raise ValueError("lattice vectors are linearly dependent")
            object.__setattr__(self, "lattice", lat)

    def __len__(self):
        return len(self.species)

    def indices(self, symbol):
        return [i for i, s in enumerate(self.species) if s == symbol]

    def translated(self, shift):
        return Structure(self.species, self.positions + np.asarray(shift, dtype=float),
                         self.masses, self.isotopes, self.lattice)

    def rotated(self, rotation, about=(0.0, 0.0, 0.0)):
        rot = np.asarray(rotation, dtype=float)
        about = np.asarray(about, dtype=float)
        pos = (self.positions - about) @ rot.T + about
        lat = None if self.lattice is None else self.lattice @ rot.T
        return Structure(self.species, pos, self.masses, self.isotopes, lat)


@dataclass(frozen=True)
class ModeDisplacement:
    """Mass-weighted displacement Q (sqrt(amu) Angstrom) and its per-atom parts."""

    Q: float
    contributions: np.ndarray = field(repr=False)


def _default_mass(symbol, isotope, lineno):
    if isotope is not None:
        try:
            return ISOTOPE_MASSES[(symbol, isotope)]
        except KeyError:
            raise ParseError(f"unknown isotope {isotope}{symbol}", lineno) from None
    try:
        return ATOMIC_MASSES[symbol]
    except KeyError:
        raise ParseError(f"unknown species {symbol!r}", lineno) from None


def parse_structure(text):
    """Parse an extended-XYZ document into a :class:`Structure`.

    Line 1 holds the atom count, line 2 a key/value comment that may contain
    ``Lattice="ax ay az bx by bz cx cy cz"``. Each following line is
    ``symbol x y z [mass]``; the symbol may carry a mass-number prefix such
    as ``29Si``.
    """
    lines = text.splitlines()
    while lines and not lines[-1].strip():
        lines.pop()
    if not lines:
        raise ParseError("empty document", 1)
    try:
        natoms = int(lines[0].split()[0])
    except (IndexError, ValueError):
        raise ParseError("first line must be the atom count", 1) from None
    if natoms < 0:
        raise ParseError("negative atom count", 1)
    comment = lines[1] if len(lines) > 1 else ""
    body = lines[2:]
    if natoms == 0 and not body:
        raise ParseError("no atoms", 1)

    lattice = None
    m = _LATTICE_RE.search(comment)
    if m:
        try:
            vals = [float(v) for v in m.group(1).split()]
        except ValueError:
            raise ParseError("non-numeric Lattice entry", 2) from None
        if len(vals) != 9:
            raise ParseError("Lattice needs 9 numbers", 2)
        lattice = np.array(vals).reshape(3, 3)
        if abs(np.linalg.det(lattice)) < 1e-12:
            raise ParseError("lattice vectors are linearly dependent", 2)

    if len(body) > natoms:
        # reported at the end of the declared block, where the surplus begins
        raise ParseError(f"header declares {natoms} atoms but atom lines continue past this line", natoms + 2)
    if len(body) < natoms:
        raise ParseError(f"header declares {natoms} atoms, found {len(body)}", len(lines) + 1)

    species, isotopes, positions, masses = [], [], [], []
    for offset, line in enumerate(body):
        lineno = offset + 3
        tokens = line.split()
        if len(tokens) not in (4, 5):
            raise ParseError("expected 'symbol x y z [mass]'", lineno)
        sm = _SYMBOL_RE.match(tokens[0])
        if sm is None:
            raise ParseError(f"bad species token {tokens[0]!r}", lineno)
        isotope = int(sm.group(1)) if sm.group(1) else None
        symbol = sm.group(2)
        try:
            xyz = [float(t) for t in tokens[1:4]]
            mass = float(tokens[4]) if len(tokens) == 5 else None
        except ValueError:
            raise ParseError("non-numeric coordinate or mass", lineno) from None
        if not np.all(np.isfinite(xyz)):
            raise ParseError("non-finite coordinate", lineno)
        if symbol == VACANCY:
            mass = 0.0
        elif mass is None:
            mass = _default_mass(symbol, isotope, lineno)
        elif symbol not in ATOMIC_MASSES:
            raise ParseError(f"unknown species {symbol!r}", lineno)
        elif not mass > 0:
            raise ParseError("mass must be positive", lineno)
        species.append(symbol)
        isotopes.append(isotope)
        positions.append(xyz)
        masses.append(mass)

    return Structure(species, np.array(positions), np.array(masses), tuple(isotopes), lattice)


def read_structure(path):
    with open(path) as fh:
        return parse_structure(fh.read())


def format_structure(s, comment=""):
    """Inverse of :func:`parse_structure`; masses are always written out."""
    header = comment
    if s.lattice is not None:
        lat = " ".join(f"{v:.10f}" for v in s.lattice.reshape(-1))
        header = f'Lattice="{lat}" {comment}'.strip()
    out = [str(len(s)), header]
    for sym, iso, (x, y, z), m in zip(s.species, s.isotopes, s.positions, s.masses):
        tag = f"{iso}{sym}" if iso is not None else sym
        out.append(f"{tag} {x:.10f} {y:.10f} {z:.10f} {m:.8f}")
    return "\n".join(out) + "\n"


def minimum_image(vectors, lattice):
    """Shortest periodic images of difference vectors (rows) under ``lattice``.

    Fractional rounding followed by a search over the 27 neighboring images,
    which is exact for the shortest vector in all but pathologically skewed
    cells.
    """
    vectors = np.asarray(vectors, dtype=float)
    if lattice is None:
        return vectors
    flat = vectors.reshape(-1, 3)
    inv = np.linalg.inv(lattice)
    frac = flat @ inv
    frac -= np.round(frac)
    shifts = np.array(list(itertools.product((-1, 0, 1), repeat=3)), dtype=float)
    cands = (frac[:, None, :] + shifts[None, :, :]) @ lattice
    best = np.argmin(np.einsum("nki,nki->nk", cands, cands), axis=1)
    return cands[np.arange(len(flat)), best].reshape(vectors.shape)


def shell_distances(s, species_a, species_b):
    """All unordered pair distances between two species sets, sorted ascending.

    For ``species_a == species_b`` each pair within the set is counted once.
    Periodic structures use the minimum-image convention.
    """
    ia, ib = s.indices(species_a), s.indices(species_b)
    if not ia:
        raise ValueError(f"species {species_a!r} not present")
    if not ib:
        raise ValueError(f"species {species_b!r} not present")
    if species_a == species_b:
        pairs = list(itertools.combinations(ia, 2))
    else:
        pairs = [(i, j) for i in ia for j in ib]
    if not pairs:
        return []
    i, j = np.array(pairs).T
    d = minimum_image(s.positions[j] - s.positions[i], s.lattice)
    return sorted(np.linalg.norm(d, axis=1).tolist())


# ---------------------------------------------------------------------------
# point groups


def _rotation(axis, angle):
    axis = axis / np.linalg.norm(axis)
    x, y, z = axis
    k = np.array([[0, -z, y], [z, 0, -x], [-y, x, 0]])
    return np.eye(3) + np.sin(angle) * k + (1 - np.cos(angle)) * (k @ k)


def _reflection(normal):
    n = normal / np.linalg.norm(normal)
    return np.eye(3) - 2.0 * np.outer(n, n)


def _candidate_axes(pos, tol):
    raw = [np.eye(3)[k] for k in range(3)]
    vecs = [p for p in pos if np.linalg.norm(p) > tol]
    raw.extend(vecs)
    for a, b in itertools.combinations(pos, 2):
        raw.extend((a + b, a - b, np.cross(a, b)))
    axes = []
    for v in raw:
        norm = np.linalg.norm(v)
        if norm <= tol:
            continue
        u = v / norm
        if all(abs(u @ w) < 1.0 - 1e-6 for w in axes):
            axes.append(u)
    return axes


class _SymmetryProbe:
    def __init__(self, pos, species, tol):
        self.pos = pos
        self.tol = tol
        labels = sorted(set(species))
        self.groups = [np.array([i for i, s in enumerate(species) if s == lab]) for lab in labels]

    def preserves(self, op):
        moved = self.pos @ op.T
        for idx in self.groups:
            ref = self.pos[idx]
            d = np.linalg.norm(moved[idx][:, None, :] - ref[None, :, :], axis=2)
            if np.any(d.min(axis=1) > self.tol):
                return False
            # a symmetry operation permutes equivalent atoms
            if len(set(d.argmin(axis=1).tolist())) != len(idx):
                return False
        return True


def detect_point_group(cluster, center=None, tol=DEFAULT_SYMMETRY_TOL):
    """Label the local symmetry of ``cluster`` about ``center``.

    Only the descent chain Td > D2d > C3v > C2v > C1h > C1 is considered. The
    highest-order label whose generators all map the cluster onto itself
    (species-respecting, within ``tol`` Angstrom) is returned; C1 is the
    fallback.
    """
    if len(cluster) == 0:
        raise ValueError("empty cluster")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if center is None:
        center = np.zeros(3)
    pos = minimum_image(cluster.positions - np.asarray(center, dtype=float), cluster.lattice)
    probe = _SymmetryProbe(pos, cluster.species, tol)
    axes = _candidate_axes(pos, tol)

    c3 = [n for n in axes if probe.preserves(_rotation(n, 2 * np.pi / 3))]
    c2 = [n for n in axes if probe.preserves(_rotation(n, np.pi))]
    s4 = [n for n in axes if probe.preserves(_reflection(n) @ _rotation(n, np.pi / 2))]
    mirrors = [n for n in axes if probe.preserves(_reflection(n))]

    # axis relations are checked loosely; ``preserves`` already did the strict test
    eps = 0.05
    for a, b in itertools.combinations(c3, 2):
        if abs(abs(a @ b) - 1.0 / 3.0) < eps:
            if any(abs(m @ a) < eps and abs(m @ b) < eps for m in mirrors):
                return "Td"
    for z in s4:
        if any(abs(n @ z) < eps for n in c2):
            return "D2d"
    for a in c3:
        if any(abs(m @ a) < eps for m in mirrors):
            return "C3v"
    for a in c2:
        if any(abs(m @ a) < eps for m in mirrors):
            return "C2v"
    if mirrors:
        return "C1h"
    return "C1"


# ---------------------------------------------------------------------------


def effective_mode(ground, excited):
    """Mass-weighted distance Q = sqrt(sum_i m_i |R_i^e - R_i^g|^2) between two geometries."""
    if len(ground) != len(excited) or ground.species != excited.species:
        raise ValueError("ground and excited structures must list the same atoms in the same order")
    delta = excited.positions - ground.positions
    lattice = ground.lattice if ground.lattice is not None else excited.lattice
    delta = minimum_image(delta, lattice)
    contributions = np.sqrt(ground.masses) * np.linalg.norm(delta, axis=1)
    return ModeDisplacement(float(np.sqrt(np.sum(contributions**2))), contributions)


def first_shell(s, symbol, center, shell_tol=0.3):
    """Indices of ``symbol`` atoms within ``shell_tol`` of the nearest distance to ``center``."""
    idx = s.indices(symbol)
    if not idx:
        raise ValueError(f"species {symbol!r} not present")
    d = np.linalg.norm(minimum_image(s.positions[idx] - np.asarray(center), s.lattice), axis=1)
    return [i for i, di in zip(idx, d) if di <= d.min() + shell_tol]


def subcluster(s, indices: Sequence[int]):
    idx = list(indices)
    return Structure([s.species[i] for i in idx], s.positions[idx], s.masses[idx],
                     tuple(s.isotopes[i] for i in idx), s.lattice)
