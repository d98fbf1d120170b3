"""Optical observables: radiative lifetime, exciton binding, ZPL calibration,
telecom-band labels and linear strain/stress couplings."""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .constants import (
    DEBYE_TO_CM, EV_TO_J, HC_EV_NM, PLANCK_H, SPEED_OF_LIGHT, TWO_PI_CUBED,
    VACUUM_PERMITTIVITY,
)

DEFAULT_REFRACTIVE_INDEX = 3.5
DEFAULT_BULK_MODULUS_GPA = 97.8

# ITU-T spectral bands, [lo, hi) in nm
TELECOM_BANDS = (
    ("O", 1260.0, 1360.0),
    ("E", 1360.0, 1460.0),
    ("S", 1460.0, 1530.0),
    ("C", 1530.0, 1565.0),
    ("L", 1565.0, 1625.0),
    ("U", 1625.0, 1675.0),
)

STRAIN_OBSERVABLES = ("zpl_ev", "zfs_mhz")


def debye_to_cm(mu_debye):
    return np.asarray(mu_debye, dtype=float) * DEBYE_TO_CM


def _dipole_norm(mu):
    mu = np.asarray(mu, dtype=float)
    if not np.all(np.isfinite(mu)):
        raise ValueError("transition dipole must be finite")
    return float(np.linalg.norm(mu)) if mu.ndim else abs(float(mu))


def _lifetime_constant(E_zpl, n_r):
    # tau * |mu|^2, in s C^2 m^2
    if not E_zpl > 0:
        raise ValueError("ZPL energy must be positive")
    if not n_r > 0:
        raise ValueError("refractive index must be positive")
    E = E_zpl * EV_TO_J
    return 3.0 * VACUUM_PERMITTIVITY * PLANCK_H**4 * SPEED_OF_LIGHT**3 / (2.0 * TWO_PI_CUBED * n_r * E**3)


def radiative_lifetime(mu, E_zpl, n_r=DEFAULT_REFRACTIVE_INDEX):
    """Spontaneous-emission lifetime in seconds.

    Args:
        mu: transition dipole in C m, a 3-vector or its magnitude.
        E_zpl: transition energy in eV.
        n_r: refractive index of the host.
    """
    norm = _dipole_norm(mu)
    if norm == 0.0:
        raise ValueError("dark transition: zero transition dipole")
    return _lifetime_constant(E_zpl, n_r) / norm**2


def dipole_from_lifetime(tau, E_zpl, n_r=DEFAULT_REFRACTIVE_INDEX):
    """Transition dipole magnitude (C m) that gives radiative lifetime ``tau``."""
    if not tau > 0:
        raise ValueError("lifetime must be positive")
    return math.sqrt(_lifetime_constant(E_zpl, n_r) / tau)


@dataclass(frozen=True)
class ExcitonBinding:
    energy: float  # eV
    bound: bool


def exciton_binding(E_vertical_excitation, homo_lumo_gap):
    """Binding energy as the gap minus the vertical excitation; negative means unbound."""
    eb = homo_lumo_gap - E_vertical_excitation
    return ExcitonBinding(eb, eb >= 0.0)


def calibrate_zpl(calc_ref, exp_ref, calc_targets):
    """Shift every calculated ZPL by ``exp_ref - calc_ref``."""
    shift = exp_ref - calc_ref
    return [t + shift for t in calc_targets]


@dataclass(frozen=True)
class BandLabel:
    band: Optional[str]
    wavelength_nm: float
    # bands touched when the energy is uncertain by +-span_ev
    span: tuple = ()
    span_ev: float = 0.0


def _band_of(wavelength):
    for name, lo, hi in TELECOM_BANDS:
        if lo <= wavelength < hi:
            return name
    return None


def telecom_band(E, span_ev=0.1):
    """Vacuum wavelength of a photon of energy ``E`` (eV) and its ITU band.

    ``span`` lists every band overlapped by the interval E +- ``span_ev``.
    """
    if not E > 0:
        raise ValueError("photon energy must be positive")
    wl = HC_EV_NM / E
    span = ()
    if span_ev > 0:
        hi_e, lo_e = E + span_ev, max(E - span_ev, 1e-12)
        wl_lo, wl_hi = HC_EV_NM / hi_e, HC_EV_NM / lo_e
        span = tuple(name for name, lo, hi in TELECOM_BANDS if wl_lo < hi and wl_hi >= lo)
    return BandLabel(_band_of(wl), wl, span, span_ev)


@dataclass(frozen=True)
class StrainSeries:
    strains: np.ndarray
    values: np.ndarray
    observable: str = "zpl_ev"

    def __post_init__(self):
        s = np.asarray(self.strains, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if s.shape != v.shape or s.ndim != 1:
            raise ValueError("strains and values must be 1-D and of equal length")
        if self.observable not in STRAIN_OBSERVABLES:
            raise ValueError(f"observable must be one of {STRAIN_OBSERVABLES}")
        if len(np.unique(s)) < 2:
            raise ValueError("need at least two distinct strain values")
        object.__setattr__(self, "strains", s)
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class CouplingFit:
    slope: float
    slope_stderr: float
    intercept: float
    observable: str = "zpl_ev"


def fit_linear_response(series):
    """Ordinary least-squares line through (strain, value).

    The slope uncertainty comes from the residual variance; it is zero for
    two points or an exact fit.
    """
    x, y = series.strains, series.values
    xc = x - x.mean()
    sxx = float(xc @ xc)
    slope = float(xc @ (y - y.mean())) / sxx
    intercept = float(y.mean() - slope * x.mean())
    n = len(x)
    stderr = 0.0
    if n > 2:
        resid = y - (intercept + slope * x)
        stderr = math.sqrt(float(resid @ resid) / (n - 2) / sxx)
    return CouplingFit(slope, stderr, intercept, series.observable)


def stress_coupling(strain_slope, bulk_modulus=DEFAULT_BULK_MODULUS_GPA):
    """Convert a coupling per unit strain into a coupling per GPa."""
    if not bulk_modulus > 0:
        raise ValueError("bulk modulus must be positive")
    return strain_slope / bulk_modulus
