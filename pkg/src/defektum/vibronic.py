"""Single effective-mode Franck-Condon analysis.

The effective phonon energy is recovered from the relaxation energy and the
mass-weighted mode length through the harmonic relation E_FC = Omega^2 Q^2 / 2.
"""

import math
from dataclasses import dataclass

from .constants import AMU_KG, ANG_TO_M, EV_TO_J, HBAR_EV_S


@dataclass(frozen=True)
class VibronicSummary:
    E_FC: float  # eV
    Q: float  # sqrt(amu) Angstrom
    hbar_omega: float  # eV
    S: float
    DWF: float  # fraction, not percent

    @property
    def dwf_percent(self):
        return 100.0 * self.DWF


def franck_condon_energy(E_zpl, E_vertical_emission):
    """Relaxation energy after vertical emission, ``E_zpl - E_vertical_emission``."""
    e_fc = E_zpl - E_vertical_emission
    if e_fc < 0:
        raise ValueError("vertical emission energy lies above the ZPL")
    return e_fc


def effective_frequency(E_FC, Q):
    """Effective phonon energy hbar*Omega in eV for relaxation energy ``E_FC`` (eV) along mode length ``Q``."""
    if not E_FC > 0 or not Q > 0:
        raise ValueError("E_FC and Q must both be positive")
    q_si = Q * math.sqrt(AMU_KG) * ANG_TO_M
    omega = math.sqrt(2.0 * E_FC * EV_TO_J) / q_si
    return HBAR_EV_S * omega


def huang_rhys(E_FC, hbar_omega):
    if not hbar_omega > 0:
        raise ValueError("phonon energy must be positive")
    if E_FC < 0:
        raise ValueError("E_FC must be nonnegative")
    return E_FC / hbar_omega


def debye_waller(S):
    if S < 0:
        raise ValueError("Huang-Rhys factor must be nonnegative")
    return math.exp(-S)


def summarize(E_FC, Q):
    """Run the full chain (E_FC, Q) -> (hbar*Omega, S, DWF)."""
    hw = effective_frequency(E_FC, Q)
    S = huang_rhys(E_FC, hw)
    return VibronicSummary(E_FC, Q, hw, S, debye_waller(S))
