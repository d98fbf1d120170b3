"""Physical constants (CODATA 2018) and unit conversions used across the package.

All values are kept in one place so that every module converts units the same
way. SI-exact constants are written out in full.
"""

import math

# exact SI definitions
PLANCK_H = 6.62607015e-34  # J s
ELEMENTARY_CHARGE = 1.602176634e-19  # C
SPEED_OF_LIGHT = 299792458.0  # m / s

# CODATA 2018
HBAR_EV_S = 6.582119569e-16  # eV s
AMU_KG = 1.66053906660e-27  # kg
VACUUM_PERMITTIVITY = 8.8541878128e-12  # F / m
MU0_OVER_4PI = 1.00000000055e-7  # N / A^2
BOHR_MAGNETON = 9.2740100783e-24  # J / T
ELECTRON_G = 2.00231930436256  # |g_e|
BOHR_RADIUS_ANG = 0.529177210903  # Angstrom

EV_TO_J = ELEMENTARY_CHARGE
ANG_TO_M = 1e-10
BOHR_TO_ANG = BOHR_RADIUS_ANG
DEBYE_TO_CM = 3.33564e-30  # C m

# hc in eV nm, used for photon energy <-> vacuum wavelength
HC_EV_NM = 1239.84198

# (mu0 / 4 pi) (g_e mu_B)^2 / h in MHz m^3
DIPOLAR_PREFACTOR_MHZ_M3 = MU0_OVER_4PI * (ELECTRON_G * BOHR_MAGNETON) ** 2 / PLANCK_H / 1e6

TWO_PI_CUBED = (2.0 * math.pi) ** 3
