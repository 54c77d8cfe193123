"""Physical constants in the working unit system.

Units and conventions
---------------------
- Energies in meV, temperatures in K, times in fs, lengths in um.
- Areal carrier densities are quoted in cm^-2 at the API boundary.
- CODATA 2018 values; k_B and the elementary charge are exact by definition.
"""

import math

# Boltzmann constant, meV/K (1.380649e-23 J/K, exact).
KB_MEV_PER_K = 0.08617333262145178

# Reduced Planck constant.
HBAR_JS = 1.054571817e-34
HBAR_MEV_FS = 658.2119565476075

# Electron rest mass, kg.
ELECTRON_MASS_KG = 9.1093837015e-31

# One meV in joules (elementary charge 1.602176634e-19 C, exact).
MEV_J = 1.602176634e-22


def fermi_level_2d_mev(density_cm2: float, mass: float) -> float:
    """Quasi Fermi level of a spin-degenerate 2D band, meV above the band edge.

    mu = pi hbar^2 n / (m m_e) for areal density n and effective-mass multiple m.
    """
    n_m2 = density_cm2 * 1e4
    return math.pi * HBAR_JS**2 * n_m2 / (mass * ELECTRON_MASS_KG) / MEV_J


def dos_2d_per_mev_um2(mass: float) -> float:
    """Single-spin 2D density of states m m_e / (2 pi hbar^2), in 1/(meV um^2)."""
    return mass * ELECTRON_MASS_KG * MEV_J * 1e-12 / (2.0 * math.pi * HBAR_JS**2)
