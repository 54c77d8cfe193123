"""BCS scalar primitives for the junction bands.

Implements the temperature-dependent induced gap, quasiparticle dispersions,
coherence factors and Fermi occupations that every spectral formula builds on.

Units and conventions
---------------------
- Energies in meV, temperatures in K, times in fs.
- ``delta0`` is the zero-temperature induced gap; the same gap magnitude is
  used in the conduction and valence bands unless overridden per band.
- Quasi Fermi levels are measured from the respective band edge and are
  positive for degenerate carrier populations.

All functions accept numpy arrays where that is meaningful and are pure;
they are safe to call concurrently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .constants import HBAR_MEV_FS, KB_MEV_PER_K, fermi_level_2d_mev
from .errors import DomainError


@dataclass(frozen=True)
class SuperconductorParams:
    """Induced superconductor: zero-temperature gap (meV) and critical temperature (K)."""

    delta0: float
    tc: float

    def __post_init__(self):
        if not self.delta0 > 0:
            raise DomainError(f"delta0 must be positive, got {self.delta0}")
        if not self.tc > 0:
            raise DomainError(f"tc must be positive, got {self.tc}")


@dataclass(frozen=True)
class BandParams:
    """One semiconductor band: effective mass (m_e multiples) and quasi Fermi level (meV).

    ``gap_scale`` multiplies the shared induced gap in this band; the default
    of 1 keeps both bands at the same gap, nonunity values support
    sensitivity studies.
    """

    effective_mass: float
    quasi_fermi_level: float
    label: str = "conduction"
    gap_scale: float = 1.0

    def __post_init__(self):
        if not self.effective_mass > 0:
            raise DomainError(f"effective_mass must be positive, got {self.effective_mass}")
        if not self.quasi_fermi_level > 0:
            raise DomainError(
                f"quasi_fermi_level must be positive, got {self.quasi_fermi_level}"
            )
        if self.label not in ("conduction", "valence"):
            raise DomainError(f"label must be 'conduction' or 'valence', got {self.label!r}")
        if not self.gap_scale > 0:
            raise DomainError(f"gap_scale must be positive, got {self.gap_scale}")


@dataclass(frozen=True)
class JunctionParams:
    """Full electronic description of the emitting p-n junction.

    ``offset_energy`` is the energy separation of the two quasi Fermi levels,
    i.e. the center of the two-photon emission spectrum; ``dephasing_time``
    sets the resonance broadening ``HBAR_MEV_FS / dephasing_time``.
    """

    sc: SuperconductorParams
    conduction: BandParams
    valence: BandParams
    dephasing_time: float
    offset_energy: float

    def __post_init__(self):
        if not self.dephasing_time > 0 or not math.isfinite(self.dephasing_time):
            raise DomainError(
                f"dephasing_time must be positive and finite, got {self.dephasing_time}"
            )
        if not self.offset_energy > 0:
            raise DomainError(f"offset_energy must be positive, got {self.offset_energy}")

    @classmethod
    def from_band_gap(
        cls,
        sc: SuperconductorParams,
        conduction: BandParams,
        valence: BandParams,
        band_gap: float,
        dephasing_time: float,
    ) -> "JunctionParams":
        """Build junction parameters with the offset energy derived from the band gap.

        The offset is the band gap plus both quasi Fermi levels.
        """
        offset = band_gap + abs(conduction.quasi_fermi_level) + abs(valence.quasi_fermi_level)
        return cls(sc, conduction, valence, dephasing_time, offset)

    @property
    def broadening(self) -> float:
        """Resonance broadening energy Gamma = hbar / dephasing_time, meV."""
        return HBAR_MEV_FS / self.dephasing_time


def gap_at_temperature(sc: SuperconductorParams, t: float) -> float:
    """Temperature-dependent gap delta0 * tanh(1.74 sqrt(Tc/T - 1)).

    Parameters
    ----------
    sc
        Superconductor parameters (delta0, Tc).
    t
        Temperature in kelvin, t >= 0.

    Returns
    -------
    float
        Gap in meV: delta0 at t = 0, zero at and above Tc.
    """
    if t < 0:
        raise DomainError(f"temperature must be non-negative, got {t}")
    if t == 0:
        return sc.delta0
    if t >= sc.tc:
        return 0.0
    return sc.delta0 * math.tanh(1.74 * math.sqrt(sc.tc / t - 1.0))


def quasiparticle_energy(xi, delta):
    """Bogoliubov quasiparticle energy sqrt(delta^2 + xi^2), meV.

    Accepts scalars or arrays; ``delta`` must be non-negative.
    """
    if np.any(np.asarray(delta) < 0):
        raise DomainError("delta must be non-negative")
    return np.hypot(xi, delta)


def coherence_factors(xi, delta):
    """BCS coherence factors (u^2, v^2) = ([1 +- xi/E]/2).

    Parameters
    ----------
    xi
        Kinetic energy measured from the quasi Fermi level, meV.
    delta
        Gap magnitude, meV, >= 0.

    Returns
    -------
    (u_sq, v_sq)
        Particle and hole weights; u_sq + v_sq = 1.
    """
    e = quasiparticle_energy(xi, delta)
    if np.any(np.asarray(e) == 0):
        raise DomainError("coherence factors are singular at xi = delta = 0")
    ratio = np.asarray(xi) / e
    u_sq = 0.5 * (1.0 + ratio)
    v_sq = 0.5 * (1.0 - ratio)
    if np.isscalar(xi) or np.ndim(xi) == 0:
        return float(u_sq), float(v_sq)
    return u_sq, v_sq


def fermi_occupation(e, t: float):
    """Fermi-Dirac occupation 1/(1 + exp(e / k_B t)) for energy in meV, t in K.

    At t = 0 the step limit is returned: 1 below, 1/2 at, 0 above zero energy.
    """
    if t < 0:
        raise DomainError(f"temperature must be non-negative, got {t}")
    e = np.asarray(e, dtype=float)
    if t == 0:
        occ = np.where(e < 0, 1.0, np.where(e == 0, 0.5, 0.0))
    else:
        with np.errstate(over="ignore"):
            occ = 1.0 / (1.0 + np.exp(e / (KB_MEV_PER_K * t)))
    if occ.ndim == 0:
        return float(occ)
    return occ


def fermi_occupation_complement(e, t: float):
    """1 - f(e, t), evaluated as f(-e, t) so f + fbar = 1 holds exactly."""
    return fermi_occupation(np.negative(e), t)


def fermi_level_from_density(density_cm2: float, mass: float) -> float:
    """Quasi Fermi level of a spin-degenerate 2D band, meV.

    mu = pi hbar^2 n / (m m_e), with n the areal density in cm^-2 and m the
    effective-mass multiple.
    """
    if not density_cm2 > 0:
        raise DomainError(f"density must be positive, got {density_cm2}")
    if not mass > 0:
        raise DomainError(f"mass must be positive, got {mass}")
    return fermi_level_2d_mev(density_cm2, mass)


def gaas_nb_junction(
    delta0: float = 1.4,
    tc: float = 9.2,
    electron_mass: float = 0.067,
    hole_mass: float = 0.45,
    electron_density_cm2: float = 1e12,
    hole_density_cm2: float = 1e12,
    band_gap: float = 1519.0,
    dephasing_time: float = 1000.0,
    gap_scale_conduction: float = 1.0,
    gap_scale_valence: float = 1.0,
) -> JunctionParams:
    """Illustrative GaAs quantum well with Nb contacts.

    Default gap and critical temperature correspond to Nb-induced
    superconductivity; carrier densities of 1e12 cm^-2 per band give quasi
    Fermi levels of roughly 35.7 meV (electrons) and 5.3 meV (heavy holes).
    Every number is overridable through the run configuration.
    """
    conduction = BandParams(
        effective_mass=electron_mass,
        quasi_fermi_level=fermi_level_from_density(electron_density_cm2, electron_mass),
        label="conduction",
        gap_scale=gap_scale_conduction,
    )
    valence = BandParams(
        effective_mass=hole_mass,
        quasi_fermi_level=fermi_level_from_density(hole_density_cm2, hole_mass),
        label="valence",
        gap_scale=gap_scale_valence,
    )
    sc = SuperconductorParams(delta0=delta0, tc=tc)
    return JunctionParams.from_band_gap(sc, conduction, valence, band_gap, dephasing_time)


MATERIAL_PRESETS = {
    "GaAs-Nb": gaas_nb_junction,
}
