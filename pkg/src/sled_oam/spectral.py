"""Two-photon spectral rates for the coherent (pair) and incoherent (quasiparticle) channels.

The photon pair is parametrized by a single detuning d (units of the
zero-temperature gap): one photon at offset +d from the emission center, the
other at -d.  The momentum sum over the quantum well is realized as a
constant-density-of-states integral over the electron kinetic energy, with
the valence-band dispersion tied to the conduction-band one through the mass
ratio (vertical transitions).

Channel construction
--------------------
Both channels share the same four resonance denominators
``d -+ E^n -+ E^p + i*Gamma`` arising from the intermediate states of the
second-order emission.  They differ in how the band propagators weight the
poles and in how the momentum sum is taken:

* coherent channel: every momentum state feeds the *same* final state (the
  condensate is unchanged), so amplitudes add before squaring.  Each band
  contributes its pair (anomalous) propagator, whose negative-frequency pole
  carries weight ``u v (1 - f)`` and whose positive-frequency pole carries
  ``-u v f``.
* incoherent channel: each recombination leaves a distinct quasiparticle
  configuration behind, so squared amplitudes add.  Each band contributes its
  normal propagator with pole weights ``v^2 (1 - f)`` and ``u^2 f``.

The relative scale of the two channels is set by the number of band states
within one quasiparticle coherence patch (``patch_area_um2`` times the 2D
density of states); the coherent amplitude is proportional to that state
count, the incoherent rate to its first power.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bcs
from .constants import dos_2d_per_mev_um2
from .errors import ConvergenceError, DomainError

CONVERGENCE_RTOL = 1e-3


@dataclass(frozen=True)
class KQuadrature:
    """Trapezoidal momentum-integral settings.

    ``nodes`` kinetic-energy samples on [0, mu^n + cutoff_delta0 * delta0];
    ``patch_area_um2`` is the coherence-patch area fixing the state count that
    calibrates the coherent/incoherent ratio.  With ``verify`` set, every rate
    is re-evaluated at doubled node count and a relative shift above 0.1%
    raises ConvergenceError.
    """

    nodes: int = 4096
    cutoff_delta0: float = 40.0
    patch_area_um2: float = 0.1
    verify: bool = False

    def __post_init__(self):
        if self.nodes < 64:
            raise DomainError(f"need at least 64 quadrature nodes, got {self.nodes}")
        if not self.cutoff_delta0 > 0:
            raise DomainError(f"cutoff must be positive, got {self.cutoff_delta0}")
        if not self.patch_area_um2 > 0:
            raise DomainError(f"patch area must be positive, got {self.patch_area_um2}")


@dataclass(frozen=True)
class SpectralGrid:
    """Detuning x reduced-temperature lattice for rate surfaces.

    Detunings are in units of delta0, strictly increasing and symmetric about
    zero; temperatures are T/Tc values strictly inside (0, 1).
    """

    detunings: tuple
    temperatures: tuple
    k_integration: KQuadrature = KQuadrature()

    def __post_init__(self):
        object.__setattr__(self, "detunings", tuple(float(d) for d in self.detunings))
        object.__setattr__(self, "temperatures", tuple(float(t) for t in self.temperatures))
        d = self.detunings
        if len(d) == 0 or len(self.temperatures) == 0:
            raise DomainError("grid must contain at least one detuning and one temperature")
        if any(d[i] >= d[i + 1] for i in range(len(d) - 1)):
            raise DomainError("detunings must be strictly increasing")
        scale = max(abs(d[0]), abs(d[-1]), 1.0)
        if any(abs(d[i] + d[len(d) - 1 - i]) > 1e-9 * scale for i in range(len(d))):
            raise DomainError("detuning grid must be symmetric about zero")
        if any(not 0.0 < t < 1.0 for t in self.temperatures):
            raise DomainError("reduced temperatures must lie strictly inside (0, 1)")


@dataclass(frozen=True)
class CoherenceParams:
    """Coherent-rate enhancement: emitting circumference over dephasing length."""

    enhancement: float

    def __post_init__(self):
        if not self.enhancement >= 1.0:
            raise DomainError(f"enhancement must be >= 1, got {self.enhancement}")


@dataclass(frozen=True)
class RateSurface:
    """Evaluated rate values on a grid, normalized to the coherent-channel maximum."""

    grid: SpectralGrid
    values: np.ndarray  # shape (n_temperatures, n_detunings)
    channel: str
    normalization: float


class _BandTables:
    """Per-temperature arrays shared by every detuning evaluation."""

    def __init__(self, t: float, jp: bcs.JunctionParams, quad: KQuadrature, nodes: int):
        if not 0.0 < t < 1.0:
            raise DomainError(f"reduced temperature must lie in (0, 1), got {t}")
        mu_n = jp.conduction.quasi_fermi_level
        mu_p = jp.valence.quasi_fermi_level
        mass_ratio = jp.conduction.effective_mass / jp.valence.effective_mass
        delta = bcs.gap_at_temperature(jp.sc, t * jp.sc.tc)
        delta_n = delta * jp.conduction.gap_scale
        delta_p = delta * jp.valence.gap_scale
        t_kelvin = t * jp.sc.tc

        eps = np.linspace(0.0, mu_n + quad.cutoff_delta0 * jp.sc.delta0, nodes)
        xi_n = eps - mu_n
        xi_p = mass_ratio * eps - mu_p
        self.eps = eps
        self.e_n = bcs.quasiparticle_energy(xi_n, delta_n)
        self.e_p = bcs.quasiparticle_energy(xi_p, delta_p)
        self.f_n = bcs.fermi_occupation(self.e_n, t_kelvin)
        self.f_p = bcs.fermi_occupation(self.e_p, t_kelvin)
        self.fb_n = bcs.fermi_occupation_complement(self.e_n, t_kelvin)
        self.fb_p = bcs.fermi_occupation_complement(self.e_p, t_kelvin)
        # pair (anomalous) weight u v = delta / 2E per band
        self.uv_n = delta_n / (2.0 * self.e_n)
        self.uv_p = delta_p / (2.0 * self.e_p)
        # normal-propagator weights
        u2_n, v2_n = bcs.coherence_factors(xi_n, delta_n)
        u2_p, v2_p = bcs.coherence_factors(xi_p, delta_p)
        self.u2_n, self.v2_n = u2_n, v2_n
        self.u2_p, self.v2_p = u2_p, v2_p
        self.gamma = jp.broadening
        self.patch_states = dos_2d_per_mev_um2(jp.conduction.effective_mass) * quad.patch_area_um2

    def pair_kernel(self, d_mev: float) -> np.ndarray:
        ig = 1j * self.gamma
        w = self.uv_n * self.uv_p
        return w * (
            self.fb_n * self.fb_p / (d_mev - self.e_n - self.e_p + ig)
            - self.fb_n * self.f_p / (d_mev - self.e_n + self.e_p + ig)
            - self.f_n * self.fb_p / (d_mev + self.e_n - self.e_p + ig)
            + self.f_n * self.f_p / (d_mev + self.e_n + self.e_p + ig)
        )

    def quasiparticle_kernel(self, d_mev: float) -> np.ndarray:
        ig = 1j * self.gamma
        return (
            self.v2_n * self.v2_p * self.fb_n * self.fb_p / (d_mev - self.e_n - self.e_p + ig)
            + self.v2_n * self.u2_p * self.fb_n * self.f_p / (d_mev - self.e_n + self.e_p + ig)
            + self.u2_n * self.v2_p * self.f_n * self.fb_p / (d_mev + self.e_n - self.e_p + ig)
            + self.u2_n * self.u2_p * self.f_n * self.f_p / (d_mev + self.e_n + self.e_p + ig)
        )

    def coherent_rate(self, d_delta0: float, delta0: float) -> float:
        d = d_delta0 * delta0
        kern = self.pair_kernel(d) + self.pair_kernel(-d)
        amp = self.patch_states * np.trapezoid(kern, self.eps)
        return float(abs(amp) ** 2)

    def incoherent_rate(self, d_delta0: float, delta0: float) -> float:
        d = d_delta0 * delta0
        kern = self.quasiparticle_kernel(d) + self.quasiparticle_kernel(-d)
        return float(self.patch_states * np.trapezoid(np.abs(kern) ** 2, self.eps))


def _checked_rate(evaluate, d: float, t: float, jp, quad: KQuadrature, channel: str) -> float:
    value = evaluate(_BandTables(t, jp, quad, quad.nodes), d, jp.sc.delta0)
    if quad.verify:
        refined = evaluate(_BandTables(t, jp, quad, 2 * quad.nodes), d, jp.sc.delta0)
        scale = max(abs(value), abs(refined))
        if scale > 0 and abs(refined - value) > CONVERGENCE_RTOL * scale:
            raise ConvergenceError(
                f"{channel} rate at d={d}, t={t} changed by more than 0.1% when "
                f"doubling quadrature nodes ({value} vs {refined})",
                coarse=value,
                refined=refined,
            )
    return value


def s_cp(d: float, t: float, jp: bcs.JunctionParams, quad: KQuadrature = KQuadrature()) -> float:
    """Coherent-channel spectral rate at detuning d (delta0 units), reduced temperature t."""
    return _checked_rate(
        lambda tab, dd, d0: tab.coherent_rate(dd, d0), d, t, jp, quad, "coherent"
    )


def s_bqp(d: float, t: float, jp: bcs.JunctionParams, quad: KQuadrature = KQuadrature()) -> float:
    """Incoherent-channel spectral rate at detuning d (delta0 units), reduced temperature t."""
    return _checked_rate(
        lambda tab, dd, d0: tab.incoherent_rate(dd, d0), d, t, jp, quad, "incoherent"
    )


def _raw_surface(
    grid: SpectralGrid, jp: bcs.JunctionParams, channel: str, workers: int = 1
) -> np.ndarray:
    quad = grid.k_integration
    method = "coherent_rate" if channel == "cp" else "incoherent_rate"

    def row(t: float) -> np.ndarray:
        tables = _BandTables(t, jp, quad, quad.nodes)
        rate = getattr(tables, method)
        out = np.empty(len(grid.detunings))
        for j, d in enumerate(grid.detunings):
            try:
                out[j] = rate(d, jp.sc.delta0)
            except ConvergenceError as exc:
                raise ConvergenceError(
                    f"{exc} (grid point t={t}, d={d})", exc.coarse, exc.refined
                ) from exc
        if quad.verify:
            fine = _BandTables(t, jp, quad, 2 * quad.nodes)
            rate_fine = getattr(fine, method)
            for j, d in enumerate(grid.detunings):
                refined = rate_fine(d, jp.sc.delta0)
                scale = max(abs(out[j]), abs(refined))
                if scale > 0 and abs(refined - out[j]) > CONVERGENCE_RTOL * scale:
                    raise ConvergenceError(
                        f"{channel} surface not converged at grid point t={t}, d={d}: "
                        f"{out[j]} vs {refined} at doubled nodes",
                        coarse=out[j],
                        refined=refined,
                    )
        return out

    if workers == 1 or len(grid.temperatures) == 1:
        rows = [row(t) for t in grid.temperatures]
    else:
        n = workers if workers > 0 else None
        with ThreadPoolExecutor(max_workers=n) as pool:
            rows = list(pool.map(row, grid.temperatures))
    return np.vstack(rows)


def rate_surface(
    grid: SpectralGrid, jp: bcs.JunctionParams, channel: str, workers: int = 1
) -> RateSurface:
    """Evaluate one channel on the full grid, normalized to the coherent maximum.

    For ``channel="bqp"`` the coherent surface is evaluated on the same grid
    solely to supply the shared normalization.
    """
    if channel not in ("cp", "bqp"):
        raise DomainError(f"channel must be 'cp' or 'bqp', got {channel!r}")
    raw = _raw_surface(grid, jp, channel, workers)
    if channel == "cp":
        norm = float(raw.max())
    else:
        norm = float(_raw_surface(grid, jp, "cp", workers).max())
    return RateSurface(grid=grid, values=raw / norm, channel=channel, normalization=norm)


def rate_surfaces(
    grid: SpectralGrid, jp: bcs.JunctionParams, workers: int = 1
) -> "tuple[RateSurface, RateSurface]":
    """Both channels on one grid without recomputing the coherent reference."""
    raw_cp = _raw_surface(grid, jp, "cp", workers)
    raw_bqp = _raw_surface(grid, jp, "bqp", workers)
    norm = float(raw_cp.max())
    return (
        RateSurface(grid, raw_cp / norm, "cp", norm),
        RateSurface(grid, raw_bqp / norm, "bqp", norm),
    )


def mixing_rates(
    d: float,
    t: float,
    jp: bcs.JunctionParams,
    coh: CoherenceParams,
    quad: KQuadrature = KQuadrature(),
) -> "tuple[float, float]":
    """Channel weights entering the density-matrix mixture at one detuning.

    The coherent rate is multiplied by the circumference-to-dephasing-length
    enhancement; the incoherent rate is not.
    """
    return coh.enhancement * s_cp(d, t, jp, quad), s_bqp(d, t, jp, quad)
