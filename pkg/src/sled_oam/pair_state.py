"""Photon-pair OAM density matrices.

A pair state lives on an ordered basis of (l1, l2) OAM labels (radial index
fixed at zero).  The coherent channel populates only pairs whose total OAM
equals the supercurrent winding number; the incoherent channel contributes a
diagonal background.  Mixtures are weighted by the spectral rates evaluated
at a fixed detuning.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

import numpy as np

from . import spectral
from .bcs import JunctionParams
from .errors import ContractError, DegenerateMixtureError, DomainError, EmptySectorError
from .modes import AnnulusGeometry, ModeIndex, kappa

HERMITICITY_TOL = 1e-12


@dataclass(frozen=True)
class WindingNumber:
    """Number of 2*pi phase turns of the order parameter around the ring."""

    ls: int


@dataclass(frozen=True)
class QubitState:
    """Complex amplitudes of the clockwise/counterclockwise current superposition.

    The clockwise component maps to the +ls total-OAM sector, the
    counterclockwise one to -ls.
    """

    a: complex
    b: complex

    def __post_init__(self):
        norm = abs(self.a) ** 2 + abs(self.b) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"|a|^2 + |b|^2 must be 1, got {norm}")

    @classmethod
    def from_polar(cls, mag_a, phase_a, mag_b, phase_b) -> "QubitState":
        return cls(
            a=mag_a * complex(np.cos(phase_a), np.sin(phase_a)),
            b=mag_b * complex(np.cos(phase_b), np.sin(phase_b)),
        )


class OamPairBasis:
    """Lexicographically ordered set of (l1, l2) pair labels with |l| <= l_max."""

    def __init__(self, pairs, l_max: int):
        pairs = [(int(l1), int(l2)) for l1, l2 in pairs]
        if len(set(pairs)) != len(pairs):
            raise DomainError("pair basis contains duplicates")
        if any(abs(l1) > l_max or abs(l2) > l_max for l1, l2 in pairs):
            raise DomainError(f"pair label outside |l| <= {l_max}")
        if not pairs:
            raise DomainError("pair basis is empty")
        self.pairs = tuple(sorted(pairs))
        self.l_max = int(l_max)
        self._index = {p: i for i, p in enumerate(self.pairs)}

    @classmethod
    def full(cls, l_max: int) -> "OamPairBasis":
        values = range(-l_max, l_max + 1)
        return cls(list(product(values, values)), l_max)

    @classmethod
    def from_l_values(cls, l_values) -> "OamPairBasis":
        values = sorted(set(int(v) for v in l_values))
        l_max = max(abs(v) for v in values)
        return cls(list(product(values, values)), l_max)

    def index(self, pair) -> int:
        return self._index[tuple(pair)]

    def __len__(self) -> int:
        return len(self.pairs)

    def __eq__(self, other) -> bool:
        return isinstance(other, OamPairBasis) and self.pairs == other.pairs

    def __hash__(self):
        return hash(self.pairs)

    def __repr__(self) -> str:
        return f"OamPairBasis({len(self.pairs)} pairs, l_max={self.l_max})"


def sector_pairs(basis: OamPairBasis, ls: int):
    """Pairs of the basis whose total OAM equals ls."""
    return [p for p in basis.pairs if p[0] + p[1] == ls]


class PairDensityMatrix:
    """Hermitian matrix over an OAM pair basis."""

    def __init__(self, basis: OamPairBasis, entries: np.ndarray):
        entries = np.asarray(entries, dtype=complex)
        n = len(basis)
        if entries.shape != (n, n):
            raise ContractError(f"entries shape {entries.shape} does not match basis size {n}")
        scale = max(1.0, float(np.abs(entries).max()) if entries.size else 1.0)
        if float(np.abs(entries - entries.conj().T).max()) > HERMITICITY_TOL * scale:
            raise ContractError("matrix is not Hermitian within tolerance")
        self.basis = basis
        self.entries = entries

    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def normalize(self) -> "PairDensityMatrix":
        tr = self.trace()
        if tr <= 0:
            raise ContractError(f"cannot normalize matrix with trace {tr}")
        return PairDensityMatrix(self.basis, self.entries / tr)

    def diagonal(self) -> np.ndarray:
        return self.entries.diagonal().real.copy()

    def to_json_dict(self) -> dict:
        return {
            "basis": [[l1, l2] for l1, l2 in self.basis.pairs],
            "re": self.entries.real.tolist(),
            "im": self.entries.imag.tolist(),
        }

    @classmethod
    def from_json_dict(cls, payload: dict) -> "PairDensityMatrix":
        pairs = [tuple(p) for p in payload["basis"]]
        l_max = max(max(abs(l1), abs(l2)) for l1, l2 in pairs)
        basis = OamPairBasis(pairs, l_max)
        entries = np.asarray(payload["re"], dtype=float) + 1j * np.asarray(
            payload["im"], dtype=float
        )
        return cls(basis, entries)


def normalize(m: PairDensityMatrix) -> PairDensityMatrix:
    """Scale entries so the trace is 1."""
    return m.normalize()


def _ls_value(ls) -> int:
    return ls.ls if isinstance(ls, WindingNumber) else int(ls)


def _kappa_vector(basis: OamPairBasis, geom: AnnulusGeometry) -> np.ndarray:
    return np.array(
        [kappa(ModeIndex(0, l1), ModeIndex(0, l2), geom) for l1, l2 in basis.pairs]
    )


def _sector_vector(basis: OamPairBasis, geom: AnnulusGeometry, ls: int) -> np.ndarray:
    """Overlap vector restricted to the total-OAM = ls sector; raises when empty."""
    mask = np.array([l1 + l2 == ls for l1, l2 in basis.pairs])
    if not mask.any():
        raise EmptySectorError(
            f"no pair in the basis has total OAM {ls} (l_max={basis.l_max})"
        )
    return _kappa_vector(basis, geom) * mask


def rho_cp(ls, basis: OamPairBasis, geom: AnnulusGeometry) -> PairDensityMatrix:
    """Unnormalized coherent-channel matrix: overlap outer product on the ls sector."""
    v = _sector_vector(basis, geom, _ls_value(ls))
    return PairDensityMatrix(basis, np.outer(v, v).astype(complex))


def rho_bqp(basis: OamPairBasis, geom: AnnulusGeometry) -> PairDensityMatrix:
    """Unnormalized incoherent-channel matrix: diagonal of squared overlaps."""
    v = _kappa_vector(basis, geom)
    return PairDensityMatrix(basis, np.diag(v * v).astype(complex))


def rho_superposition(
    q: QubitState, ls, basis: OamPairBasis, geom: AnnulusGeometry
) -> PairDensityMatrix:
    """Unnormalized pure-state matrix for a qubit superposition of current directions.

    The emitted state is a |+ls sector> + b |-ls sector>, each sector carrying
    its overlap amplitudes; the matrix is the corresponding outer product.
    A sector is only required to be populated when its amplitude is nonzero.
    """
    ls = _ls_value(ls)
    n = len(basis)
    psi = np.zeros(n, dtype=complex)
    if q.a != 0:
        psi += q.a * _sector_vector(basis, geom, ls)
    if q.b != 0:
        psi += q.b * _sector_vector(basis, geom, -ls)
    return PairDensityMatrix(basis, np.outer(psi, psi.conj()))


def _mixture(
    coherent: PairDensityMatrix,
    basis: OamPairBasis,
    geom: AnnulusGeometry,
    d: float,
    t: float,
    jp: JunctionParams,
    coh: spectral.CoherenceParams,
    quad: spectral.KQuadrature,
) -> PairDensityMatrix:
    incoherent = rho_bqp(basis, geom)
    tr_cp = coherent.trace()
    tr_bqp = incoherent.trace()
    if tr_cp <= 0 or tr_bqp <= 0:
        raise DegenerateMixtureError(
            f"component traces must be positive, got cp={tr_cp}, bqp={tr_bqp}"
        )
    r_cp, r_bqp = spectral.mixing_rates(d, t, jp, coh, quad)
    total = r_cp + r_bqp
    if total <= 0:
        raise DegenerateMixtureError(f"total rate vanished (r_cp={r_cp}, r_bqp={r_bqp})")
    entries = (r_cp / total) * (coherent.entries / tr_cp) + (r_bqp / total) * (
        incoherent.entries / tr_bqp
    )
    return PairDensityMatrix(basis, entries).normalize()


def rho_total(
    ls,
    basis: OamPairBasis,
    geom: AnnulusGeometry,
    d: float,
    t: float,
    jp: JunctionParams,
    coh: spectral.CoherenceParams,
    quad: spectral.KQuadrature = spectral.KQuadrature(),
) -> PairDensityMatrix:
    """Trace-1 rate-weighted mixture of the coherent and incoherent channels."""
    return _mixture(rho_cp(ls, basis, geom), basis, geom, d, t, jp, coh, quad)


def rho_total_superposition(
    q: QubitState,
    ls,
    basis: OamPairBasis,
    geom: AnnulusGeometry,
    d: float,
    t: float,
    jp: JunctionParams,
    coh: spectral.CoherenceParams,
    quad: spectral.KQuadrature = spectral.KQuadrature(),
) -> PairDensityMatrix:
    """Trace-1 mixture with the coherent channel carrying a qubit superposition."""
    return _mixture(rho_superposition(q, ls, basis, geom), basis, geom, d, t, jp, coh, quad)
