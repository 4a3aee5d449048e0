"""Sector diagonalization, the global ground-state scan, and spectral symmetries.

In double resonance every sector diagonal is constant (omega*M + na*omega1)
and the interaction flips photon-number parity, so conjugating with the
parity signs (-1)^nu negates H minus its diagonal: the sector spectrum is
mirror symmetric about E = omega*M + na*omega1 (just E = M in the default
gauge) and degeneracies can only sit on the mirror axis.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .basis import SectorBasis, enumerate_basis
from .errors import (
    IncompleteScanError,
    InvalidParameterError,
    NumericalFailureError,
)
from .hamiltonian import (
    SectorMatrix,
    ThermoSectorMatrix,
    build_sector,
    diagonal_energies,
    sector_coupling_blocks,
)
from .params import ModelParams


@dataclass(frozen=True)
class SectorSpectrum:
    """Full spectral decomposition of one sector.

    Eigenvalues ascend; eigenvector columns are aligned with them and carry
    the sign convention that the largest-magnitude component is positive
    (ties resolved to the lowest index).
    """

    m: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    basis: object
    params: ModelParams | None = None

    @property
    def dimension(self) -> int:
        return len(self.eigenvalues)

    def mirror_center(self) -> float:
        """Energy about which a double-resonant spectrum is symmetric."""
        if self.params is None:
            return float(self.m)
        return self.params.omega * self.m + self.params.na * self.params.omega1


@dataclass(frozen=True)
class SectorState:
    """A normalized vector living in one M sector."""

    m: int
    vector: np.ndarray


@dataclass(frozen=True)
class GroundStateRecord:
    """Outcome of the global ground-state scan over sectors."""

    winning_m: int
    energy: float
    state: np.ndarray
    basis: SectorBasis
    per_sector_minima: tuple
    m_max_used: int

    def sector_state(self) -> SectorState:
        return SectorState(m=self.winning_m, vector=self.state)


@dataclass(frozen=True)
class MirrorPair:
    """A sorted-spectrum index pair (k, dim-1-k) with its mirror defect."""

    k: int
    k_mirror: int
    deviation: float
    within_tol: bool


def _amax_hop(na: int) -> float:
    """Largest single-hop amplitude sqrt((na-k)(k+1)/na) over the atomic simplex."""
    best = 0.0
    for k in {(na - 1) // 2, (na - 1) // 2 + 1, 0}:
        if 0 <= k <= na:
            best = max(best, (na - k) * (k + 1) / na)
    return math.sqrt(best)


@dataclass(frozen=True)
class MmaxPolicy:
    """Stop rule and hard cap for the global ground-state scan.

    The scan stops once the sector minimum E0(M) has strictly risen for
    ``rise_run`` consecutive sectors while sitting above the running minimum
    (the photon cost per excitation beats the sqrt(M) coupling gain
    eventually, so E0(M) always turns upward).  ``hard_cap`` defaults to a
    coupling-aware bound: each coupling row holds at most two entries of
    magnitude <= mu*sqrt(M)*amax, so E0(M) >= omega*M + const - sqrt(M)*s with
    s = 2*(mu12+mu23)*amax, which turns upward by M = (s/(2*omega))^2; a fixed
    cap independent of the couplings under-scans for strong coupling.
    """

    hard_cap: int | None = None
    rise_run: int = 5
    tie_tol: float = 1e-12

    def resolve_cap(self, params: ModelParams) -> int:
        if self.hard_cap is not None:
            return self.hard_cap
        floor_cap = max(3 * (params.na + 1), 24)
        s = 2.0 * (params.mu12 + params.mu23) * _amax_hop(params.na)
        turn = (s / (2.0 * params.omega)) ** 2
        return max(floor_cap, math.ceil(1.2 * turn) + 12)


def _fix_signs(vectors: np.ndarray) -> np.ndarray:
    """Flip eigenvector columns so the largest-magnitude component is positive."""
    lead = np.argmax(np.abs(vectors), axis=0)
    signs = np.sign(vectors[lead, np.arange(vectors.shape[1])])
    signs[signs == 0] = 1.0
    return vectors * signs


def diagonalize(matrix: SectorMatrix | ThermoSectorMatrix) -> SectorSpectrum:
    """Full spectral decomposition of a sector matrix."""
    try:
        eigenvalues, eigenvectors = np.linalg.eigh(matrix.entries)
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(
            f"eigensolver failed on sector M={matrix.basis.m} "
            f"(dimension {matrix.basis.dimension})"
        ) from exc
    return SectorSpectrum(
        m=matrix.basis.m,
        eigenvalues=eigenvalues,
        eigenvectors=_fix_signs(eigenvectors),
        basis=matrix.basis,
        params=getattr(matrix, "params", None),
    )


def sector_ground(params: ModelParams, m: int) -> tuple[float, np.ndarray]:
    """Lowest eigenpair of the (params.na, m) sector."""
    spectrum = diagonalize(build_sector(params, enumerate_basis(params.na, m)))
    return float(spectrum.eigenvalues[0]), spectrum.eigenvectors[:, 0]


def _sector_minimum(params: ModelParams, m: int) -> float:
    """Lowest eigenvalue of a sector without computing eigenvectors."""
    basis, w12, w23 = sector_coupling_blocks(params.na, m)
    h = np.diag(diagonal_energies(params, basis))
    h -= params.mu12 * w12
    h -= params.mu23 * w23
    try:
        return float(np.linalg.eigvalsh(h)[0])
    except np.linalg.LinAlgError as exc:
        raise NumericalFailureError(f"eigensolver failed on sector M={m}") from exc


def scan_sector_minima(params: ModelParams, policy: MmaxPolicy | None = None):
    """Run the stop-rule scan of per-sector minima.

    Returns (minima, winning_m, fired) where minima is a list of (M, E0)
    pairs and fired says whether the stop rule (rather than the cap) ended
    the scan.
    """
    policy = policy or MmaxPolicy()
    cap = policy.resolve_cap(params)
    minima: list[tuple[int, float]] = []
    best_e = math.inf
    best_m = -1
    prev_e = math.inf
    rises = 0
    fired = False
    for m in range(cap + 1):
        e = _sector_minimum(params, m)
        minima.append((m, e))
        if m > 0 and e > prev_e and e > best_e:
            rises += 1
        else:
            rises = 0
        if best_m < 0 or e < best_e - policy.tie_tol:
            best_e, best_m = e, m
        prev_e = e
        if rises >= policy.rise_run:
            fired = True
            break
    return minima, best_m, fired


def global_ground(params: ModelParams, policy: MmaxPolicy | None = None) -> GroundStateRecord:
    """Scan M = 0, 1, 2, ... and return the global ground state.

    Exact ties between sectors (within ``policy.tie_tol``) resolve to the
    smaller M.  If the hard cap is reached while E0(M) is still falling the
    scan is untrustworthy and an IncompleteScanError carrying the partial
    record is raised.
    """
    policy = policy or MmaxPolicy()
    minima, best_m, fired = scan_sector_minima(params, policy)
    energy, state = sector_ground(params, best_m)
    record = GroundStateRecord(
        winning_m=best_m,
        energy=energy,
        state=state,
        basis=enumerate_basis(params.na, best_m),
        per_sector_minima=tuple(minima),
        m_max_used=minima[-1][0],
    )
    if not fired:
        cap_m, cap_e = minima[-1]
        still_falling = (len(minima) >= 2 and cap_e < minima[-2][1]) or best_m == cap_m
        if still_falling:
            raise IncompleteScanError(
                f"sector scan reached its cap M={cap_m} with E0 still falling "
                f"(best so far E0({best_m})={record.energy:.6g}); raise the cap",
                partial=record,
            )
    return record


def degeneracy_at_mirror_energy(params: ModelParams, m: int, tol: float = 1e-8) -> int:
    """Count eigenvalues of a double-resonant sector lying on the mirror axis E = M.

    (In a gauge with omega1 != 0 the axis shifts to omega*M + na*omega1.)
    """
    if not params.is_double_resonance:
        raise InvalidParameterError("degeneracy at the mirror axis requires double resonance")
    spectrum = diagonalize(build_sector(params, enumerate_basis(params.na, m)))
    center = spectrum.mirror_center()
    return int(np.sum(np.abs(spectrum.eigenvalues - center) < tol))


def mirror_pairs(spectrum: SectorSpectrum, tol: float = 1e-9) -> list[MirrorPair]:
    """Pair the sorted spectrum as (k, dim-1-k) and report mirror defects.

    Meaningful in double resonance, where E_k + E_{dim-1-k} = 2 * mirror
    center holds for every pair; ``within_tol`` flags pairs that violate it
    beyond ``tol``.
    """
    if spectrum.params is not None and not spectrum.params.is_double_resonance:
        raise InvalidParameterError("mirror pairing requires double resonance")
    energies = spectrum.eigenvalues
    dim = len(energies)
    center2 = 2.0 * spectrum.mirror_center()
    pairs = []
    for k in range((dim + 1) // 2):
        km = dim - 1 - k
        dev = float(abs(energies[k] + energies[km] - center2))
        pairs.append(MirrorPair(k=k, k_mirror=km, deviation=dev, within_tol=dev <= tol))
    return pairs
