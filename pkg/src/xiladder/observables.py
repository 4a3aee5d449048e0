"""Level populations, photon numbers, and photon-number distributions.

All observables here are diagonal in the occupation basis, so expectation
values are probability-weighted sums over basis states.  Two operator
identities hold for every eigenstate and double as self-checks:
sum_i <A_ii> = na and <a^dag a> + <A22> + 2<A33> = M.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import SectorBasis, enumerate_basis
from .errors import ConvergenceFailureError, InvalidStateError
from .hamiltonian import build_sector
from .params import ModelParams
from .spectra import SectorSpectrum, diagonalize


@dataclass(frozen=True)
class ExpectationRow:
    """Populations and photon number of one eigenstate (index k, ascending energy)."""

    k: int
    energy: float
    a11: float
    a22: float
    a33: float
    nphot: float


@dataclass(frozen=True)
class PhotonDistribution:
    """Probabilities P(nu0 + s) of the photon number in one eigenstate.

    ``probs[s]`` is the probability of nu0 + s photons, where
    nu0 = max(0, M - 2*na) is the fewest photons the sector admits (all atoms
    maximally excited).  The support holds min(M, 2*na) + 1 values of nu.
    """

    na: int
    m: int
    nu0: int
    probs: np.ndarray
    params: ModelParams | None = None
    eigenstate_index: int | None = None

    @property
    def nu_values(self) -> np.ndarray:
        return self.nu0 + np.arange(len(self.probs))


def expectations(spectrum: SectorSpectrum) -> list[ExpectationRow]:
    """Per-eigenstate <A11>, <A22>, <A33> and <a^dag a> of a finite-na sector."""
    basis = spectrum.basis
    if not isinstance(basis, SectorBasis):
        raise InvalidStateError("expectations need a finite-atom-number sector basis")
    weights = spectrum.eigenvectors**2  # (dim, nstates)
    n1 = basis.r
    n2 = basis.q - basis.r
    n3 = basis.na - basis.q
    return [
        ExpectationRow(
            k=k,
            energy=float(spectrum.eigenvalues[k]),
            a11=float(n1 @ weights[:, k]),
            a22=float(n2 @ weights[:, k]),
            a33=float(n3 @ weights[:, k]),
            nphot=float(basis.nu @ weights[:, k]),
        )
        for k in range(spectrum.dimension)
    ]


def photon_distribution(
    vector: np.ndarray,
    basis: SectorBasis,
    params: ModelParams | None = None,
    eigenstate_index: int | None = None,
) -> PhotonDistribution:
    """Photon-number probabilities of a normalized state in ``basis``."""
    vector = np.asarray(vector, dtype=float)
    norm = float(np.linalg.norm(vector))
    if abs(norm - 1.0) > 1e-8:
        raise InvalidStateError(f"state is not normalized (|v| = {norm})")
    nu0 = max(0, basis.m - 2 * basis.na)
    probs = np.zeros(min(basis.m, 2 * basis.na) + 1)
    np.add.at(probs, basis.nu - nu0, vector**2)
    return PhotonDistribution(
        na=basis.na,
        m=basis.m,
        nu0=nu0,
        probs=probs,
        params=params,
        eigenstate_index=eigenstate_index,
    )


def photon_distribution_limit(
    params: ModelParams,
    tol: float = 1e-6,
    start_factor: int = 4,
    max_doublings: int = 48,
) -> PhotonDistribution:
    """Large-M limit of the sector ground state's photon distribution.

    For M >= 2*na the distribution has a fixed support size of 2*na + 1, so
    successive distributions at M, 2M, 4M, ... are compared componentwise;
    the first whose L1 distance to its predecessor drops below ``tol`` is
    returned (its ``m`` field records the M actually used).
    """
    if tol <= 0:
        raise ConvergenceFailureError("tolerance must be positive")
    na = params.na
    m = max(start_factor * na, 2 * na + 1)

    def ground_dist(m_val: int) -> PhotonDistribution:
        spectrum = diagonalize(build_sector(params, enumerate_basis(na, m_val)))
        return photon_distribution(
            spectrum.eigenvectors[:, 0], spectrum.basis, params=params, eigenstate_index=0
        )

    prev = ground_dist(m)
    distance = np.inf
    for _ in range(max_doublings):
        m *= 2
        cur = ground_dist(m)
        distance = float(np.sum(np.abs(cur.probs - prev.probs)))
        if distance < tol:
            return cur
        prev = cur
    raise ConvergenceFailureError(
        f"photon distribution did not converge to L1 < {tol} within "
        f"{max_doublings} doublings (last distance {distance:.3e})",
        last_distance=distance,
    )
