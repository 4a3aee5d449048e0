"""Assembly of the sector Hamiltonian matrices.

The Hamiltonian is

    H = omega a^dag a + sum_i omega_i A_ii
        - (mu12 (a A21 + a^dag A12) + mu23 (a A32 + a^dag A23)) / sqrt(na)

with collective atomic operators acting on the totally symmetric irrep, i.e.
as three-mode bosonic hops: A_ij moves one atom from level j to level i with
amplitude sqrt(n_j (n_i + 1)).  The rotating-wave interaction conserves
M = a^dag a + A22 + 2 A33, so H is block diagonal over the sector bases of
``enumerate_basis``.

Within a sector the nonzero elements are

    <nu; q, r | H | nu; q, r>        = omega nu + omega1 r + omega2 (q-r) + omega3 (na-q)
    <nu-1; q, r-1 | H | nu; q, r>    = -(mu12/sqrt(na)) sqrt(nu r (q-r+1))
    <nu-1; q-1, r | H | nu; q, r>    = -(mu23/sqrt(na)) sqrt(nu (q-r) (na-q+1))

Every off-diagonal element changes nu by one, so the interaction is bipartite
in photon-number parity; with mu >= 0 all off-diagonal entries are <= 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .basis import SectorBasis, enumerate_basis
from .errors import ConsistencyError, InvalidParameterError
from .params import ModelParams


@dataclass(frozen=True)
class SectorMatrix:
    """Dense real symmetric Hamiltonian of one (na, M) sector."""

    basis: SectorBasis
    entries: np.ndarray
    params: ModelParams


@lru_cache(maxsize=512)
def sector_coupling_blocks(na: int, m: int):
    """Basis and the two symmetric coupling magnitude matrices of a sector.

    Returns (basis, w12, w23) where the sector Hamiltonian is
    diag(diagonal) - mu12*w12 - mu23*w23.  The 1/sqrt(na) factor is folded
    into the w matrices.  Both are assembled in exact (i, j)/(j, i) pairs so
    symmetry holds bit-exactly; arrays are read-only because they are cached.
    """
    basis = enumerate_basis(na, m)
    dim = basis.dimension
    w12 = np.zeros((dim, dim))
    w23 = np.zeros((dim, dim))
    root_na = np.sqrt(na)
    for i, s in enumerate(basis.states):
        if s.nu < 1:
            continue
        # a A21: one photon absorbed, one atom promoted from level 1 to 2.
        if s.r >= 1:
            j = basis.index[(s.nu - 1, s.q, s.r - 1)]
            amp = np.sqrt(s.nu * s.r * (s.q - s.r + 1)) / root_na
            w12[i, j] = amp
            w12[j, i] = amp
        # a A32: one photon absorbed, one atom promoted from level 2 to 3.
        if s.q - s.r >= 1:
            j = basis.index[(s.nu - 1, s.q - 1, s.r)]
            amp = np.sqrt(s.nu * (s.q - s.r) * (na - s.q + 1)) / root_na
            w23[i, j] = amp
            w23[j, i] = amp
    for arr in (w12, w23):
        arr.setflags(write=False)
    return basis, w12, w23


def diagonal_energies(params: ModelParams, basis: SectorBasis) -> np.ndarray:
    """Non-interacting energies omega*nu + sum_i omega_i n_i per basis state."""
    return (
        params.omega * basis.nu
        + params.omega1 * basis.r
        + params.omega2 * (basis.q - basis.r)
        + params.omega3 * (basis.na - basis.q)
    ).astype(float)


def build_sector(params: ModelParams, basis: SectorBasis) -> SectorMatrix:
    """Assemble the dense symmetric sector Hamiltonian for ``basis``."""
    if basis.na != params.na:
        raise ConsistencyError(
            f"basis was enumerated for na={basis.na} but params have na={params.na}"
        )
    cached_basis, w12, w23 = sector_coupling_blocks(basis.na, basis.m)
    entries = np.diag(diagonal_energies(params, cached_basis))
    entries -= params.mu12 * w12
    entries -= params.mu23 * w23
    return SectorMatrix(basis=cached_basis, entries=entries, params=params)


class ThermoState(NamedTuple):
    """Occupation state (nu, n2, n3) of the infinite-atom-number sector."""

    nu: int
    n2: int
    n3: int


@dataclass(frozen=True)
class ThermoBasis:
    """Sector basis in the limit na -> infinity (no cap on atomic populations)."""

    m: int
    states: tuple[ThermoState, ...]
    index: dict = field(repr=False)
    nu: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.states)


@dataclass(frozen=True)
class ThermoSectorMatrix:
    """Limit form of a sector Hamiltonian: diagonal M, mu23 decoupled."""

    basis: ThermoBasis
    entries: np.ndarray
    mu12: float


def enumerate_thermo_basis(m: int) -> ThermoBasis:
    """All (nu, n2, n3) with nu = m - n2 - 2*n3 >= 0, ordered by descending nu then ascending n3."""
    if not (isinstance(m, (int, np.integer)) and m >= 0):
        raise InvalidParameterError(f"excitation number must be an integer >= 0, got {m}")
    states = []
    for n3 in range(m // 2 + 1):
        for n2 in range(m - 2 * n3 + 1):
            states.append(ThermoState(nu=m - n2 - 2 * n3, n2=n2, n3=n3))
    states.sort(key=lambda s: (-s.nu, s.n3))
    states = tuple(states)
    return ThermoBasis(
        m=int(m),
        states=states,
        index={s: i for i, s in enumerate(states)},
        nu=np.array([s.nu for s in states], dtype=np.int64),
    )


def build_thermo_sector(mu12: float, m: int) -> ThermoSectorMatrix:
    """Sector Hamiltonian in the na -> infinity limit (gauge omega=1, omega1=0).

    In that limit the level-1 population is macroscopic, so the mu12 element
    sqrt(nu r (n2+1) / na) -> sqrt(nu (n2+1)) while the mu23 element carries
    no factor of na and vanishes.  The diagonal collapses to M for every
    state, n3 becomes a spectator, and each chain nu + n2 = L = M - 2*n3 is a
    plain two-mode hop.
    """
    if mu12 < 0:
        raise InvalidParameterError(f"coupling must be non-negative, got mu12={mu12}")
    basis = enumerate_thermo_basis(m)
    dim = basis.dimension
    entries = np.zeros((dim, dim))
    np.fill_diagonal(entries, float(m))
    for i, s in enumerate(basis.states):
        if s.nu < 1:
            continue
        j = basis.index[(s.nu - 1, s.n2 + 1, s.n3)]
        amp = -mu12 * np.sqrt(s.nu * (s.n2 + 1))
        entries[i, j] = amp
        entries[j, i] = amp
    return ThermoSectorMatrix(basis=basis, entries=entries, mu12=mu12)
