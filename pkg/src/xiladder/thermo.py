"""Closed form of the infinite-atom-number sector spectrum.

The limit matrix (see ``build_thermo_sector``) is M*I minus mu12 times a
two-mode hop with n3 a spectator, so each chain nu + n2 = L = M - 2*n3
contributes energies M - mu12*(L - 2k), k = 0..L.  At mu12 = 1 every line
passes through an even integer, which is the level collapse visible when the
limit spectra of successive M are overlaid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidParameterError, NumericalFailureError
from .hamiltonian import build_thermo_sector


@dataclass(frozen=True)
class ThermoSpectrumLine:
    """One affine spectral line E(mu12) = M - mu12*(L - 2k) of the limit sector."""

    m: int
    n3: int
    k: int

    @property
    def chain_length(self) -> int:
        return self.m - 2 * self.n3

    @property
    def intercept(self) -> float:
        return float(self.m)

    @property
    def slope(self) -> float:
        return float(-(self.chain_length - 2 * self.k))

    def energy(self, mu12: float) -> float:
        return self.intercept + self.slope * mu12


def thermo_lines(m: int) -> list[ThermoSpectrumLine]:
    """All spectral lines of the limit sector M (one per chain state)."""
    if not (isinstance(m, (int, np.integer)) and m >= 0):
        raise InvalidParameterError(f"excitation number must be an integer >= 0, got {m}")
    return [
        ThermoSpectrumLine(m=int(m), n3=n3, k=k)
        for n3 in range(m // 2 + 1)
        for k in range(m - 2 * n3 + 1)
    ]


def thermo_spectrum(mu12: float, m: int, check: bool = False) -> np.ndarray:
    """Sorted limit-sector spectrum from the closed form.

    With ``check=True`` the result is verified against diagonalizing the
    numeric limit matrix to 1e-10 (raises NumericalFailureError on mismatch).
    """
    if mu12 < 0:
        raise InvalidParameterError(f"coupling must be non-negative, got mu12={mu12}")
    energies = np.sort([line.energy(mu12) for line in thermo_lines(m)])
    if check:
        numeric = np.linalg.eigvalsh(build_thermo_sector(mu12, m).entries)
        if energies.size != numeric.size or np.max(np.abs(energies - numeric)) > 1e-10:
            raise NumericalFailureError(
                f"limit-sector closed form disagrees with the numeric matrix at M={m}"
            )
    return energies


def thermo_fan(mu12_values, m_max: int) -> list[tuple[float, int, float]]:
    """Sampled (mu12, M, E) rows of every spectral line for M = 0..m_max.

    Exact affine evaluation; no diagonalization involved.
    """
    mu12_values = np.asarray(mu12_values, dtype=float)
    if mu12_values.size and mu12_values.min() < 0:
        raise InvalidParameterError("couplings must be non-negative")
    rows = []
    for mu in mu12_values:
        for m in range(m_max + 1):
            for line in thermo_lines(m):
                rows.append((float(mu), m, line.energy(float(mu))))
    return rows
