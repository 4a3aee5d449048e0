"""Basis enumeration for the fixed-excitation sectors.

Each basis state |nu; q, r> has nu photons and atomic populations
n1 = r, n2 = q - r, n3 = na - q in the three levels.  The excitation number
M = nu + n2 + 2*n3 is conserved, so for fixed (na, M) the admissible (q, r)
pairs with nu = M - (q-r) - 2*(na-q) >= 0 span a finite sector.

States are ordered by descending nu, ties broken by descending q then
descending r.  The ordering is part of the package contract: matrix dumps,
eigenvector sign conventions and golden files all depend on it.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .errors import InvalidParameterError


class BasisState(NamedTuple):
    """One |nu; q, r> occupation state."""

    nu: int
    q: int
    r: int

    @property
    def n1(self) -> int:
        return self.r

    @property
    def n2(self) -> int:
        return self.q - self.r

    def n3(self, na: int) -> int:
        return na - self.q


@dataclass(frozen=True)
class SectorBasis:
    """Ordered basis of one (na, M) sector with an index lookup.

    ``nu``, ``q``, ``r`` are integer arrays aligned with ``states`` for
    vectorized work (diagonal assembly, observables).
    """

    na: int
    m: int
    states: tuple[BasisState, ...]
    index: dict = field(repr=False)
    nu: np.ndarray = field(repr=False)
    q: np.ndarray = field(repr=False)
    r: np.ndarray = field(repr=False)

    @property
    def dimension(self) -> int:
        return len(self.states)


def _check_sector_args(na: int, m: int) -> None:
    if not (isinstance(na, (int, np.integer)) and na >= 1):
        raise InvalidParameterError(f"atom count must be an integer >= 1, got {na}")
    if not (isinstance(m, (int, np.integer)) and m >= 0):
        raise InvalidParameterError(f"excitation number must be an integer >= 0, got {m}")


def enumerate_basis(na: int, m: int) -> SectorBasis:
    """Enumerate all |nu; q, r> of the (na, m) sector in the canonical order.

    Iterates over the occupied-level pairs (n2, n3) directly, so the cost is
    O(sector dimension) even for very large atom counts.
    """
    _check_sector_args(na, m)
    states = []
    for n3 in range(min(m // 2, na) + 1):
        q = na - n3
        for n2 in range(min(m - 2 * n3, q) + 1):
            states.append(BasisState(nu=m - n2 - 2 * n3, q=q, r=q - n2))
    states.sort(key=lambda s: (-s.nu, -s.q, -s.r))
    states = tuple(states)
    return SectorBasis(
        na=int(na),
        m=int(m),
        states=states,
        index={s: i for i, s in enumerate(states)},
        nu=np.array([s.nu for s in states], dtype=np.int64),
        q=np.array([s.q for s in states], dtype=np.int64),
        r=np.array([s.r for s in states], dtype=np.int64),
    )


def sector_dimension(na: int, m: int) -> int:
    """Closed-form count of the (na, m) sector basis.

    Counts pairs (n2, n3) >= 0 with n2 + n3 <= na and n2 + 2*n3 <= m.  For
    m >= 2*na the excitation constraint is slack and the count saturates at
    the full simplex (na+1)(na+2)/2; for m <= na the atom-number constraint
    is slack and the count depends on m only.
    """
    _check_sector_args(na, m)
    na = int(na)
    m = int(m)
    if m >= 2 * na:
        return (na + 1) * (na + 2) // 2
    half = m // 2
    if m <= na:
        return (half + 1) * (m + 1 - half)
    # na < m < 2*na: the binding constraint switches at n3 = m - na.
    switch = m - na  # for n3 < switch the atom-number constraint binds
    count = 0
    # n3 in [0, switch):       n2 <= na - n3
    count += switch * (na + 1) - (switch - 1) * switch // 2
    # n3 in [switch, m // 2]:  n2 <= m - 2*n3
    lo, hi = switch, half
    count += (hi - lo + 1) * (m + 1) - (hi * (hi + 1) - lo * (lo - 1))
    return count
