"""Physical parameters of the three-level ladder system in a single-mode cavity.

Conventions: level frequencies are ordered omega1 <= omega2 <= omega3, and the
couplings mu12, mu23 are non-negative (flipping the sign of a coupling is a
gauge transformation of the field mode, so negative values add nothing).
Energies are usually quoted in the gauge omega = 1, omega1 = 0; in that gauge
a double-resonant sector has all diagonal entries equal to the excitation
number M and the spectrum is mirror symmetric about E = M.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .errors import InvalidParameterError


@dataclass(frozen=True)
class Detunings:
    """Detunings of the two ladder transitions from the field frequency.

    delta21 = omega2 - omega1 - omega and delta32 = omega3 - omega2 - omega;
    both vanish in double resonance.
    """

    delta21: float
    delta32: float


@dataclass(frozen=True)
class ModelParams:
    """Immutable parameter set: field frequency, level frequencies, couplings, atom count."""

    omega: float = 1.0
    omega1: float = 0.0
    omega2: float = 1.0
    omega3: float = 2.0
    mu12: float = 0.0
    mu23: float = 0.0
    na: int = 1

    def __post_init__(self):
        if not self.omega > 0:
            raise InvalidParameterError(f"field frequency must be positive, got {self.omega}")
        if not (self.omega1 <= self.omega2 <= self.omega3):
            raise InvalidParameterError(
                f"level frequencies must be ordered omega1 <= omega2 <= omega3, "
                f"got ({self.omega1}, {self.omega2}, {self.omega3})"
            )
        if self.mu12 < 0 or self.mu23 < 0:
            raise InvalidParameterError(
                f"couplings must be non-negative, got mu12={self.mu12}, mu23={self.mu23}"
            )
        if not (isinstance(self.na, int) and self.na >= 1):
            raise InvalidParameterError(f"atom count must be an integer >= 1, got {self.na}")

    def with_couplings(self, mu12: float, mu23: float) -> "ModelParams":
        return dataclasses.replace(self, mu12=mu12, mu23=mu23)

    @property
    def is_double_resonance(self) -> bool:
        d = detunings(self)
        return d.delta21 == 0.0 and d.delta32 == 0.0


def detunings(params: ModelParams) -> Detunings:
    """Detunings delta_ij = omega_i - omega_j - omega of the two transitions."""
    return Detunings(
        delta21=params.omega2 - params.omega1 - params.omega,
        delta32=params.omega3 - params.omega2 - params.omega,
    )


def double_resonance(omega: float = 1.0, na: int = 1) -> ModelParams:
    """Parameters with both detunings exactly zero: omega_i = (0, omega, 2*omega).

    Couplings start at zero; set them with ``with_couplings``.
    """
    if not omega > 0:
        raise InvalidParameterError(f"field frequency must be positive, got {omega}")
    if not (isinstance(na, int) and na >= 1):
        raise InvalidParameterError(f"atom count must be an integer >= 1, got {na}")
    return ModelParams(omega=omega, omega1=0.0, omega2=omega, omega3=2.0 * omega, na=na)


_CONFIG_KEYS = ("omega", "omega1", "omega2", "omega3", "mu12", "mu23", "na")


def read_config(path) -> dict:
    """Read a flat key=value parameter file.

    Recognized keys: omega, omega1..omega3, mu12, mu23, na.  Blank lines and
    lines starting with '#' are ignored.
    """
    values: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            if "=" not in line:
                raise InvalidParameterError(f"{path}:{lineno}: expected key=value, got {line!r}")
            key, _, val = line.partition("=")
            key = key.strip()
            val = val.strip()
            if key not in _CONFIG_KEYS:
                raise InvalidParameterError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                values[key] = int(val) if key == "na" else float(val)
            except ValueError as exc:
                raise InvalidParameterError(f"{path}:{lineno}: bad value for {key}: {val!r}") from exc
    return values
