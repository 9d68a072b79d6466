"""Physical parameters and coupling-regime bookkeeping.

Conventions: hbar = 1 and every frequency is an angular frequency in rad/time.
The library is unit-agnostic; the CLI and the bundled demo scripts express
everything in units of the cavity frequency (omega_c = 1).
"""

from __future__ import annotations

from dataclasses import dataclass

STRONG_ULTRASTRONG_EDGE = 0.1
ULTRASTRONG_DEEPSTRONG_EDGE = 1.0


@dataclass(frozen=True)
class ModelParams:
    """Lab-frame parameters of the frequency-modulated Rabi model.

    omega0   atomic transition frequency
    omega_c  cavity frequency, > 0
    g        atom-cavity coupling, >= 0
    xi       dimensionless modulation amplitude, >= 0
    v        modulation frequency, > 0
    """

    omega0: float
    omega_c: float
    g: float
    xi: float
    v: float

    def __post_init__(self):
        if not self.omega_c > 0:
            raise ValueError(f"omega_c must be positive, got {self.omega_c}")
        if not self.v > 0:
            raise ValueError(f"v must be positive, got {self.v}")
        if self.g < 0:
            raise ValueError(f"g must be non-negative, got {self.g}")
        if self.xi < 0:
            raise ValueError(f"xi must be non-negative, got {self.xi}")

    @property
    def delta(self) -> float:
        """Atom-cavity detuning omega0 - omega_c."""
        return self.omega0 - self.omega_c


@dataclass(frozen=True)
class CouplingRegime:
    """Coupling-regime label with the ratio g/omega_c that produced it."""

    label: str
    ratio: float


def classify_regime(p: ModelParams) -> CouplingRegime:
    """Classify g/omega_c into strong, ultrastrong or deep-strong.

    Boundary values belong to the higher regime: exactly 0.1 is ultrastrong
    and exactly 1 is deep-strong.
    """
    ratio = p.g / p.omega_c
    if ratio < STRONG_ULTRASTRONG_EDGE:
        label = "strong"
    elif ratio < ULTRASTRONG_DEEPSTRONG_EDGE:
        label = "ultrastrong"
    else:
        label = "deep-strong"
    return CouplingRegime(label=label, ratio=ratio)
