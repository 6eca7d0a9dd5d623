"""
Physical drive parameters.

All quantities are dimensionless (hbar = 1, energies in units of the vacuum
Rabi coupling). In single-mode use ``g_a`` is the coupling g and ``delta_a``
the mode detuning delta.
"""

from dataclasses import dataclass, replace
from math import isfinite
from typing import Optional

from hilbert.exceptions import LayoutError, RegimeError

FREQUENCY_MATCH_TOLERANCE = 1e-9


@dataclass(frozen=True)
class LabFrequencies:
    """Bare atom, mode and drive frequencies (omega_o, omega, omega_L)."""

    omega_atom: float
    omega_mode: float
    omega_laser: float


@dataclass(frozen=True)
class DriveParams:
    """
    Parameters of the driven Tavis-Cummings model.

    ``g_b`` and ``delta_b`` are present exactly when a second mode is coupled.
    When ``lab_frequencies`` is given, ``delta_atom`` and ``delta_a`` must
    equal omega_o - omega_L and omega - omega_L.
    """

    n_atoms: int
    g_a: float
    omega_drive: float = 0.0
    delta_atom: float = 0.0
    delta_a: float = 0.0
    g_b: Optional[float] = None
    delta_b: Optional[float] = None
    lab_frequencies: Optional[LabFrequencies] = None

    def __post_init__(self):
        if self.n_atoms < 0:
            raise RegimeError(f"n_atoms must be >= 0, got {self.n_atoms}")
        if (self.g_b is None) != (self.delta_b is None):
            raise RegimeError("g_b and delta_b must be given together")
        for name in ('g_a', 'omega_drive', 'delta_atom', 'delta_a', 'g_b', 'delta_b'):
            value = getattr(self, name)
            if value is not None and not isfinite(value):
                raise RegimeError(f"{name} must be finite, got {value}")
        for name in ('g_a', 'omega_drive', 'g_b'):
            value = getattr(self, name)
            if value is not None and value < 0:
                raise RegimeError(f"{name} must be >= 0, got {value}")
        lab = self.lab_frequencies
        if lab is not None:
            if abs(lab.omega_atom - lab.omega_laser - self.delta_atom) > FREQUENCY_MATCH_TOLERANCE:
                raise RegimeError("delta_atom must equal omega_atom - omega_laser")
            if abs(lab.omega_mode - lab.omega_laser - self.delta_a) > FREQUENCY_MATCH_TOLERANCE:
                raise RegimeError("delta_a must equal omega_mode - omega_laser")

    @property
    def g(self):
        return self.g_a

    @property
    def delta(self):
        return self.delta_a

    @property
    def two_mode(self):
        return self.g_b is not None

    def couplings(self):
        """(g, delta) for each coupled mode, in mode order."""
        pairs = [(self.g_a, self.delta_a)]
        if self.two_mode:
            pairs.append((self.g_b, self.delta_b))
        return pairs

    def updated(self, **changes):
        return replace(self, **changes)

    def check_layout(self, layout):
        """Verify that atom and mode counts agree with the layout."""
        if layout.n_atoms != self.n_atoms:
            raise LayoutError(f"Parameters describe {self.n_atoms} atom(s), layout has {layout.n_atoms}")
        expected_modes = 2 if self.two_mode else 1
        if layout.n_modes != expected_modes:
            raise LayoutError(
                f"Parameters couple {expected_modes} mode(s), layout has {layout.n_modes}"
            )

    @classmethod
    def from_lab(cls, n_atoms, g, omega_drive, lab_frequencies):
        """Single-mode parameters with detunings derived from lab frequencies."""
        return cls(
            n_atoms=n_atoms,
            g_a=g,
            omega_drive=omega_drive,
            delta_atom=lab_frequencies.omega_atom - lab_frequencies.omega_laser,
            delta_a=lab_frequencies.omega_mode - lab_frequencies.omega_laser,
            lab_frequencies=lab_frequencies,
        )
