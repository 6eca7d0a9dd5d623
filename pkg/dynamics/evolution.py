"""
Time evolution and picture changes.

Static Hamiltonians are exponentiated exactly through a Hermitian
eigendecomposition. Time-dependent Hamiltonians are integrated with the
midpoint exponential (second-order Magnus) rule, each step being an exact
unitary. Pictures are related by the analytic free evolution e^{-i H_o t} and
by the drive-frame rotation e^{-i w_L t N} with N the excitation number.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from math import ceil

import numpy as np
from scipy.linalg import eigh

from hilbert.exceptions import LayoutError, NumericalGuardError, RegimeError
from hilbert.operators import OperatorMatrix, excitation_number
from hilbert.states import Ket

from .hamiltonians import free_spectrum

logger = logging.getLogger(__name__)

STEP_SAFETY = 0.01
NORM_DRIFT_LIMIT = 1e-8
HERMITIAN_INPUT_TOLERANCE = 1e-12


class Picture(str, Enum):
    """Reference frames, ordered from the interaction picture outwards."""

    INTERACTION = 'interaction'
    ROTATING = 'drive-rotating'
    LAB = 'lab'


PICTURE_ORDER = (Picture.INTERACTION, Picture.ROTATING, Picture.LAB)


@dataclass(frozen=True)
class TimeGrid:
    """
    Integration window, step and sampling times.

    ``sample_times`` is sorted and lies inside [t_start, t_end].
    """

    t_start: float
    t_end: float
    dt: float
    sample_times: tuple

    def __post_init__(self):
        if self.dt <= 0:
            raise NumericalGuardError(f"dt must be positive, got {self.dt}")
        if self.t_end < self.t_start:
            raise NumericalGuardError("t_end must not precede t_start")
        samples = tuple(float(t) for t in self.sample_times)
        if not samples:
            raise NumericalGuardError("A time grid needs at least one sample time")
        if list(samples) != sorted(samples):
            raise NumericalGuardError("sample_times must be sorted")
        if samples[0] < self.t_start or samples[-1] > self.t_end:
            raise NumericalGuardError("sample_times must lie inside [t_start, t_end]")
        object.__setattr__(self, 'sample_times', samples)

    @classmethod
    def uniform(cls, t_end, n_samples, dt, t_start=0.0):
        """Grid with ``n_samples`` evenly spaced samples including both ends."""
        if n_samples < 1:
            raise NumericalGuardError("n_samples must be >= 1")
        samples = np.linspace(t_start, t_end, n_samples) if n_samples > 1 else [t_end]
        return cls(t_start, t_end, dt, tuple(samples))

    @staticmethod
    def max_step(omega_max):
        """Largest admissible dt for a Hamiltonian with the given omega_max."""
        return STEP_SAFETY / omega_max if omega_max > 0 else STEP_SAFETY

    def check_step(self, omega_max):
        if omega_max > 0 and self.dt > STEP_SAFETY / omega_max * (1 + 1e-12):
            raise NumericalGuardError(
                f"dt={self.dt} exceeds {STEP_SAFETY}/omega_max = {STEP_SAFETY / omega_max:.3e}"
            )


def _check_hermitian(H):
    if not H.is_hermitian(HERMITIAN_INPUT_TOLERANCE):
        raise NumericalGuardError(
            f"Hamiltonian is not Hermitian (relative defect {H.hermiticity_defect():.2e})"
        )


def _exp_hermitian(entries, t):
    """e^{-i H t} for a Hermitian matrix via eigh."""
    energies, vectors = eigh(entries)
    return (vectors * np.exp(-1j * energies * t)) @ vectors.conj().T


def _checked_ket(layout, amplitudes):
    drift = abs(np.linalg.norm(amplitudes) - 1.0)
    if drift > NORM_DRIFT_LIMIT:
        raise NumericalGuardError(f"Norm drifted by {drift:.2e} during evolution")
    return Ket(layout, amplitudes / np.linalg.norm(amplitudes), normalized=True)


def _require_normalized(psi):
    if not psi.normalized:
        raise NumericalGuardError("Initial state must be normalized")


def propagator(H, t):
    """Unitary e^{-i H t} of a static Hermitian operator."""
    _check_hermitian(H)
    return OperatorMatrix(H.layout, _exp_hermitian(H.entries, t))


def evolve_static(H, psi0, times):
    """
    Exact evolution of ``psi0`` under a static H at several times.

    The eigendecomposition is computed once and reused.

    Returns:
        list of (t, Ket)
    """
    _check_hermitian(H)
    _require_normalized(psi0)
    if H.layout != psi0.layout:
        raise LayoutError("Hamiltonian and state act on different layouts")
    energies, vectors = eigh(H.entries)
    coefficients = vectors.conj().T @ psi0.amplitudes
    return [
        (float(t), _checked_ket(psi0.layout, vectors @ (np.exp(-1j * energies * t) * coefficients)))
        for t in times
    ]


def propagate_static(H, psi0, t):
    """Return e^{-i H t}|psi0>."""
    return evolve_static(H, psi0, [t])[0][1]


def propagate_timedep(H, psi0, grid):
    """
    Midpoint-exponential stepping of a time-dependent Hamiltonian.

    Each interval between consecutive sample times is split into the fewest
    equal steps no longer than ``grid.dt``; each step applies
    e^{-i H(t + h/2) h}.

    Args:
        H: TimeDependentOperator
        psi0: normalized Ket at grid.t_start
        grid: TimeGrid

    Returns:
        list of (t, Ket) at grid.sample_times
    """
    grid.check_step(H.omega_max)
    _require_normalized(psi0)
    if H.layout != psi0.layout:
        raise LayoutError("Hamiltonian and state act on different layouts")
    step_cache = {}
    psi = psi0.amplitudes.copy()
    t = grid.t_start
    samples = []
    n_steps = 0
    for target in grid.sample_times:
        span = target - t
        if span > 0:
            count = max(1, ceil(span / grid.dt - 1e-9))
            h = span / count
            for k in range(count):
                midpoint = t + (k + 0.5) * h
                if H.static:
                    key = round(h, 15)
                    if key not in step_cache:
                        step_cache[key] = _exp_hermitian(H(midpoint).entries, h)
                    psi = step_cache[key] @ psi
                else:
                    psi = _exp_hermitian(H(midpoint).entries, h) @ psi
            n_steps += count
            t = target
        samples.append((float(target), _checked_ket(psi0.layout, psi)))
        psi = samples[-1][1].amplitudes.copy()
    logger.debug(f"Stepped {n_steps} midpoint steps over [{grid.t_start}, {grid.t_end}]")
    return samples


def _free_rotation(psi, t, params, sign):
    """Apply e^{sign * i H_o t}; sign=-1 maps interaction -> drive-rotating."""
    if params.delta_atom != 0.0:
        raise RegimeError("The interaction picture is defined for delta_atom = 0 only")
    energies, basis = free_spectrum(params, psi.layout)
    coefficients = basis.conj().T @ psi.amplitudes
    return Ket(psi.layout, basis @ (np.exp(sign * 1j * energies * t) * coefficients), normalized=psi.normalized)


def _drive_rotation(psi, t, params, sign):
    """Apply e^{sign * i w_L t N}; sign=-1 maps drive-rotating -> lab."""
    if params.lab_frequencies is None:
        raise RegimeError("The lab picture needs lab_frequencies")
    occupation = np.real(np.diag(excitation_number(psi.layout).entries))
    phases = np.exp(sign * 1j * params.lab_frequencies.omega_laser * t * occupation)
    return Ket(psi.layout, phases * psi.amplitudes, normalized=psi.normalized)


def change_picture(psi, t, source, target, params):
    """
    Transform a state at time t between pictures.

    interaction -> drive-rotating applies e^{-i H_o t};
    drive-rotating -> lab applies e^{-i w_L t N}. The reverse directions
    apply the inverse unitaries.

    Args:
        psi: Ket in the ``source`` picture
        t: time
        source, target: Picture or its string value
        params: DriveParams (lab needs lab_frequencies)

    Returns:
        Ket in the ``target`` picture
    """
    source, target = Picture(source), Picture(target)
    params.check_layout(psi.layout)
    start, stop = PICTURE_ORDER.index(source), PICTURE_ORDER.index(target)
    steps = {
        (0, 1): lambda state: _free_rotation(state, t, params, -1),
        (1, 0): lambda state: _free_rotation(state, t, params, 1),
        (1, 2): lambda state: _drive_rotation(state, t, params, -1),
        (2, 1): lambda state: _drive_rotation(state, t, params, 1),
    }
    direction = 1 if stop > start else -1
    for position in range(start, stop, direction):
        psi = steps[(position, position + direction)](psi)
    return psi
