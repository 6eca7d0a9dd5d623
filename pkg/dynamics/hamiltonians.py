"""
Hamiltonian builders for the driven atom-cavity model.

Every frame and approximation level is available for one and two cavity
modes: the lab frame, the frame rotating with the drive, the interaction
picture with respect to H_o = sum_k delta_k n_k + Omega sum_j sigma_x, the
strong-driving effective Hamiltonian and the dressed-basis (anti-)JC forms.

Regime conditions such as Omega >> g or delta = +-2 Omega are caller
assertions. Builders accept out-of-regime parameters so approximation errors
can be measured.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from functools import reduce
from typing import Callable

import numpy as np

from hilbert.exceptions import LayoutError, RegimeError
from hilbert.layout import HilbertLayout
from hilbert.operators import (
    OperatorMatrix, boson_ops, dressed_ops, number_op, qubit_ops, zeros,
)
from hilbert.states import minus, plus

logger = logging.getLogger(__name__)


class HamiltonianLevel(str, Enum):
    """Frame/approximation level of a Hamiltonian."""

    LAB = 'lab'
    FULL_ROTATING = 'full-rotating'
    INTERACTION = 'interaction'
    EFFECTIVE = 'effective'
    DRESSED_JC = 'dressed-jc'
    DRESSED_AJC = 'dressed-ajc'


@dataclass(frozen=True)
class TimeDependentOperator:
    """
    Hermitian operator-valued function of time.

    ``omega_max`` is the largest angular frequency of the explicit time
    dependence and controls the stepper's maximum step. ``static`` marks
    operators whose value does not depend on t.
    """

    evaluate: Callable[[float], OperatorMatrix]
    layout: HilbertLayout
    omega_max: float = 0.0
    static: bool = False

    def __call__(self, t):
        return self.evaluate(t)

    @classmethod
    def constant(cls, operator):
        """Wrap a time-independent operator."""
        return cls(lambda t: operator, operator.layout, omega_max=0.0, static=True)


def _require_modes(params, layout, count):
    params.check_layout(layout)
    if layout.n_modes != count:
        kind = "single-mode" if count == 1 else "two-mode"
        raise LayoutError(f"This builder needs a {kind} layout, got {layout.n_modes} mode(s)")


def _require_resonant_atoms(params):
    if params.delta_atom != 0.0:
        raise RegimeError("Interaction-picture builders are defined for delta_atom = 0 only")


def _check_sign(sign):
    if sign not in (1, -1):
        raise RegimeError(f"sign must be +1 or -1, got {sign}")


def _mode_ladders(params, layout):
    """(g, delta, a) for every coupled mode."""
    return [
        (g, delta, boson_ops(layout, mode_index)[0])
        for (g, delta), mode_index in zip(params.couplings(), layout.mode_indices)
    ]


def _sum(layout, operators):
    return reduce(lambda left, right: left + right, operators, zeros(layout))


def _collective_sigma_x(layout):
    return _sum(layout, (qubit_ops(layout, j)[2] for j in layout.atom_indices))


def _collective_dressed(layout):
    """Collective P+ - P-, S+ = sum |+><-| and S- = sum |-><+|."""
    z, s_plus, s_minus = zeros(layout), zeros(layout), zeros(layout)
    for j in layout.atom_indices:
        p_plus, p_minus, up, down = dressed_ops(layout, j)
        z = z + p_plus - p_minus
        s_plus = s_plus + up
        s_minus = s_minus + down
    return z, s_plus, s_minus


def free_hamiltonian(params, layout):
    """H_o = sum_k delta_k a_k^dagger a_k + Omega sum_j (sigma_x)_j."""
    params.check_layout(layout)
    modes = _sum(layout, (
        delta * number_op(layout, mode_index)
        for (_, delta), mode_index in zip(params.couplings(), layout.mode_indices)
    ))
    return modes + params.omega_drive * _collective_sigma_x(layout)


def interaction_hamiltonian(params, layout):
    """H_int = sum_k g_k sum_j (sigma_j^dagger a_k + sigma_j a_k^dagger)."""
    params.check_layout(layout)
    total = zeros(layout)
    for g, _, a in _mode_ladders(params, layout):
        for j in layout.atom_indices:
            sigma_minus, sigma_plus, _ = qubit_ops(layout, j)
            coupling = sigma_plus @ a
            total = total + g * (coupling + coupling.dagger())
    return total


def free_spectrum(params, layout):
    """
    Analytic eigen-decomposition of H_o in the dressed x Fock basis.

    Returns:
        tuple: (energies, basis) with H_o = basis @ diag(energies) @ basis^dagger
    """
    params.check_layout(layout)
    detunings = iter(delta for _, delta in params.couplings())
    local_bases, local_energies = [], []
    for subsystem_index, dim in enumerate(layout.dims):
        if subsystem_index in layout.atom_indices:
            local_bases.append(np.column_stack([plus(), minus()]))
            local_energies.append(np.array([params.omega_drive, -params.omega_drive]))
        else:
            local_bases.append(np.eye(dim, dtype=complex))
            local_energies.append(next(detunings) * np.arange(dim, dtype=float))
    basis = reduce(np.kron, local_bases)
    energies = reduce(lambda left, right: np.add.outer(left, right).reshape(-1), local_energies)
    return energies, basis


def free_evolution(params, layout, t):
    """e^{-i H_o t} built from the analytic spectrum."""
    energies, basis = free_spectrum(params, layout)
    return OperatorMatrix(layout, (basis * np.exp(-1j * energies * t)) @ basis.conj().T)


def build_lab_frame(params, layout):
    """
    Lab-frame Hamiltonian with an explicitly oscillating drive.

    H(t) = w_o sum sigma^dagger sigma + w a^dagger a
           + Omega sum (e^{-i w_L t} sigma^dagger + e^{i w_L t} sigma)
           + g sum (sigma^dagger a + sigma a^dagger)
    """
    _require_modes(params, layout, 1)
    lab = params.lab_frequencies
    if lab is None:
        raise RegimeError("The lab-frame Hamiltonian needs lab_frequencies")
    bare = zeros(layout)
    drive_up = zeros(layout)
    for j in layout.atom_indices:
        sigma_minus, sigma_plus, _ = qubit_ops(layout, j)
        bare = bare + lab.omega_atom * (sigma_plus @ sigma_minus)
        drive_up = drive_up + params.omega_drive * sigma_plus
    bare = bare + lab.omega_mode * number_op(layout, layout.mode_indices[0])
    bare = bare + interaction_hamiltonian(params, layout)
    drive_down = drive_up.dagger()

    def evaluate(t):
        return bare + np.exp(-1j * lab.omega_laser * t) * drive_up + np.exp(1j * lab.omega_laser * t) * drive_down

    return TimeDependentOperator(evaluate, layout, omega_max=abs(lab.omega_laser))


def build_rotating_frame(params, layout):
    """
    Time-independent Hamiltonian in the frame rotating with the drive.

    H^L = Delta sum sigma^dagger sigma + delta a^dagger a + Omega sum sigma_x
          + g sum (sigma^dagger a + sigma a^dagger)
    """
    _require_modes(params, layout, 1)
    atomic = zeros(layout)
    for j in layout.atom_indices:
        sigma_minus, sigma_plus, _ = qubit_ops(layout, j)
        atomic = atomic + params.delta_atom * (sigma_plus @ sigma_minus)
    return atomic + free_hamiltonian(params, layout) + interaction_hamiltonian(params, layout)


def _dressed_interaction(params, layout):
    """
    Interaction picture of H_int with respect to H_o, for any number of modes.

    (1/2) sum_j [P+ - P- + e^{2i Omega t}|+><-| - e^{-2i Omega t}|-><+|]_j
          sum_k g_k a_k e^{-i delta_k t} + H.c.
    """
    z, s_plus, s_minus = _collective_dressed(layout)
    terms = [
        (g, delta, z @ a, s_plus @ a, s_minus @ a)
        for g, delta, a in _mode_ladders(params, layout)
    ]
    omega = params.omega_drive

    def evaluate(t):
        half = zeros(layout)
        for g, delta, diagonal, up, down in terms:
            mode_phase = 0.5 * g * np.exp(-1j * delta * t)
            half = half + mode_phase * (
                diagonal + np.exp(2j * omega * t) * up - np.exp(-2j * omega * t) * down
            )
        return half + half.dagger()

    omega_max = 2.0 * omega + max(abs(delta) for _, delta in params.couplings())
    return TimeDependentOperator(evaluate, layout, omega_max=omega_max)


def _effective(params, layout):
    """(1/2) sum_j (sigma_x)_j sum_k g_k (a_k e^{-i delta_k t} + H.c.)."""
    sigma_x = _collective_sigma_x(layout)
    terms = [(g, delta, 0.5 * sigma_x @ a) for g, delta, a in _mode_ladders(params, layout)]
    static = all(delta == 0.0 for _, delta in params.couplings())

    def evaluate(t):
        half = _sum(layout, (g * np.exp(-1j * delta * t) * lowered for g, delta, lowered in terms))
        return half + half.dagger()

    if static:
        return TimeDependentOperator.constant(evaluate(0.0))
    omega_max = max(abs(delta) for _, delta in params.couplings())
    return TimeDependentOperator(evaluate, layout, omega_max=omega_max)


def build_interaction_picture(params, layout):
    """Single-mode interaction-picture Hamiltonian (Delta = 0 only)."""
    _require_modes(params, layout, 1)
    _require_resonant_atoms(params)
    return _dressed_interaction(params, layout)


def build_effective(params, layout):
    """Single-mode strong-driving effective Hamiltonian."""
    _require_modes(params, layout, 1)
    return _effective(params, layout)


def _dressed_jc(params, layout, sign, field):
    _check_sign(sign)
    _, s_plus, s_minus = _collective_dressed(layout)
    raising_atom = s_plus if sign == 1 else s_minus
    lowering = raising_atom @ field
    return (0.5 * params.g) * (lowering + lowering.dagger())


def build_dressed_jc(params, layout, sign):
    """
    Dressed-basis JC (sign=+1) or anti-JC (sign=-1) Hamiltonian.

    sign=+1: (g/2) sum (|+><-| a + |-><+| a^dagger)
    sign=-1: (g/2) sum (|-><+| a + |+><-| a^dagger)
    """
    _require_modes(params, layout, 1)
    a, _ = boson_ops(layout, layout.mode_indices[0])
    return _dressed_jc(params, layout, sign, a)


def build_two_mode_rotating(params, layout):
    """Two-mode Hamiltonian in the frame rotating with the drive (Delta = 0)."""
    _require_modes(params, layout, 2)
    _require_resonant_atoms(params)
    return free_hamiltonian(params, layout) + interaction_hamiltonian(params, layout)


def build_two_mode_interaction(params, layout):
    """Two-mode interaction-picture Hamiltonian."""
    _require_modes(params, layout, 2)
    _require_resonant_atoms(params)
    return _dressed_interaction(params, layout)


def build_two_mode_effective(params, layout):
    """Two-mode strong-driving effective Hamiltonian."""
    _require_modes(params, layout, 2)
    return _effective(params, layout)


def build_two_mode_dressed_jc(params, layout, sign):
    """
    Two-mode dressed JC / anti-JC Hamiltonian with equal couplings.

    sign=+1: (g/2) sum [|+><-| (a + b) + |-><+| (a^dagger + b^dagger)]
    """
    _require_modes(params, layout, 2)
    if params.g_a != params.g_b:
        raise RegimeError(f"The two-mode dressed JC form needs g_a == g_b, got {params.g_a} and {params.g_b}")
    a, _ = boson_ops(layout, layout.mode_indices[0])
    b, _ = boson_ops(layout, layout.mode_indices[1])
    return _dressed_jc(params, layout, sign, a + b)


def build_hamiltonian(level, params, layout):
    """
    Build the Hamiltonian of a given level as a TimeDependentOperator.

    Single- or two-mode builders are chosen from the layout.
    """
    level = HamiltonianLevel(level)
    two_mode = layout.n_modes == 2
    logger.debug(f"Building {level.value} Hamiltonian for layout dims {layout.dims}")
    if level is HamiltonianLevel.LAB:
        return build_lab_frame(params, layout)
    if level is HamiltonianLevel.FULL_ROTATING:
        builder = build_two_mode_rotating if two_mode else build_rotating_frame
        return TimeDependentOperator.constant(builder(params, layout))
    if level is HamiltonianLevel.INTERACTION:
        builder = build_two_mode_interaction if two_mode else build_interaction_picture
        return builder(params, layout)
    if level is HamiltonianLevel.EFFECTIVE:
        builder = build_two_mode_effective if two_mode else build_effective
        return builder(params, layout)
    sign = 1 if level is HamiltonianLevel.DRESSED_JC else -1
    builder = build_two_mode_dressed_jc if two_mode else build_dressed_jc
    return TimeDependentOperator.constant(builder(params, layout, sign))
