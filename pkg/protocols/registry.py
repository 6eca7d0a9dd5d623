"""
Named protocol recipes.

Each protocol fixes the atom and mode counts, the initial state, the default
Hamiltonian level, a canonical stop time and the closed-form target the
evolved state is compared with. Protocols that end with an atom measurement
also carry the default measurement and the field state it should leave.
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from dynamics.evolution import Picture
from dynamics.hamiltonians import HamiltonianLevel
from hilbert.exceptions import ConfigError
from hilbert.states import Ket, basis_ket
from analysis.measurement import MeasurementBasis
from targets import predictions

CAT_STOP_TIME = 2.0
RABI_STOP_TIME = 2 * np.pi
BELL_STOP_TIME = np.sqrt(2) * np.pi / 4

PROTOCOL_LEVELS = (
    HamiltonianLevel.FULL_ROTATING,
    HamiltonianLevel.INTERACTION,
    HamiltonianLevel.EFFECTIVE,
    HamiltonianLevel.DRESSED_JC,
    HamiltonianLevel.DRESSED_AJC,
)


def outcome_problem(atoms, basis, outcome):
    """Describe why ``outcome`` cannot label a measurement of ``atoms``, or return None."""
    basis = MeasurementBasis(basis)
    allowed = {'g', 'e'} if basis is MeasurementBasis.BARE else {'+', '-'}
    if len(outcome) != len(set(atoms)) or set(outcome) - allowed:
        return f"{outcome!r} is not a {basis.value} outcome for {len(set(atoms))} atom(s)"
    return None


@dataclass(frozen=True)
class MeasurementStep:
    """
    Projective measurement of ``atoms`` in ``basis``, post-selected on ``outcome``.

    The measurement acts on the state expressed in ``picture``.
    """

    atoms: tuple
    basis: MeasurementBasis
    outcome: str
    picture: Picture = Picture.INTERACTION

    def __post_init__(self):
        object.__setattr__(self, 'picture', Picture(self.picture))
        object.__setattr__(self, 'atoms', tuple(sorted(set(self.atoms))))
        object.__setattr__(self, 'basis', MeasurementBasis(self.basis))
        problem = outcome_problem(self.atoms, self.basis, self.outcome)
        if problem:
            raise ConfigError([f"measurement.outcome: {problem}"])


@dataclass(frozen=True)
class Protocol:
    """
    Recipe for one end-to-end scenario.

    ``target(params, t, layout, level)`` returns the expected full state in
    the interaction picture. ``postselected(params, t, field_layout, outcome)``
    returns the expected field after the measurement, or None when the
    outcome has no closed form.
    """

    name: str
    n_atoms: int
    n_modes: int
    initial_levels: tuple
    default_level: HamiltonianLevel
    stop_time: float
    target: Callable
    resonant: bool = False
    equal_couplings: bool = False
    measurement: Optional[MeasurementStep] = None
    postselected: Optional[Callable] = None
    cutoff: Optional[Callable] = None

    def default_cutoffs(self):
        if self.cutoff is not None:
            return [self.cutoff()] * self.n_modes
        if self.n_modes == 2:
            return [predictions.two_mode_cutoff()] * 2
        return [predictions.single_mode_cutoff()]

    def initial_state(self, layout):
        return basis_ket(layout, list(self.initial_levels))

    def canonical_time(self, params):
        return self.stop_time / params.g

    def validate(self, params, cutoffs):
        """
        Collect protocol constraints violated by ``params`` and ``cutoffs``.

        Returns:
            list of (field path, message) pairs
        """
        errors = []
        if params.n_atoms != self.n_atoms:
            errors.append(('params.n_atoms', f"{self.name} needs {self.n_atoms} atom(s), got {params.n_atoms}"))
        modes = 2 if params.two_mode else 1
        if modes != self.n_modes:
            errors.append((
                'params',
                f"{self.name} couples {self.n_modes} mode(s); "
                f"g_b and delta_b must be {'given' if self.n_modes == 2 else 'omitted'}",
            ))
        if len(cutoffs) != self.n_modes:
            errors.append(('cutoffs', f"{self.name} needs {self.n_modes} cutoff(s), got {len(cutoffs)}"))
        if params.delta_atom != 0.0:
            errors.append(('params.delta_atom', "protocols are defined for delta_atom = 0"))
        if self.resonant:
            for name, delta in (('delta_a', params.delta_a), ('delta_b', params.delta_b)):
                if delta not in (None, 0.0):
                    errors.append((f'params.{name}', f"{self.name} needs resonant modes, got {delta}"))
        if self.equal_couplings and params.two_mode:
            if params.g_a != params.g_b:
                errors.append(('params.g_b', f"{self.name} needs g_b == g_a, got {params.g_b} and {params.g_a}"))
            if params.delta_a != params.delta_b:
                errors.append(('params.delta_b', f"{self.name} needs delta_b == delta_a"))
        if params.g_a <= 0:
            errors.append(('params.g_a', "must be positive"))
        return errors


def _mode_parity(psi, layout):
    """Apply (-1)^n on every mode, i.e. a -> -a."""
    parity = np.ones(layout.dims)
    for index in layout.mode_indices:
        shape = [1] * len(layout)
        shape[index] = layout.dims[index]
        parity = parity * ((-1.0) ** np.arange(layout.dims[index])).reshape(shape)
    return Ket(layout, psi.amplitudes * parity.reshape(-1), normalized=psi.normalized)


def _cat1(params, t, layout, level):
    return predictions.target_cat1(params, t, layout)


def _cat2(params, t, layout, level):
    return predictions.target_cat2(params, t, layout)


def _two_mode_cat(params, t, layout, level):
    return predictions.target_two_mode_cat(params, t, layout)


def _jc_rabi(params, t, layout, level):
    return predictions.target_dressed_rabi(params, t, 1, layout)


def _ajc_rabi(params, t, layout, level):
    psi = predictions.target_dressed_rabi(params, t, -1, layout)
    # The undressed models reach the anti-JC form with a -> -a.
    if level in (HamiltonianLevel.FULL_ROTATING, HamiltonianLevel.INTERACTION):
        return _mode_parity(psi, layout)
    return psi


def _mode_bell(params, t, layout, level):
    return predictions.target_mode_bell_evolution(params, t, layout)


def _jc_ramsey(params, t, layout, level):
    return predictions.target_ramsey_jc(params, t, layout)


def _triple_cat_field(params, t, field, outcome):
    if outcome != 'gg':
        return None
    return predictions.target_triple_cat(params, t, field)


def _entangled_field(params, t, field, outcome):
    return predictions.target_entangled_coherent(params, t, 1 if outcome == 'g' else -1, field)


def _bell_field(params, t, field, outcome):
    if outcome != '-':
        return None
    return predictions.target_mode_bell(field)


PROTOCOLS = {
    protocol.name: protocol
    for protocol in (
        Protocol(
            name='cat1', n_atoms=1, n_modes=1, initial_levels=('g', 0),
            default_level=HamiltonianLevel.EFFECTIVE, stop_time=CAT_STOP_TIME, target=_cat1,
        ),
        Protocol(
            name='cat2', n_atoms=2, n_modes=1, initial_levels=('g', 'g', 0),
            default_level=HamiltonianLevel.EFFECTIVE, stop_time=CAT_STOP_TIME, target=_cat2,
            resonant=True, cutoff=predictions.cat2_cutoff,
        ),
        Protocol(
            name='triple-cat', n_atoms=2, n_modes=1, initial_levels=('g', 'g', 0),
            default_level=HamiltonianLevel.EFFECTIVE, stop_time=CAT_STOP_TIME, target=_cat2,
            resonant=True, cutoff=predictions.cat2_cutoff,
            measurement=MeasurementStep((0, 1), MeasurementBasis.BARE, 'gg', Picture.ROTATING),
            postselected=_triple_cat_field,
        ),
        Protocol(
            name='jc-rabi', n_atoms=1, n_modes=1, initial_levels=('+', 0),
            default_level=HamiltonianLevel.DRESSED_JC, stop_time=RABI_STOP_TIME, target=_jc_rabi,
        ),
        Protocol(
            name='ajc-rabi', n_atoms=1, n_modes=1, initial_levels=('-', 0),
            default_level=HamiltonianLevel.DRESSED_AJC, stop_time=RABI_STOP_TIME, target=_ajc_rabi,
        ),
        Protocol(
            name='two-mode-cat', n_atoms=1, n_modes=2, initial_levels=('g', 0, 0),
            default_level=HamiltonianLevel.EFFECTIVE, stop_time=CAT_STOP_TIME, target=_two_mode_cat,
            resonant=True,
        ),
        Protocol(
            name='entangled-coherent', n_atoms=1, n_modes=2, initial_levels=('g', 0, 0),
            default_level=HamiltonianLevel.EFFECTIVE, stop_time=CAT_STOP_TIME, target=_two_mode_cat,
            resonant=True,
            measurement=MeasurementStep((0,), MeasurementBasis.BARE, 'g', Picture.ROTATING),
            postselected=_entangled_field,
        ),
        Protocol(
            name='mode-bell', n_atoms=1, n_modes=2, initial_levels=('+', 0, 0),
            default_level=HamiltonianLevel.DRESSED_JC, stop_time=BELL_STOP_TIME, target=_mode_bell,
            equal_couplings=True,
            measurement=MeasurementStep((0,), MeasurementBasis.DRESSED, '-'),
            postselected=_bell_field,
        ),
        Protocol(
            name='jc-ramsey', n_atoms=1, n_modes=1, initial_levels=('g', 0),
            default_level=HamiltonianLevel.DRESSED_JC, stop_time=RABI_STOP_TIME, target=_jc_ramsey,
            measurement=MeasurementStep((0,), MeasurementBasis.BARE, 'g'),
        ),
    )
}


def get_protocol(name):
    try:
        return PROTOCOLS[name]
    except KeyError:
        raise ConfigError([f"protocol: unknown protocol {name!r}; choose from {', '.join(PROTOCOLS)}"])
