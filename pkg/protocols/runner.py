"""
Protocol execution and RWA sweeps.

A run evolves the protocol's initial state under the configured Hamiltonian
level, records every sample in the output picture and compares it with the
closed-form target. Fidelities are always taken in the interaction picture,
where the targets are written.
"""

import logging
from dataclasses import dataclass, field
from typing import Optional

from celery import group
from django.conf import settings

from analysis.measurement import measure_qubits, outcome as pick_outcome
from analysis.metrics import entropy, fidelity, mean_photon_number, partial_trace
from dynamics.evolution import Picture, TimeGrid, change_picture, evolve_static, propagate_timedep
from dynamics.hamiltonians import HamiltonianLevel, build_hamiltonian
from dynamics.params import DriveParams
from hilbert.exceptions import ConfigError, DegenerateStateError, NumericalGuardError
from hilbert.layout import make_layout

from .registry import MeasurementStep, get_protocol
from .utils import RunTimer

logger = logging.getLogger(__name__)

RECORD_NORM_TOLERANCE = 1e-8
MODE_METRIC_NAMES = ('photons_a', 'photons_b')


@dataclass(frozen=True)
class TimeSpec:
    """
    Samples on [0, t_end]; ``dt`` is derived from the Hamiltonian when None.

    The initial state is prepared at t = 0, where every picture coincides.
    """

    t_end: float
    samples: int
    dt: Optional[float] = None

    def grid(self, omega_max):
        dt = self.dt if self.dt is not None else TimeGrid.max_step(omega_max)
        return TimeGrid.uniform(self.t_end, self.samples, dt)


@dataclass(frozen=True)
class ProtocolConfig:
    """Validated description of one protocol run."""

    protocol: str
    params: DriveParams
    cutoffs: tuple
    level: HamiltonianLevel
    time: TimeSpec
    picture: Picture = Picture.INTERACTION
    measurement: Optional[MeasurementStep] = None

    @property
    def recipe(self):
        return get_protocol(self.protocol)

    def layout(self):
        return make_layout(self.params.n_atoms, list(self.cutoffs))


@dataclass
class ProtocolResult:
    """
    Sampled states and metric series of one run.

    ``states`` holds (t, Ket) pairs in the output picture; every metric series
    has one entry per sample (None where a post-selected value is undefined).
    """

    protocol: str
    config: dict
    times: list
    states: list
    metrics: dict = field(default_factory=dict)
    summary: dict = field(default_factory=dict)
    version: str = ''


def _evolve(H, psi0, grid):
    """Exact exponentials for static levels, midpoint stepping otherwise."""
    if H.static:
        return evolve_static(H(0.0), psi0, grid.sample_times)
    return propagate_timedep(H, psi0, grid)


def _to_interaction(samples, level, params):
    """Full rotating-frame states are moved into the interaction picture."""
    if level is not HamiltonianLevel.FULL_ROTATING:
        return samples
    return [(t, change_picture(psi, t, Picture.ROTATING, Picture.INTERACTION, params)) for t, psi in samples]


def evolve_level(params, layout, level, psi0, time_spec):
    """
    Evolve ``psi0`` under one Hamiltonian level.

    Returns:
        list of (t, Ket) in the interaction picture
    """
    level = HamiltonianLevel(level)
    H = build_hamiltonian(level, params, layout)
    grid = time_spec.grid(H.omega_max)
    return _to_interaction(_evolve(H, psi0, grid), level, params)


def _measurement_metrics(config, psi, t):
    """Outcome probability and post-selected fidelity for one sample."""
    step = config.measurement
    recipe = config.recipe
    state = change_picture(psi, t, Picture.INTERACTION, step.picture, config.params)
    chosen = pick_outcome(measure_qubits(state, step.atoms, step.basis), step.outcome)
    postselected = None
    if not chosen.absent and chosen.conditional is not None and recipe.postselected is not None:
        try:
            expected = recipe.postselected(config.params, t, chosen.conditional.layout, step.outcome)
        except DegenerateStateError:
            expected = None
        if expected is not None:
            postselected = fidelity(chosen.conditional, expected)
    return chosen.probability, postselected


def run_protocol(config):
    """
    Run one protocol.

    Args:
        config: ProtocolConfig

    Returns:
        ProtocolResult with states in ``config.picture`` and the metric series
        fidelity, entropy (atoms vs field), photons_a[, photons_b] and, with a
        measurement, outcome_probability and postselected_fidelity
    """
    from drivenqed import __version__
    from .serializers import config_to_dict

    recipe = config.recipe
    layout = config.layout()
    params = config.params
    with RunTimer(f"protocol {config.protocol} ({config.level.value})"):
        samples = evolve_level(params, layout, config.level, recipe.initial_state(layout), config.time)
        metrics = {'fidelity': [], 'entropy': []}
        for name in MODE_METRIC_NAMES[:layout.n_modes]:
            metrics[name] = []
        if config.measurement is not None:
            metrics['outcome_probability'] = []
            metrics['postselected_fidelity'] = []
        states = []
        for t, psi in samples:
            if abs(psi.norm - 1.0) > RECORD_NORM_TOLERANCE:
                raise NumericalGuardError(f"State at t={t} has norm {psi.norm:.12f}")
            metrics['fidelity'].append(fidelity(psi, recipe.target(params, t, layout, config.level)))
            metrics['entropy'].append(entropy(partial_trace(psi, layout.atom_indices)))
            for name, index in zip(MODE_METRIC_NAMES, layout.mode_indices):
                metrics[name].append(mean_photon_number(psi, index))
            if config.measurement is not None:
                probability, postselected = _measurement_metrics(config, psi, t)
                metrics['outcome_probability'].append(probability)
                metrics['postselected_fidelity'].append(postselected)
            states.append((t, change_picture(psi, t, Picture.INTERACTION, config.picture, params)))
    result = ProtocolResult(
        protocol=config.protocol,
        config=config_to_dict(config),
        times=[t for t, _ in states],
        states=states,
        metrics=metrics,
        version=__version__,
    )
    result.summary = summarize(result)
    logger.info(
        f"{config.protocol}: {len(states)} samples to t={result.times[-1]:.4f}, "
        f"final fidelity {result.summary['final_fidelity']:.10f}"
    )
    return result


def summarize(result):
    """Final and extreme values of the metric series."""
    summary = {
        'samples': len(result.times),
        'final_time': result.times[-1],
        'final_fidelity': result.metrics['fidelity'][-1],
        'min_fidelity': min(result.metrics['fidelity']),
        'final_entropy': result.metrics['entropy'][-1],
    }
    for name in MODE_METRIC_NAMES:
        if name in result.metrics:
            summary[f'final_{name}'] = result.metrics[name][-1]
    if 'outcome_probability' in result.metrics:
        summary['final_outcome_probability'] = result.metrics['outcome_probability'][-1]
        summary['final_postselected_fidelity'] = result.metrics['postselected_fidelity'][-1]
    return summary


def max_omega_ratio():
    return float(getattr(settings, 'DRIVENQED_MAX_OMEGA_RATIO', 1000))


def sweep_point(config, omega_ratio, t, level=HamiltonianLevel.FULL_ROTATING, reference=HamiltonianLevel.EFFECTIVE):
    """
    Infidelity between two Hamiltonian levels at one drive strength.

    Both levels start from the protocol's initial state; the states at ``t``
    are compared in the interaction picture.
    """
    recipe = config.recipe
    params = config.params.updated(omega_drive=omega_ratio * config.params.g)
    layout = config.layout()
    psi0 = recipe.initial_state(layout)
    spec = TimeSpec(t_end=t, samples=1, dt=config.time.dt)
    with RunTimer(f"sweep point {config.protocol} omega/g={omega_ratio:g}"):
        _, evolved = evolve_level(params, layout, level, psi0, spec)[-1]
        _, expected = evolve_level(params, layout, reference, psi0, spec)[-1]
    return {'omega_ratio': float(omega_ratio), 'infidelity': max(1.0 - fidelity(evolved, expected), 0.0)}


def rwa_sweep(config, omega_values, t=1.0, level=HamiltonianLevel.FULL_ROTATING, reference=HamiltonianLevel.EFFECTIVE):
    """
    Infidelity of the rotating-wave approximation against drive strength.

    Points are dispatched as celery tasks and collected in input order.

    Args:
        config: ProtocolConfig providing the protocol and base parameters
        omega_values: two or more drive strengths in units of g
        t: comparison time in units of 1/g

    Returns:
        list of {'omega_ratio', 'infidelity'} rows
    """
    from .serializers import config_to_dict
    from .tasks import evaluate_sweep_point

    omega_values = [float(value) for value in omega_values]
    if len(omega_values) < 2:
        raise ConfigError([f"omega: at least two drive strengths are required, got {len(omega_values)}"])
    limit = max_omega_ratio()
    errors = [
        f"omega.{i}: {value:g} outside (0, {limit:g}]"
        for i, value in enumerate(omega_values) if not 0 < value <= limit
    ]
    if errors:
        raise ConfigError(errors)
    data = config_to_dict(config)
    level, reference = HamiltonianLevel(level).value, HamiltonianLevel(reference).value
    job = group(
        evaluate_sweep_point.s(data, value, t / config.params.g, level, reference) for value in omega_values
    )
    rows = [point.get() for point in job.apply_async().results]
    logger.info(f"RWA sweep of {config.protocol}: {len(rows)} points")
    return rows
