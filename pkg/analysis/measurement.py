"""
Projective measurement of atoms.

Measurements return the full outcome distribution; ``sample_outcome`` picks
one outcome with an explicit seed.
"""

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from hilbert.exceptions import LayoutError, NumericalGuardError
from hilbert.layout import Qubit
from hilbert.states import Ket, excited, ground, minus, plus

ABSENT_PROBABILITY = 1e-14


class MeasurementBasis(str, Enum):
    BARE = 'bare'
    DRESSED = 'dressed'

    def vectors(self):
        if self is MeasurementBasis.BARE:
            return (('g', ground()), ('e', excited()))
        return (('+', plus()), ('-', minus()))


@dataclass(frozen=True)
class MeasurementOutcome:
    """
    One branch of a projective measurement.

    ``post_state`` is the normalised collapsed state on the full layout and
    ``conditional`` the state of the unmeasured subsystems. Both are None when
    the branch has (numerically) zero probability.
    """

    label: str
    probability: float
    post_state: Optional[Ket] = None
    conditional: Optional[Ket] = None

    @property
    def absent(self):
        return self.post_state is None


def measure_qubits(psi, atom_indices, basis=MeasurementBasis.BARE):
    """
    Joint projective measurement of several atoms.

    Args:
        psi: normalised Ket
        atom_indices: atoms to measure
        basis: 'bare' ({g, e}) or 'dressed' ({+, -})

    Returns:
        list of MeasurementOutcome, labels such as "gg" or "+-" in the order
        of ``atom_indices`` sorted ascending
    """
    if not psi.normalized:
        raise NumericalGuardError("Measurement needs a normalized state")
    basis = MeasurementBasis(basis)
    layout = psi.layout
    indices = sorted(set(atom_indices))
    if not indices:
        raise LayoutError("Nothing to measure")
    for index in indices:
        layout.check_index(index, Qubit)
    remaining = [i for i in range(len(layout)) if i not in indices]
    remaining_layout = layout.subset(remaining) if remaining else None
    outcomes = []
    for branch in itertools.product(basis.vectors(), repeat=len(indices)):
        label = ''.join(name for name, _ in branch)
        vectors = [vector for _, vector in branch]
        conditional = psi.tensor()
        for index, vector in sorted(zip(indices, vectors), key=lambda pair: -pair[0]):
            conditional = np.tensordot(conditional, vector.conj(), axes=([index], [0]))
        probability = float(np.real(np.vdot(conditional, conditional)))
        if probability < ABSENT_PROBABILITY:
            outcomes.append(MeasurementOutcome(label, 0.0 if probability < 0 else probability))
            continue
        conditional = conditional / np.sqrt(probability)
        collapsed = conditional
        for index, vector in sorted(zip(indices, vectors)):
            collapsed = np.moveaxis(np.multiply.outer(vector, collapsed), 0, index)
        outcomes.append(MeasurementOutcome(
            label,
            probability,
            post_state=Ket(layout, collapsed.reshape(-1)).normalize(),
            conditional=Ket(remaining_layout, conditional.reshape(-1)).normalize() if remaining_layout else None,
        ))
    return outcomes


def measure_qubit(psi, atom_index, basis=MeasurementBasis.BARE):
    """Projective measurement of a single atom; two outcomes."""
    return measure_qubits(psi, [atom_index], basis)


def outcome(outcomes, label):
    """Pick the outcome with the given label."""
    for item in outcomes:
        if item.label == label:
            return item
    raise LayoutError(f"No outcome labelled {label!r}; have {[item.label for item in outcomes]}")


def sample_outcome(outcomes, seed=None):
    """Draw one outcome according to its probability with a seeded generator."""
    rng = np.random.default_rng(seed)
    probabilities = np.array([item.probability for item in outcomes])
    return outcomes[int(rng.choice(len(outcomes), p=probabilities / probabilities.sum()))]
