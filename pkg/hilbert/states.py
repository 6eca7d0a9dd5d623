"""
State vectors over a HilbertLayout.

This module provides the Ket value type, the single-subsystem kets used to
assemble product states, and the tensor-product constructor that follows the
layout's most-significant-first indexing convention.
"""

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .exceptions import DegenerateStateError, LayoutError
from .layout import BosonMode, HilbertLayout, Qubit

NORM_TOLERANCE = 1e-9
SQRT_HALF = 1.0 / np.sqrt(2.0)


@dataclass(frozen=True, eq=False)
class Ket:
    """
    Complex amplitude vector over a layout.

    The amplitude array is copied and frozen on construction. When
    ``normalized`` is set the vector must have unit norm within 1e-9.
    """

    __array_ufunc__ = None

    layout: HilbertLayout
    amplitudes: np.ndarray = field(repr=False)
    normalized: bool = True

    def __post_init__(self):
        amplitudes = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amplitudes.size != self.layout.dim:
            raise LayoutError(
                f"Ket has {amplitudes.size} amplitudes, layout dimension is {self.layout.dim}"
            )
        amplitudes.flags.writeable = False
        object.__setattr__(self, 'amplitudes', amplitudes)
        if self.normalized and abs(self.norm - 1.0) >= NORM_TOLERANCE:
            raise DegenerateStateError(f"Ket flagged normalized has norm {self.norm:.3e}")

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    @property
    def dim(self):
        return self.layout.dim

    def tensor(self):
        """Amplitudes reshaped to one axis per subsystem."""
        return self.amplitudes.reshape(self.layout.dims)

    def inner(self, other):
        """Return <self|other>."""
        if other.layout != self.layout:
            raise LayoutError("Cannot take an inner product of kets over different layouts")
        return complex(np.vdot(self.amplitudes, other.amplitudes))

    def normalize(self):
        """Return the unit-norm version of this ket."""
        norm = self.norm
        if norm < 1e-12:
            raise DegenerateStateError("Cannot normalise a zero vector")
        return Ket(self.layout, self.amplitudes / norm, normalized=True)

    def with_phase(self, phase):
        return Ket(self.layout, self.amplitudes * np.exp(1j * phase), normalized=self.normalized)

    def __add__(self, other):
        if other.layout != self.layout:
            raise LayoutError("Cannot add kets over different layouts")
        return Ket(self.layout, self.amplitudes + other.amplitudes, normalized=False)

    def __sub__(self, other):
        return self + (-1.0) * other

    def __mul__(self, scalar):
        return Ket(self.layout, self.amplitudes * scalar, normalized=False)

    __rmul__ = __mul__

    def __repr__(self):
        return f"Ket(dim={self.dim}, norm={self.norm:.6f})"


def ground():
    """Local |g>."""
    return np.array([1.0, 0.0], dtype=complex)


def excited():
    """Local |e>."""
    return np.array([0.0, 1.0], dtype=complex)


def plus():
    """Local dressed state |+> = (|g> + |e>)/sqrt(2)."""
    return SQRT_HALF * np.array([1.0, 1.0], dtype=complex)


def minus():
    """Local dressed state |-> = (|g> - |e>)/sqrt(2)."""
    return SQRT_HALF * np.array([1.0, -1.0], dtype=complex)


def fock(cutoff, n):
    """Local Fock state |n> of a mode truncated at ``cutoff``."""
    if not 0 <= n <= cutoff:
        raise LayoutError(f"Fock level {n} outside 0..{cutoff}")
    state = np.zeros(cutoff + 1, dtype=complex)
    state[n] = 1.0
    return state


ATOM_STATES = {
    'g': ground,
    'e': excited,
    '+': plus,
    '-': minus,
}


def product_state(layout, factors):
    """
    Tensor product of one normalised local ket per subsystem.

    Args:
        layout: target HilbertLayout
        factors: sequence of 1-D arrays in layout order

    Returns:
        Ket: normalised product state
    """
    if len(factors) != len(layout):
        raise LayoutError(f"Expected {len(layout)} factors, got {len(factors)}")
    local = []
    for index, (factor, subsystem) in enumerate(zip(factors, layout.subsystems)):
        vector = np.asarray(factor, dtype=complex).reshape(-1)
        if vector.size != subsystem.dim:
            raise LayoutError(
                f"Factor {index} has dimension {vector.size}, subsystem needs {subsystem.dim}"
            )
        norm = np.linalg.norm(vector)
        if norm < 1e-12:
            raise DegenerateStateError(f"Factor {index} has zero norm")
        local.append(vector / norm)
    return Ket(layout, reduce(np.kron, local), normalized=True)


def basis_ket(layout, levels):
    """
    Computational basis state given one level per subsystem.

    Atom levels may be given as 'g'/'e'/'+'/'-' or 0/1; mode levels as
    Fock numbers.
    """
    factors = []
    for level, subsystem in zip(levels, layout.subsystems):
        if isinstance(subsystem, Qubit):
            factors.append(ATOM_STATES[level]() if isinstance(level, str) else fock(1, level))
        elif isinstance(subsystem, BosonMode):
            factors.append(fock(subsystem.cutoff, level))
    return product_state(layout, factors)

