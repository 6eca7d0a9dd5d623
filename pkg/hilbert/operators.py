"""
Dense operators over a HilbertLayout.

Provides the OperatorMatrix value type and the elementary operators of the
model (ladder operators, spin flips, dressed-state projectors) embedded into
the full tensor-product space with identities on every other subsystem.
"""

from dataclasses import dataclass, field
from functools import reduce

import numpy as np

from .exceptions import LayoutError
from .layout import BosonMode, Qubit
from .states import Ket, minus, plus

HERMITIAN_TOLERANCE = 1e-12


@dataclass(frozen=True, eq=False)
class OperatorMatrix:
    """
    Dense complex square matrix acting on a layout.

    Supports +, -, scalar *, and @ with other operators or kets. Entries are
    frozen after construction.
    """

    __array_ufunc__ = None

    layout: object
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        dim = self.layout.dim
        if entries.shape != (dim, dim):
            raise LayoutError(f"Operator shape {entries.shape} does not match layout dimension {dim}")
        entries.flags.writeable = False
        object.__setattr__(self, 'entries', entries)

    @property
    def dim(self):
        return self.layout.dim

    def dagger(self):
        return OperatorMatrix(self.layout, self.entries.conj().T)

    def max_abs(self):
        return float(np.max(np.abs(self.entries))) if self.entries.size else 0.0

    def hermiticity_defect(self):
        """max|H - H^dagger| relative to max|H| (0 for the zero matrix)."""
        scale = self.max_abs()
        if scale == 0.0:
            return 0.0
        return float(np.max(np.abs(self.entries - self.entries.conj().T))) / scale

    def is_hermitian(self, tolerance=HERMITIAN_TOLERANCE):
        return self.hermiticity_defect() < tolerance

    def commutator(self, other):
        return self @ other - other @ self

    def _check(self, other):
        if other.layout != self.layout:
            raise LayoutError("Operators act on different layouts")

    def __add__(self, other):
        self._check(other)
        return OperatorMatrix(self.layout, self.entries + other.entries)

    def __sub__(self, other):
        self._check(other)
        return OperatorMatrix(self.layout, self.entries - other.entries)

    def __neg__(self):
        return OperatorMatrix(self.layout, -self.entries)

    def __mul__(self, scalar):
        return OperatorMatrix(self.layout, self.entries * scalar)

    __rmul__ = __mul__

    def __matmul__(self, other):
        if isinstance(other, Ket):
            if other.layout != self.layout:
                raise LayoutError("Operator and ket act on different layouts")
            return Ket(self.layout, self.entries @ other.amplitudes, normalized=False)
        self._check(other)
        return OperatorMatrix(self.layout, self.entries @ other.entries)

    def __repr__(self):
        return f"OperatorMatrix(dim={self.dim})"


def zeros(layout):
    return OperatorMatrix(layout, np.zeros((layout.dim, layout.dim), dtype=complex))


def identity(layout):
    return OperatorMatrix(layout, np.eye(layout.dim, dtype=complex))


def embed(layout, index, local):
    """
    Embed a local operator acting on subsystem ``index``.

    Args:
        layout: HilbertLayout
        index: subsystem position
        local: square array of the subsystem's dimension

    Returns:
        OperatorMatrix equal to I x ... x local x ... x I
    """
    subsystem = layout.check_index(index)
    local = np.asarray(local, dtype=complex)
    if local.shape != (subsystem.dim, subsystem.dim):
        raise LayoutError(f"Local operator shape {local.shape} does not fit subsystem {index}")
    factors = [
        local if position == index else np.eye(dim, dtype=complex)
        for position, dim in enumerate(layout.dims)
    ]
    return OperatorMatrix(layout, reduce(np.kron, factors))


def boson_ops(layout, mode_index):
    """
    Annihilation and creation operators of the mode at ``mode_index``.

    Truncation: a^dagger |n_max> = 0.

    Returns:
        tuple: (a, a_dagger)
    """
    mode = layout.check_index(mode_index, BosonMode)
    lowering = np.diag(np.sqrt(np.arange(1, mode.dim, dtype=float)), k=1)
    a = embed(layout, mode_index, lowering)
    return a, a.dagger()


def number_op(layout, mode_index):
    a, a_dagger = boson_ops(layout, mode_index)
    return a_dagger @ a


def qubit_ops(layout, atom_index):
    """
    Spin-flip operators of the atom at ``atom_index``.

    Returns:
        tuple: (sigma_minus = |g><e|, sigma_plus = |e><g|, sigma_x)
    """
    layout.check_index(atom_index, Qubit)
    lowering = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)
    sigma_minus = embed(layout, atom_index, lowering)
    sigma_plus = sigma_minus.dagger()
    return sigma_minus, sigma_plus, sigma_minus + sigma_plus


def dressed_ops(layout, atom_index):
    """
    Dressed-basis operators of one atom.

    Returns:
        tuple: (|+><+|, |-><-|, |+><-|, |-><+|)
    """
    layout.check_index(atom_index, Qubit)
    p, m = plus(), minus()
    return tuple(
        embed(layout, atom_index, np.outer(left, right.conj()))
        for left, right in ((p, p), (m, m), (p, m), (m, p))
    )


def excitation_number(layout):
    """Sum of sigma^dagger sigma over atoms plus a^dagger a over modes."""
    total = zeros(layout)
    for index in layout.atom_indices:
        sigma_minus, sigma_plus, _ = qubit_ops(layout, index)
        total = total + sigma_plus @ sigma_minus
    for index in layout.mode_indices:
        total = total + number_op(layout, index)
    return total
