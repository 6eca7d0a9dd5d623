"""
Density matrices, reduced states and entanglement measures.
"""

from dataclasses import dataclass, field

import numpy as np

from hilbert.exceptions import LayoutError, NumericalGuardError
from hilbert.layout import BosonMode
from hilbert.operators import number_op
from hilbert.states import Ket

DENSITY_TOLERANCE = 1e-10
ENTROPY_CUTOFF = 1e-12


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """
    Hermitian, unit-trace, positive semidefinite matrix over a layout.

    The checks run on construction with tolerance 1e-10.
    """

    __array_ufunc__ = None

    layout: object
    entries: np.ndarray = field(repr=False)

    def __post_init__(self):
        entries = np.array(self.entries, dtype=complex)
        dim = self.layout.dim
        if entries.shape != (dim, dim):
            raise LayoutError(f"Density matrix shape {entries.shape} does not match dimension {dim}")
        if np.max(np.abs(entries - entries.conj().T)) > DENSITY_TOLERANCE:
            raise NumericalGuardError("Density matrix is not Hermitian")
        trace = np.trace(entries).real
        if abs(trace - 1.0) > DENSITY_TOLERANCE:
            raise NumericalGuardError(f"Density matrix has trace {trace:.12f}")
        if np.min(np.linalg.eigvalsh(entries)) < -DENSITY_TOLERANCE:
            raise NumericalGuardError("Density matrix has a negative eigenvalue")
        entries.flags.writeable = False
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def from_ket(cls, psi):
        return cls(psi.layout, np.outer(psi.amplitudes, psi.amplitudes.conj()) / psi.norm ** 2)

    @classmethod
    def mixture(cls, weighted_kets):
        """
        Convex mixture sum_i w_i |psi_i><psi_i|.

        Args:
            weighted_kets: iterable of (weight, Ket) over a common layout
        """
        weighted_kets = list(weighted_kets)
        if not weighted_kets:
            raise LayoutError("A mixture needs at least one component")
        layout = weighted_kets[0][1].layout
        entries = np.zeros((layout.dim, layout.dim), dtype=complex)
        for weight, psi in weighted_kets:
            if psi.layout != layout:
                raise LayoutError("Mixture components act on different layouts")
            entries += weight * np.outer(psi.amplitudes, psi.amplitudes.conj())
        return cls(layout, entries)

    def eigenvalues(self):
        return np.linalg.eigvalsh(self.entries)

    def __repr__(self):
        return f"DensityMatrix(dims={self.layout.dims})"


def as_density(state):
    """Accept a Ket or a DensityMatrix and return a DensityMatrix."""
    if isinstance(state, DensityMatrix):
        return state
    return DensityMatrix.from_ket(state)


def _require_normalized(psi):
    if isinstance(psi, Ket) and not psi.normalized:
        raise NumericalGuardError("Fidelity needs normalized states")


def fidelity(psi, phi):
    """
    |<psi|phi>|^2 for kets, or <psi|rho|psi> when one argument is mixed.

    Symmetric and blind to global phases.
    """
    if psi.layout != phi.layout:
        raise LayoutError("Cannot compare states over different layouts")
    _require_normalized(psi)
    _require_normalized(phi)
    if isinstance(psi, DensityMatrix) and isinstance(phi, DensityMatrix):
        raise TypeError("Fidelity between two mixed states is not supported")
    if isinstance(psi, DensityMatrix):
        psi, phi = phi, psi
    if isinstance(phi, DensityMatrix):
        value = np.real(np.vdot(psi.amplitudes, phi.entries @ psi.amplitudes))
    else:
        value = abs(np.vdot(psi.amplitudes, phi.amplitudes)) ** 2
    return float(min(max(value, 0.0), 1.0))


def _check_keep(layout, keep):
    keep = sorted(set(keep))
    if not keep:
        raise LayoutError("partial_trace needs at least one subsystem to keep")
    for index in keep:
        layout.check_index(index)
    return keep


def partial_trace(state, keep):
    """
    Reduced density matrix over the subsystems in ``keep``.

    Args:
        state: Ket or DensityMatrix
        keep: subsystem indices to keep, returned in layout order

    Returns:
        DensityMatrix over layout.subset(keep)
    """
    layout = state.layout
    keep = _check_keep(layout, keep)
    traced = [i for i in range(len(layout)) if i not in keep]
    kept_dim = int(np.prod([layout.dims[i] for i in keep]))
    reduced_layout = layout.subset(keep)
    if isinstance(state, Ket):
        matrix = np.transpose(state.tensor(), keep + traced).reshape(kept_dim, -1)
        return DensityMatrix(reduced_layout, matrix @ matrix.conj().T)
    n = len(layout)
    tensor = state.entries.reshape(layout.dims + layout.dims)
    order = keep + traced + [n + i for i in keep] + [n + i for i in traced]
    traced_dim = layout.dim // kept_dim
    blocks = np.transpose(tensor, order).reshape(kept_dim, traced_dim, kept_dim, traced_dim)
    return DensityMatrix(reduced_layout, np.einsum('ijkj->ik', blocks))


def entropy(rho):
    """
    Von Neumann entropy -Tr rho ln rho (natural log).

    Eigenvalues in [-1e-10, 0) are clipped to 0 and eigenvalues below 1e-12
    contribute nothing.
    """
    eigenvalues = as_density(rho).eigenvalues()
    eigenvalues = np.where((eigenvalues < 0) & (eigenvalues >= -DENSITY_TOLERANCE), 0.0, eigenvalues)
    significant = eigenvalues[eigenvalues > ENTROPY_CUTOFF]
    return float(max(-np.sum(significant * np.log(significant)), 0.0))


def purity(rho):
    entries = as_density(rho).entries
    return float(np.real(np.trace(entries @ entries)))


def _check_bipartition(layout, bipartition):
    part_a, part_b = (sorted(set(part)) for part in bipartition)
    if not part_a or not part_b:
        raise LayoutError("Both sides of a bipartition must be non-empty")
    if set(part_a) & set(part_b) or sorted(part_a + part_b) != list(range(len(layout))):
        raise LayoutError(f"{bipartition} does not split the {len(layout)} subsystems in two")
    return part_a, part_b


def partial_transpose(rho, transposed):
    """Transpose rho on the subsystems in ``transposed``."""
    layout = rho.layout
    n = len(layout)
    axes = list(range(2 * n))
    for index in transposed:
        axes[index], axes[n + index] = n + index, index
    tensor = rho.entries.reshape(layout.dims + layout.dims)
    return np.transpose(tensor, axes).reshape(layout.dim, layout.dim)


def negativity(rho, bipartition):
    """
    (||rho^{T_B}||_1 - 1) / 2 from the full spectrum of the partial transpose.

    Args:
        rho: Ket or DensityMatrix
        bipartition: pair (indices of A, indices of B) covering every subsystem
    """
    rho = as_density(rho)
    _, part_b = _check_bipartition(rho.layout, bipartition)
    eigenvalues = np.linalg.eigvalsh(partial_transpose(rho, part_b))
    return float(max((np.sum(np.abs(eigenvalues)) - 1.0) / 2.0, 0.0))


def expectation(operator, state):
    """<psi|O|psi> or Tr(rho O)."""
    if operator.layout != state.layout:
        raise LayoutError("Operator and state act on different layouts")
    if isinstance(state, DensityMatrix):
        return complex(np.trace(state.entries @ operator.entries))
    return complex(np.vdot(state.amplitudes, operator.entries @ state.amplitudes))


def mean_photon_number(state, mode_index):
    return float(np.real(expectation(number_op(state.layout, mode_index), state)))


def reduce_to_mode(state, mode_index):
    """Reduce ``state`` to one mode and return its density matrix."""
    layout = state.layout
    if mode_index is None:
        if len(layout) != 1:
            raise LayoutError(f"Expected a single-mode state, layout has dims {layout.dims}")
        mode_index = 0
    layout.check_index(mode_index, BosonMode)
    if len(layout) == 1:
        return as_density(state)
    return partial_trace(state, [mode_index])


def photon_distribution(state, mode_index=None):
    """
    Fock-state probabilities of one mode.

    Args:
        state: Ket or DensityMatrix
        mode_index: required when the layout has more than one subsystem

    Returns:
        np.ndarray of length cutoff + 1 summing to 1
    """
    rho = reduce_to_mode(state, mode_index)
    return np.clip(np.real(np.diag(rho.entries)), 0.0, None)


def fock_wavefunctions(cutoff, x):
    """
    Position-space Fock wavefunctions psi_n(x) for x = (a + a^dagger)/sqrt(2).

    Returns:
        np.ndarray of shape (cutoff + 1, len(x)), via the stable three-term recursion
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    psi = np.zeros((cutoff + 1, x.size))
    psi[0] = np.pi ** -0.25 * np.exp(-x ** 2 / 2)
    if cutoff >= 1:
        psi[1] = np.sqrt(2.0) * x * psi[0]
    for n in range(1, cutoff):
        psi[n + 1] = np.sqrt(2.0 / (n + 1)) * x * psi[n] - np.sqrt(n / (n + 1)) * psi[n - 1]
    return psi


def quadrature_distribution(state, x, mode_index=None):
    """Probability density of the position quadrature <x|rho|x>."""
    rho = reduce_to_mode(state, mode_index)
    psi = fock_wavefunctions(rho.layout.dims[0] - 1, x)
    return np.real(np.einsum('mi,mn,ni->i', psi, rho.entries, psi))
