"""
Composite Hilbert space layouts.

A layout is an ordered list of subsystems. Atoms come first, then boson modes.
Subsystem 0 is the most significant (slowest varying) index of the flattened
state vector. Qubit basis order is (|g>, |e>); modes use Fock order |0>..|n_max>.
"""

from dataclasses import dataclass
from math import prod

from .exceptions import LayoutError

# Default Fock cutoffs; settings.py exposes the same values through decouple.
SINGLE_MODE_CUTOFF = 40
TWO_MODE_CUTOFF = 20
CAT2_CUTOFF = 60


@dataclass(frozen=True)
class Qubit:
    """A two-level atom."""

    label: str = "atom"

    @property
    def dim(self):
        return 2

    def describe(self):
        return {'kind': 'qubit', 'label': self.label}


@dataclass(frozen=True)
class BosonMode:
    """A boson mode truncated at Fock level ``cutoff``."""

    cutoff: int
    label: str = "mode"

    def __post_init__(self):
        if int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise LayoutError(f"Mode cutoff must be an integer >= 1, got {self.cutoff}")
        object.__setattr__(self, 'cutoff', int(self.cutoff))

    @property
    def dim(self):
        return self.cutoff + 1

    def describe(self):
        return {'kind': 'mode', 'label': self.label, 'cutoff': self.cutoff}


@dataclass(frozen=True)
class HilbertLayout:
    """
    Ordered tensor-product layout.

    The flattened dimension is the product of the subsystem dimensions.
    Layouts are immutable and hashable, so they can be compared directly.
    """

    subsystems: tuple

    def __post_init__(self):
        if not self.subsystems:
            raise LayoutError("A layout needs at least one subsystem")
        object.__setattr__(self, 'subsystems', tuple(self.subsystems))

    @property
    def dims(self):
        return tuple(s.dim for s in self.subsystems)

    @property
    def dim(self):
        return prod(self.dims)

    @property
    def atom_indices(self):
        return tuple(i for i, s in enumerate(self.subsystems) if isinstance(s, Qubit))

    @property
    def mode_indices(self):
        return tuple(i for i, s in enumerate(self.subsystems) if isinstance(s, BosonMode))

    @property
    def n_atoms(self):
        return len(self.atom_indices)

    @property
    def n_modes(self):
        return len(self.mode_indices)

    def __len__(self):
        return len(self.subsystems)

    def check_index(self, index, kind=None):
        """
        Validate a subsystem index, optionally checking its kind.

        Args:
            index: subsystem position in the layout
            kind: Qubit, BosonMode or None

        Returns:
            The subsystem descriptor.
        """
        if not 0 <= index < len(self.subsystems):
            raise LayoutError(f"Subsystem index {index} out of range for layout of {len(self)}")
        subsystem = self.subsystems[index]
        if kind is not None and not isinstance(subsystem, kind):
            raise LayoutError(
                f"Subsystem {index} is a {type(subsystem).__name__}, expected {kind.__name__}"
            )
        return subsystem

    def mode(self, mode_number):
        """Return the subsystem index of the ``mode_number``-th boson mode."""
        modes = self.mode_indices
        if not 0 <= mode_number < len(modes):
            raise LayoutError(f"Layout has {len(modes)} mode(s), no mode {mode_number}")
        return modes[mode_number]

    def subset(self, indices):
        """Layout of the given subsystems, kept in layout order."""
        keep = sorted(set(indices))
        for index in keep:
            self.check_index(index)
        return HilbertLayout(tuple(self.subsystems[i] for i in keep))

    def field_layout(self):
        """Layout of the boson modes only."""
        return self.subset(self.mode_indices)

    def describe(self):
        return [s.describe() for s in self.subsystems]

    @classmethod
    def from_description(cls, description):
        """Rebuild a layout from the output of ``describe``."""
        subsystems = []
        for item in description:
            if item.get('kind') == 'qubit':
                subsystems.append(Qubit(label=item.get('label', 'atom')))
            elif item.get('kind') == 'mode':
                subsystems.append(BosonMode(int(item['cutoff']), label=item.get('label', 'mode')))
            else:
                raise LayoutError(f"Unknown subsystem description: {item!r}")
        return cls(tuple(subsystems))


def make_layout(n_atoms, mode_cutoffs):
    """
    Build a layout with ``n_atoms`` qubits followed by one mode per cutoff.

    Args:
        n_atoms: number of two-level atoms (>= 0)
        mode_cutoffs: Fock cutoffs n_max, each >= 1

    Returns:
        HilbertLayout
    """
    if n_atoms < 0:
        raise LayoutError(f"n_atoms must be >= 0, got {n_atoms}")
    if len(mode_cutoffs) > 2:
        raise LayoutError(f"At most two boson modes are supported, got {len(mode_cutoffs)}")
    atoms = [Qubit(label=f"atom{j}") for j in range(n_atoms)]
    modes = [
        BosonMode(cutoff, label="ab"[k])
        for k, cutoff in enumerate(mode_cutoffs)
    ]
    if not atoms and not modes:
        raise LayoutError("A layout needs at least one subsystem")
    return HilbertLayout(tuple(atoms + modes))
