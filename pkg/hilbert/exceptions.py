"""
Exception hierarchy shared by every drivenqed app.

Configuration and layout problems are ValueErrors; violations of a numerical
guard (truncation tail, step size, degenerate normalisation) are
ArithmeticErrors so the command layer can map them to distinct exit codes.
"""


class DrivenQEDError(Exception):
    """Base class for all drivenqed errors."""


class LayoutError(DrivenQEDError, ValueError):
    """A subsystem index, dimension or layout pairing is invalid."""


class RegimeError(DrivenQEDError, ValueError):
    """Parameters do not match the regime an operation is defined for."""


class ConfigError(DrivenQEDError, ValueError):
    """
    A configuration document failed validation.

    Args:
        errors: list of ``"field.path: message"`` strings
    """

    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


class NumericalGuardError(DrivenQEDError, ArithmeticError):
    """A numerical safety check failed."""


class TruncationError(NumericalGuardError):
    """A Fock cutoff is too small for the requested displacement."""


class DegenerateStateError(NumericalGuardError):
    """A superposition has (numerically) zero norm and cannot be normalised."""
