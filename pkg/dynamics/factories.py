"""
factory-boy factories for drive parameters used across the test suites.
"""

import factory

from .params import DriveParams, LabFrequencies


class DriveParamsFactory(factory.Factory):
    """Single atom, single mode, resonant, g = 1."""

    class Meta:
        model = DriveParams

    n_atoms = 1
    g_a = 1.0
    omega_drive = 0.0
    delta_atom = 0.0
    delta_a = 0.0

    class Params:
        two_mode = factory.Trait(g_b=1.0, delta_b=0.0)
        strong_drive = factory.Trait(omega_drive=200.0)


class LabFrequenciesFactory(factory.Factory):
    class Meta:
        model = LabFrequencies

    omega_atom = 50.0
    omega_mode = 50.0
    omega_laser = 50.0
