"""
Sweep the drive strength and compare two Hamiltonian levels.
"""

from dynamics.hamiltonians import HamiltonianLevel
from hilbert.exceptions import ConfigError
from protocols.exporters import export_sweep, read_text
from protocols.registry import PROTOCOL_LEVELS
from protocols.runner import rwa_sweep
from protocols.serializers import parse_config
from protocols.utils import DrivenQEDCommand

LEVELS = [level.value for level in PROTOCOL_LEVELS]


def parse_omega_list(text):
    """Parse ``"50,100,200"`` into floats."""
    try:
        return [float(part) for part in text.split(',') if part.strip()]
    except ValueError:
        raise ConfigError([f"omega: expected comma-separated numbers, got {text!r}"])


class Command(DrivenQEDCommand):
    help = "Write (Omega/g, infidelity) rows comparing a Hamiltonian level with a reference level."
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument('--config', required=True, help="JSON configuration document")
        parser.add_argument('--omega', required=True, help="Comma-separated Omega/g values")
        parser.add_argument('--out', required=True, help="Output CSV file")
        parser.add_argument('--time', type=float, default=1.0, help="Comparison time g t")
        parser.add_argument('--level', choices=LEVELS, default=HamiltonianLevel.FULL_ROTATING.value)
        parser.add_argument('--reference', choices=LEVELS, default=HamiltonianLevel.EFFECTIVE.value)

    def handle(self, *args, **options):
        config = parse_config(read_text(options['config']))
        rows = rwa_sweep(
            config,
            parse_omega_list(options['omega']),
            t=options['time'],
            level=options['level'],
            reference=options['reference'],
        )
        export_sweep(rows, options['out'])
        for row in rows:
            self.stdout.write(f"{row['omega_ratio']:g}\t{row['infidelity']:.6e}")
