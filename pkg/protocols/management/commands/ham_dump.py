"""
Dump a Hamiltonian matrix for inspection.
"""

from dynamics.hamiltonians import HamiltonianLevel, build_hamiltonian
from protocols.exporters import export_hamiltonian, read_text
from protocols.serializers import parse_config
from protocols.utils import DrivenQEDCommand


class Command(DrivenQEDCommand):
    help = "Write the non-zero entries of H(t) at one level as row,col,re,im CSV."
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument('--config', required=True, help="JSON configuration document")
        parser.add_argument('--level', choices=[level.value for level in HamiltonianLevel], default=None)
        parser.add_argument('--time', type=float, default=0.0)
        parser.add_argument('--out', required=True, help="Output CSV file")

    def handle(self, *args, **options):
        config = parse_config(read_text(options['config']))
        level = HamiltonianLevel(options['level'] or config.level)
        H = build_hamiltonian(level, config.params, config.layout())(options['time'])
        export_hamiltonian(H, options['out'])
        self.stdout.write(self.style.SUCCESS(
            f"{level.value} Hamiltonian, dimension {H.dim}, t={options['time']:g} -> {options['out']}"
        ))
