"""
Run a named protocol from a JSON configuration file.
"""

from protocols.exporters import EXPORT_FORMATS, export_result, read_text
from protocols.runner import run_protocol
from protocols.serializers import parse_config
from protocols.utils import DrivenQEDCommand


class Command(DrivenQEDCommand):
    help = "Run a protocol and write its result as JSON (states and metrics) or CSV (metrics)."
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument('--config', required=True, help="JSON configuration document")
        parser.add_argument('--out', required=True, help="Output file")
        parser.add_argument('--format', choices=EXPORT_FORMATS, default='json')

    def handle(self, *args, **options):
        config = parse_config(read_text(options['config']))
        result = run_protocol(config)
        export_result(result, options['format'], options['out'])
        self.stdout.write(self.style.SUCCESS(
            f"{config.protocol}: {len(result.times)} samples, "
            f"final fidelity {result.summary['final_fidelity']:.10f} -> {options['out']}"
        ))
