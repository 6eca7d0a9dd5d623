"""
Wigner function of one mode of a stored state.
"""

from analysis.wigner import GridSpec, wigner
from protocols.exporters import export_wigner, load_json
from protocols.serializers import result_from_dict, state_from_dict
from protocols.utils import DrivenQEDCommand


class Command(DrivenQEDCommand):
    help = "Write the Wigner function of one mode as a CSV matrix with a .meta.json sidecar."
    requires_system_checks = []

    def add_arguments(self, parser):
        parser.add_argument('--in', dest='source', required=True, help="Result JSON or state JSON")
        parser.add_argument('--mode', type=int, default=0, help="Mode number (0 for a, 1 for b)")
        parser.add_argument('--grid', default='-4:4:0.1', help="x grid as min:max:step")
        parser.add_argument('--p-grid', default=None, help="p grid as min:max:step (defaults to --grid)")
        parser.add_argument('--sample', type=int, default=-1, help="Sample index in a result file")
        parser.add_argument('--out', required=True, help="Output CSV file")

    def handle(self, *args, **options):
        data = load_json(options['source'])
        if isinstance(data, dict) and 'states' in data:
            result = result_from_dict(data)
            t, state = result.states[options['sample']]
        else:
            t, state = None, state_from_dict(data)
        grid = GridSpec.parse(options['grid'])
        p_grid = GridSpec.parse(options['p_grid']) if options['p_grid'] else None
        mode_index = state.layout.mode(options['mode'])
        values = wigner(state, grid, p_grid, mode_index=mode_index)
        meta = {
            'source': str(options['source']),
            't': t,
            'mode': options['mode'],
            'grid': str(grid),
            'p_grid': str(p_grid or grid),
        }
        meta_path = export_wigner(values, options['out'], meta)
        if not values.boundary_ok:
            self.stderr.write(self.style.WARNING(
                f"Grid too narrow: |W| reaches {values.boundary_max:.3e} on the boundary (see {meta_path})"
            ))
        self.stdout.write(self.style.SUCCESS(
            f"Wigner grid {len(values.p_axis)}x{len(values.x_axis)}, integral {values.integral():.6f} -> {options['out']}"
        ))
