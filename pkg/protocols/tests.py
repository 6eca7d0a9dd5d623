"""
Unit tests for the protocols app.

Covers configuration parsing, end-to-end protocol runs at several Hamiltonian
levels, result export, the RWA sweep and the management commands.
"""

import csv
import io
import tempfile
from pathlib import Path

import numpy as np
from django.core.management import call_command
from django.core.management.base import CommandError
from django.test import SimpleTestCase
from rest_framework.parsers import JSONParser

from drivenqed.cli import main as cli_main
from dynamics.evolution import Picture
from dynamics.hamiltonians import HamiltonianLevel, build_hamiltonian
from hilbert.exceptions import ConfigError
from hilbert.layout import make_layout
from hilbert.states import basis_ket
from targets.coherent import coherent

from .exporters import export_result, load_result, metrics_csv, render_json
from .registry import BELL_STOP_TIME, PROTOCOLS, get_protocol
from .runner import run_protocol, rwa_sweep
from .serializers import config_from_dict, config_to_dict, parse_config, result_to_dict, state_to_dict
from .utils import EXIT_CONFIG, EXIT_IO, EXIT_NUMERICAL


def configure(**document):
    return config_from_dict(document)


def read_json(path):
    return JSONParser().parse(io.BytesIO(Path(path).read_bytes()))


def read_csv(path):
    with open(path, newline='') as handle:
        return list(csv.reader(handle))


class ConfigParsingTest(SimpleTestCase):
    """Test cases for configuration documents."""

    def test_minimal_document_gets_defaults(self):
        """Test that a bare protocol name is completed from the protocol defaults."""
        config = parse_config('{"protocol": "cat1"}')
        self.assertEqual(config.params.n_atoms, 1)
        self.assertEqual(config.params.g_a, 1.0)
        self.assertEqual(config.params.omega_drive, 0.0)
        self.assertFalse(config.params.two_mode)
        self.assertEqual(config.cutoffs, (40,))
        self.assertIs(config.level, HamiltonianLevel.EFFECTIVE)
        self.assertIs(config.picture, Picture.INTERACTION)
        self.assertEqual(config.time.t_end, 2.0)
        self.assertEqual(config.time.samples, 21)
        self.assertIsNone(config.time.dt)
        self.assertIsNone(config.measurement)

    def test_canonical_time_scales_with_coupling(self):
        """Test that the default stop time is given in units of 1/g."""
        config = parse_config('{"protocol": "jc-rabi", "params": {"g_a": 2.0}}')
        self.assertAlmostEqual(config.time.t_end, np.pi)

    def test_two_mode_defaults(self):
        """Test that two-mode protocols get g_b = g_a and delta_b = 0."""
        config = parse_config('{"protocol": "mode-bell", "params": {"g_a": 0.5}}')
        self.assertEqual(config.params.g_b, 0.5)
        self.assertEqual(config.params.delta_b, 0.0)
        self.assertEqual(config.cutoffs, (20, 20))
        self.assertEqual(config.measurement.outcome, '-')

    def test_recipe_measurement_is_default(self):
        """Test that measuring protocols carry their measurement and picture."""
        config = parse_config('{"protocol": "triple-cat"}')
        self.assertEqual(config.measurement.atoms, (0, 1))
        self.assertEqual(config.measurement.outcome, 'gg')
        self.assertIs(config.measurement.picture, Picture.ROTATING)

    def test_null_measurement_disables_it(self):
        """Test that an explicit null removes the protocol's measurement."""
        config = parse_config('{"protocol": "triple-cat", "measurement": null}')
        self.assertIsNone(config.measurement)

    def test_negative_cutoff_reports_path(self):
        """Test that a negative cutoff is reported at cutoffs.0."""
        with self.assertRaises(ConfigError) as ctx:
            parse_config('{"protocol": "cat1", "cutoffs": [-3]}')
        self.assertTrue(any(error.startswith('cutoffs.0:') for error in ctx.exception.errors))

    def test_two_mode_protocol_with_one_cutoff(self):
        """Test that a two-mode protocol rejects a single cutoff."""
        with self.assertRaises(ConfigError) as ctx:
            parse_config('{"protocol": "two-mode-cat", "cutoffs": [10]}')
        self.assertTrue(any(error.startswith('cutoffs:') for error in ctx.exception.errors))

    def test_unknown_keys_rejected(self):
        """Test that unknown keys are rejected at every level."""
        with self.assertRaises(ConfigError) as ctx:
            parse_config('{"protocol": "cat1", "colour": 1, "params": {"gee": 2}}')
        errors = ctx.exception.errors
        self.assertIn('colour: Unknown field.', errors)
        self.assertIn('params.gee: Unknown field.', errors)

    def test_unknown_protocol(self):
        """Test that an unknown protocol name is a configuration error."""
        with self.assertRaises(ConfigError) as ctx:
            parse_config('{"protocol": "cat3"}')
        self.assertTrue(ctx.exception.errors[0].startswith('protocol:'))

    def test_invalid_json(self):
        """Test that malformed JSON is a configuration error."""
        with self.assertRaises(ConfigError) as ctx:
            parse_config('{"protocol": ')
        self.assertTrue(ctx.exception.errors[0].startswith('document:'))

    def test_non_object_document(self):
        """Test that a JSON array is rejected."""
        with self.assertRaises(ConfigError):
            parse_config('["cat1"]')

    def test_resonance_required(self):
        """Test that cat2 rejects a detuned mode."""
        with self.assertRaises(ConfigError) as ctx:
            parse_config('{"protocol": "cat2", "params": {"delta_a": 0.5}}')
        self.assertTrue(any(error.startswith('params.delta_a:') for error in ctx.exception.errors))

    def test_lab_picture_needs_frequencies(self):
        """Test that the lab picture requires lab frequencies."""
        with self.assertRaises(ConfigError) as ctx:
            parse_config('{"protocol": "cat1", "picture": "lab"}')
        self.assertTrue(ctx.exception.errors[0].startswith('picture:'))

    def test_measurement_outcome_checked(self):
        """Test that a dressed label in the bare basis is rejected."""
        with self.assertRaises(ConfigError) as ctx:
            parse_config('{"protocol": "cat1", "measurement": {"atoms": [0], "outcome": "+"}}')
        self.assertTrue(any(error.startswith('measurement.outcome:') for error in ctx.exception.errors))

    def test_measurement_atom_out_of_range(self):
        """Test that measuring a missing atom is rejected."""
        with self.assertRaises(ConfigError) as ctx:
            parse_config('{"protocol": "cat1", "measurement": {"atoms": [1], "outcome": "g"}}')
        self.assertTrue(any(error.startswith('measurement.atoms:') for error in ctx.exception.errors))

    def test_non_positive_step_rejected(self):
        """Test that an explicit dt must be positive."""
        with self.assertRaises(ConfigError) as ctx:
            parse_config('{"protocol": "cat1", "time": {"dt": 0}}')
        self.assertTrue(any(error.startswith('time.dt:') for error in ctx.exception.errors))

    def test_echo_parses_back(self):
        """Test that the echoed configuration parses to the same configuration."""
        config = configure(
            protocol='entangled-coherent',
            params={'g_a': 1.0, 'omega_drive': 3.0},
            cutoffs=[12, 12],
            time={'t_end': 1.0, 'samples': 3},
        )
        self.assertEqual(config_from_dict(config_to_dict(config)), config)


class ProtocolRegistryTest(SimpleTestCase):
    """Test cases for the protocol registry."""

    def test_unknown_protocol(self):
        """Test that looking up an unknown protocol raises ConfigError."""
        with self.assertRaises(ConfigError):
            get_protocol('nope')

    def test_initial_states_match_layouts(self):
        """Test that every recipe prepares a normalized state on its own layout."""
        for name, recipe in PROTOCOLS.items():
            with self.subTest(protocol=name):
                layout = make_layout(recipe.n_atoms, [4] * recipe.n_modes)
                psi = recipe.initial_state(layout)
                self.assertAlmostEqual(psi.norm, 1.0)


class RunProtocolTest(SimpleTestCase):
    """Test cases for end-to-end protocol runs."""

    def test_cat1_follows_target(self):
        """Test that the effective-level cat1 run stays on its target."""
        result = run_protocol(configure(protocol='cat1', cutoffs=[20], time={'samples': 11}))
        self.assertEqual(len(result.times), 11)
        self.assertAlmostEqual(result.times[-1], 2.0)
        self.assertGreaterEqual(min(result.metrics['fidelity']), 1 - 1e-8)
        self.assertEqual(set(result.metrics), {'fidelity', 'entropy', 'photons_a'})
        # |alpha|^2 = (g t / 2)^2
        self.assertAlmostEqual(result.metrics['photons_a'][-1], 1.0, places=6)

    def test_initial_fidelity_is_one_for_every_protocol(self):
        """Test that every protocol starts on its target."""
        for name, recipe in PROTOCOLS.items():
            with self.subTest(protocol=name):
                config = configure(
                    protocol=name,
                    params={'omega_drive': 2.0},
                    cutoffs=[12] * recipe.n_modes,
                    time={'t_end': 0.1, 'samples': 2},
                )
                result = run_protocol(config)
                self.assertAlmostEqual(result.metrics['fidelity'][0], 1.0, places=10)

    def test_jc_rabi_swaps_excitation(self):
        """Test that |+,0> fully converts to |-,1> at g t = pi."""
        config = configure(protocol='jc-rabi', cutoffs=[6], time={'t_end': np.pi, 'samples': 3})
        result = run_protocol(config)
        _, psi = result.states[-1]
        target = basis_ket(psi.layout, ['-', 1])
        self.assertAlmostEqual(abs(target.inner(psi)) ** 2, 1.0, places=8)
        self.assertAlmostEqual(result.metrics['photons_a'][1], 0.5, places=8)

    def test_mode_bell_postselection(self):
        """Test that finding |-> at the stop time leaves the two-mode Bell state."""
        config = configure(protocol='mode-bell', cutoffs=[4, 4], time={'samples': 5})
        result = run_protocol(config)
        self.assertAlmostEqual(result.times[-1], BELL_STOP_TIME)
        self.assertIsNone(result.metrics['postselected_fidelity'][0])
        self.assertAlmostEqual(result.metrics['outcome_probability'][-1], 0.5, places=8)
        self.assertGreaterEqual(result.metrics['postselected_fidelity'][-1], 1 - 1e-8)
        self.assertIn('photons_b', result.metrics)

    def test_triple_cat_postselection(self):
        """Test that projecting both atoms onto |g> leaves the triple cat."""
        config = configure(
            protocol='triple-cat', params={'omega_drive': 5.0}, cutoffs=[30], time={'samples': 6},
        )
        result = run_protocol(config)
        values = result.metrics['postselected_fidelity']
        self.assertIsNotNone(values[-1])
        for value in values:
            if value is not None:
                self.assertGreaterEqual(value, 1 - 1e-6)

    def test_entangled_coherent_postselection(self):
        """Test that measuring the atom leaves an entangled coherent state."""
        config = configure(protocol='entangled-coherent', params={'omega_drive': 3.0}, time={'samples': 4})
        result = run_protocol(config)
        for value in result.metrics['postselected_fidelity']:
            self.assertIsNotNone(value)
            self.assertGreaterEqual(value, 1 - 1e-6)
        self.assertGreaterEqual(min(result.metrics['fidelity']), 1 - 1e-8)

    def test_jc_ramsey_probability(self):
        """Test that P(g) follows cos^2(g t / 4)."""
        config = configure(protocol='jc-ramsey', cutoffs=[6], time={'t_end': np.pi, 'samples': 2})
        result = run_protocol(config)
        self.assertAlmostEqual(result.metrics['outcome_probability'][0], 1.0, places=10)
        self.assertAlmostEqual(result.metrics['outcome_probability'][-1], 0.5, places=8)
        self.assertEqual(result.metrics['postselected_fidelity'], [None, None])

    def test_full_rotating_cat1_at_strong_drive(self):
        """Test that the exact rotating-frame run approaches the cat at Omega/g = 200."""
        config = configure(
            protocol='cat1',
            params={'omega_drive': 200.0},
            cutoffs=[20],
            level='full-rotating',
            time={'samples': 5},
        )
        result = run_protocol(config)
        self.assertGreaterEqual(min(result.metrics['fidelity']), 0.999)

    def test_full_rotating_jc_rabi_on_dressed_resonance(self):
        """Test that delta = 2 Omega at Omega/g = 200 reproduces the dressed JC oscillation."""
        config = configure(
            protocol='jc-rabi',
            params={'omega_drive': 200.0, 'delta_a': 400.0},
            cutoffs=[10],
            level='full-rotating',
            time={'t_end': np.pi, 'samples': 3},
        )
        result = run_protocol(config)
        transferred = [abs(basis_ket(psi.layout, ['-', 1]).inner(psi)) ** 2 for _, psi in result.states]
        self.assertAlmostEqual(transferred[1], 0.5, places=3)
        self.assertGreaterEqual(transferred[2], 0.999)
        self.assertGreaterEqual(min(result.metrics['fidelity']), 0.999)

    def test_full_rotating_ajc_rabi_on_dressed_resonance(self):
        """Test that delta = -2 Omega drives |-,0> to |+,1> under the mode-parity target."""
        config = configure(
            protocol='ajc-rabi',
            params={'omega_drive': 200.0, 'delta_a': -400.0},
            cutoffs=[10],
            level='full-rotating',
            time={'t_end': 2 * np.pi, 'samples': 5},
        )
        result = run_protocol(config)
        transferred = [abs(basis_ket(psi.layout, ['+', 1]).inner(psi)) ** 2 for _, psi in result.states]
        self.assertAlmostEqual(transferred[1], 0.5, places=3)
        self.assertAlmostEqual(transferred[2], 1.0, places=3)
        self.assertAlmostEqual(transferred[4], 0.0, places=3)
        self.assertGreaterEqual(min(result.metrics['fidelity']), 0.999)

    def test_level_ladder_at_strong_drive(self):
        """Test that the full rotating-frame runs track the effective model at Omega/g = 200."""
        for name, cutoffs in (('cat1', [20]), ('cat2', [30]), ('two-mode-cat', [20, 20])):
            with self.subTest(protocol=name):
                document = {
                    'protocol': name,
                    'params': {'omega_drive': 200.0},
                    'cutoffs': cutoffs,
                    'time': {'samples': 3},
                }
                effective = run_protocol(configure(level='effective', **document)).metrics['fidelity']
                full = run_protocol(configure(level='full-rotating', **document)).metrics['fidelity']
                for full_value, effective_value in zip(full, effective):
                    self.assertGreaterEqual(full_value, 0.95)
                    self.assertGreaterEqual(effective_value, 0.95)
                    self.assertLessEqual(full_value, effective_value + 0.02)

    def test_states_recorded_in_output_picture(self):
        """Test that the rotating output picture changes the stored states only."""
        document = {'protocol': 'cat1', 'params': {'omega_drive': 5.0}, 'cutoffs': [20], 'time': {'samples': 3}}
        interaction = run_protocol(configure(**document))
        rotating = run_protocol(configure(picture='rotating', **document))
        self.assertEqual(interaction.metrics, rotating.metrics)
        _, first = interaction.states[-1]
        _, second = rotating.states[-1]
        self.assertFalse(np.allclose(first.amplitudes, second.amplitudes))

    def test_summary(self):
        """Test that the summary reports final and minimum values."""
        result = run_protocol(configure(protocol='cat1', cutoffs=[20], time={'samples': 3}))
        self.assertEqual(result.summary['samples'], 3)
        self.assertEqual(result.summary['final_fidelity'], result.metrics['fidelity'][-1])
        self.assertEqual(result.summary['min_fidelity'], min(result.metrics['fidelity']))


class ResultExportTest(SimpleTestCase):
    """Test cases for result files."""

    def setUp(self):
        """Set up test data."""
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.directory = Path(directory.name)
        self.config = configure(
            protocol='triple-cat', params={'omega_drive': 5.0}, cutoffs=[30], time={'samples': 4},
        )

    def test_json_round_trip_is_bit_identical(self):
        """Test that a loaded result renders to the same bytes."""
        path = self.directory / 'result.json'
        export_result(run_protocol(self.config), 'json', path)
        reloaded = load_result(path)
        self.assertEqual(render_json(result_to_dict(reloaded)), path.read_bytes())

    def test_runs_are_deterministic(self):
        """Test that repeated runs give identical files."""
        first = render_json(result_to_dict(run_protocol(self.config)))
        second = render_json(result_to_dict(run_protocol(self.config)))
        self.assertEqual(first, second)

    def test_result_document_fields(self):
        """Test that the JSON document carries the echo and metadata."""
        path = self.directory / 'result.json'
        export_result(run_protocol(self.config), 'json', path)
        data = read_json(path)
        self.assertEqual(data['tool'], 'drivenqed')
        self.assertEqual(data['protocol'], 'triple-cat')
        self.assertEqual(data['config']['cutoffs'], [30])
        self.assertEqual(len(data['states']), 4)
        self.assertEqual(config_from_dict(data['config']), self.config)

    def test_csv_rows(self):
        """Test that the CSV has a header and one row per sample."""
        path = self.directory / 'metrics.csv'
        export_result(run_protocol(self.config), 'csv', path)
        rows = read_csv(path)
        self.assertEqual(rows[0][:2], ['t', 'fidelity'])
        self.assertIn('postselected_fidelity', rows[0])
        self.assertEqual(len(rows), 5)

    def test_csv_without_metrics(self):
        """Test that a result without metrics writes only the header."""
        result = run_protocol(self.config)
        result.metrics = {}
        self.assertEqual(metrics_csv(result), 't\n')

    def test_unknown_format(self):
        """Test that an unsupported format is a configuration error."""
        with self.assertRaises(ConfigError):
            export_result(run_protocol(self.config), 'xml', self.directory / 'out.xml')


class RwaSweepTest(SimpleTestCase):
    """Test cases for the drive-strength sweep."""

    def setUp(self):
        """Set up test data."""
        self.config = configure(protocol='cat1', cutoffs=[20])

    def test_infidelity_falls_with_drive(self):
        """Test that the infidelity falls as (g / Omega)^2."""
        rows = rwa_sweep(self.config, [50, 100, 200, 500], t=1.0)
        self.assertEqual([row['omega_ratio'] for row in rows], [50.0, 100.0, 200.0, 500.0])
        infidelities = [row['infidelity'] for row in rows]
        self.assertGreater(infidelities[-1], 0.0)
        self.assertEqual(infidelities, sorted(infidelities, reverse=True))
        self.assertTrue(30 <= infidelities[0] / infidelities[-1] <= 300)
        slope, _ = np.polyfit(np.log([50, 100, 200, 500]), np.log(infidelities), 1)
        self.assertAlmostEqual(slope, -2.0, delta=0.3)

    def test_duplicate_values_give_identical_rows(self):
        """Test that repeated drive strengths give identical rows."""
        rows = rwa_sweep(self.config, [100, 100])
        self.assertEqual(rows[0], rows[1])

    def test_self_comparison_vanishes(self):
        """Test that comparing a level with itself gives zero infidelity."""
        rows = rwa_sweep(self.config, [20, 40], level='effective', reference='effective')
        for row in rows:
            self.assertLess(row['infidelity'], 1e-10)

    def test_short_lists_rejected(self):
        """Test that a sweep needs at least two points."""
        for values in ([], [100]):
            with self.subTest(values=values):
                with self.assertRaises(ConfigError) as ctx:
                    rwa_sweep(self.config, values)
                self.assertEqual(ctx.exception.errors[0].split(':')[0], 'omega')

    def test_out_of_range_value_rejected(self):
        """Test that values outside (0, limit] are reported by position."""
        with self.assertRaises(ConfigError) as ctx:
            rwa_sweep(self.config, [10, 0, 5000])
        self.assertEqual([error.split(':')[0] for error in ctx.exception.errors], ['omega.1', 'omega.2'])


class CommandTest(SimpleTestCase):
    """Test cases for the management commands."""

    def setUp(self):
        """Set up test data."""
        directory = tempfile.TemporaryDirectory()
        self.addCleanup(directory.cleanup)
        self.directory = Path(directory.name)

    def write_config(self, **document):
        path = self.directory / 'config.json'
        path.write_bytes(render_json(document))
        return str(path)

    def call(self, name, **options):
        stdout, stderr = io.StringIO(), io.StringIO()
        call_command(name, stdout=stdout, stderr=stderr, **options)
        return stdout.getvalue(), stderr.getvalue()

    def test_protocol_json(self):
        """Test that the protocol command writes a result file."""
        config = self.write_config(protocol='cat1', cutoffs=[20], time={'samples': 3})
        out = self.directory / 'result.json'
        stdout, _ = self.call('protocol', config=config, out=str(out))
        self.assertIn('cat1', stdout)
        self.assertEqual(len(load_result(out).states), 3)

    def test_protocol_csv(self):
        """Test that the protocol command writes CSV metrics."""
        config = self.write_config(protocol='jc-rabi', cutoffs=[6], time={'samples': 4})
        out = self.directory / 'metrics.csv'
        self.call('protocol', config=config, out=str(out), format='csv')
        self.assertEqual(len(read_csv(out)), 5)

    def test_invalid_config_exit_code(self):
        """Test that configuration errors exit with code 2."""
        config = self.write_config(protocol='cat3')
        with self.assertRaises(CommandError) as ctx:
            self.call('protocol', config=config, out=str(self.directory / 'out.json'))
        self.assertEqual(ctx.exception.returncode, EXIT_CONFIG)

    def test_numerical_guard_exit_code(self):
        """Test that a cutoff too small for the cat exits with code 3."""
        config = self.write_config(protocol='cat1', cutoffs=[5], time={'samples': 2})
        with self.assertRaises(CommandError) as ctx:
            self.call('protocol', config=config, out=str(self.directory / 'out.json'))
        self.assertEqual(ctx.exception.returncode, EXIT_NUMERICAL)

    def test_missing_file_exit_code(self):
        """Test that an unreadable configuration exits with code 4."""
        with self.assertRaises(CommandError) as ctx:
            self.call('protocol', config=str(self.directory / 'missing.json'), out=str(self.directory / 'out.json'))
        self.assertEqual(ctx.exception.returncode, EXIT_IO)

    def test_sweep(self):
        """Test that the sweep command writes one row per drive strength."""
        config = self.write_config(protocol='cat1', cutoffs=[20])
        out = self.directory / 'sweep.csv'
        self.call('sweep', config=config, omega='50,500', out=str(out))
        rows = read_csv(out)
        self.assertEqual(rows[0], ['omega_over_g', 'infidelity'])
        self.assertEqual([float(row[0]) for row in rows[1:]], [50.0, 500.0])

    def test_sweep_rejects_non_numeric(self):
        """Test that a malformed omega list exits with code 2."""
        config = self.write_config(protocol='cat1', cutoffs=[20])
        with self.assertRaises(CommandError) as ctx:
            self.call('sweep', config=config, omega='50,abc', out=str(self.directory / 'sweep.csv'))
        self.assertEqual(ctx.exception.returncode, EXIT_CONFIG)

    def test_wigner_from_result(self):
        """Test that the wigner command reads a result file and writes the sidecar."""
        config = self.write_config(protocol='cat1', cutoffs=[20], time={'samples': 3})
        result_path = self.directory / 'result.json'
        self.call('protocol', config=config, out=str(result_path))
        out = self.directory / 'wigner.csv'
        _, stderr = self.call('wigner', source=str(result_path), grid='-6:6:0.2', out=str(out))
        self.assertEqual(stderr, '')
        rows = read_csv(out)
        self.assertEqual(rows[0][0], 'p\\x')
        self.assertEqual(len(rows), 62)
        self.assertEqual(len(rows[0]), 62)
        meta = read_json(f"{out}.meta.json")
        self.assertTrue(meta['boundary_ok'])
        self.assertIsNone(meta['warning'])
        self.assertAlmostEqual(meta['integral'], 1.0, places=3)
        self.assertAlmostEqual(meta['t'], 2.0)

    def test_wigner_narrow_grid_warns(self):
        """Test that a grid cutting off the state warns on stderr."""
        layout = make_layout(0, [25])
        state_path = self.directory / 'state.json'
        state_path.write_bytes(render_json(state_to_dict(coherent(layout, 0, 1.5))))
        out = self.directory / 'wigner.csv'
        with self.assertLogs('analysis.wigner', level='WARNING'):
            _, stderr = self.call('wigner', source=str(state_path), grid='-1:1:0.1', out=str(out))
        self.assertIn('too narrow', stderr)
        meta = read_json(f"{out}.meta.json")
        self.assertFalse(meta['boundary_ok'])
        self.assertIsNone(meta['t'])

    def test_wigner_missing_mode(self):
        """Test that asking for a second mode of a single-mode state exits with code 2."""
        layout = make_layout(0, [10])
        state_path = self.directory / 'state.json'
        state_path.write_bytes(render_json(state_to_dict(basis_ket(layout, [0]))))
        with self.assertRaises(CommandError) as ctx:
            self.call('wigner', source=str(state_path), mode=1, out=str(self.directory / 'w.csv'))
        self.assertEqual(ctx.exception.returncode, EXIT_CONFIG)

    def test_ham_dump(self):
        """Test that ham_dump writes every non-zero entry."""
        config = self.write_config(protocol='cat1', params={'omega_drive': 2.0}, cutoffs=[3])
        out = self.directory / 'ham.csv'
        self.call('ham_dump', config=config, level='full-rotating', out=str(out))
        rows = read_csv(out)
        self.assertEqual(rows[0], ['row', 'col', 're', 'im'])
        parsed = parse_config(Path(config).read_text())
        H = build_hamiltonian(HamiltonianLevel.FULL_ROTATING, parsed.params, parsed.layout())(0.0)
        self.assertEqual(len(rows) - 1, np.count_nonzero(H.entries))

    def test_ham_dump_lab_needs_frequencies(self):
        """Test that the lab level without lab frequencies exits with code 2."""
        config = self.write_config(protocol='cat1', cutoffs=[3])
        with self.assertRaises(CommandError) as ctx:
            self.call('ham_dump', config=config, level='lab', out=str(self.directory / 'ham.csv'))
        self.assertEqual(ctx.exception.returncode, EXIT_CONFIG)

    def test_cli_alias(self):
        """Test that the console entry point accepts ham-dump."""
        config = self.write_config(protocol='cat1', cutoffs=[3])
        out = self.directory / 'ham.csv'
        cli_main(['ham-dump', '--config', config, '--level', 'effective', '--out', str(out)])
        self.assertEqual(read_csv(out)[0], ['row', 'col', 're', 'im'])
