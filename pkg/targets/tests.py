"""
Unit tests for the targets app.

Closed-form states are checked against their defining formulas and against
direct numerical evolution of the Hamiltonian that generates them.
"""

import numpy as np
from django.test import SimpleTestCase

from analysis.measurement import measure_qubit, measure_qubits, outcome
from analysis.metrics import fidelity, mean_photon_number, negativity
from dynamics.evolution import TimeGrid, change_picture, propagate_static, propagate_timedep
from dynamics.factories import DriveParamsFactory
from dynamics.hamiltonians import (
    build_dressed_jc, build_effective, build_two_mode_dressed_jc, build_two_mode_effective,
)
from hilbert.exceptions import DegenerateStateError, LayoutError, RegimeError, TruncationError
from hilbert.layout import make_layout
from hilbert.operators import boson_ops, qubit_ops
from hilbert.states import basis_ket

from .coherent import Parity, cat_state, coherent, coherent_vector, tail_budget
from .predictions import (
    displacement_amplitude, target_cat1, target_cat2, target_dressed_rabi, target_entangled_coherent,
    target_mode_bell, target_mode_bell_evolution, target_ramsey_jc, target_triple_cat, target_two_mode_cat,
    two_atom_sx_eigenstates,
)


class CoherentStateTest(SimpleTestCase):
    """Test cases for truncated coherent states."""

    def setUp(self):
        """Set up test data."""
        self.layout = make_layout(0, [40])

    def test_zero_amplitude_is_vacuum(self):
        """Test that alpha = 0 gives |0>."""
        psi = coherent(self.layout, 0, 0.0)
        np.testing.assert_allclose(psi.amplitudes, basis_ket(self.layout, [0]).amplitudes)

    def test_overlap_of_opposite_amplitudes(self):
        """Test <alpha|-alpha> = e^{-2|alpha|^2} for alpha = 1."""
        overlap = coherent(self.layout, 0, 1.0).inner(coherent(self.layout, 0, -1.0))
        self.assertAlmostEqual(overlap.real, np.exp(-2.0), places=12)
        self.assertAlmostEqual(overlap.imag, 0.0, places=14)

    def test_mean_photon_number(self):
        """Test <a^dagger a> = |alpha|^2 for alpha = 1.5."""
        psi = coherent(self.layout, 0, 1.5)
        self.assertAlmostEqual(mean_photon_number(psi, 0), 2.25, delta=1e-8)

    def test_annihilation_residual(self):
        """Test ||(a - alpha)|alpha>|| < 1e-6 under the tail guard."""
        alpha = 1.2 - 0.8j
        psi = coherent(self.layout, 0, alpha)
        a, _ = boson_ops(self.layout, 0)
        residual = (a @ psi).amplitudes - alpha * psi.amplitudes
        self.assertLess(np.linalg.norm(residual), 1e-6)

    def test_tail_guard(self):
        """Test that an amplitude too large for the cutoff is refused."""
        self.assertGreater(tail_budget(5.0), 40)
        with self.assertRaises(TruncationError):
            coherent(self.layout, 0, 5.0)

    def test_other_subsystems_in_ground_and_vacuum(self):
        """Test that the remaining subsystems stay in |g> and |0>."""
        layout = make_layout(1, [15, 15])
        psi = coherent(layout, 2, 0.5)
        np.testing.assert_allclose(psi.tensor()[0, 0, :], coherent_vector(15, 0.5), atol=1e-15)
        self.assertAlmostEqual(np.linalg.norm(psi.tensor()[1]), 0.0)

    def test_mode_index_must_be_a_mode(self):
        """Test that a qubit index is rejected."""
        with self.assertRaises(LayoutError):
            coherent(make_layout(1, [10]), 0, 0.5)


class CatStateTest(SimpleTestCase):
    """Test cases for even and odd coherent states."""

    def setUp(self):
        """Set up test data."""
        self.layout = make_layout(0, [40])

    def test_even_cat_at_zero(self):
        """Test that the even cat with alpha = 0 is the vacuum."""
        psi = cat_state(self.layout, 0, 0.0, Parity.EVEN)
        self.assertAlmostEqual(abs(psi.amplitudes[0]), 1.0, places=14)

    def test_odd_cat_at_zero_is_degenerate(self):
        """Test that the odd cat with alpha = 0 is refused."""
        with self.assertRaises(DegenerateStateError):
            cat_state(self.layout, 0, 0.0, 'odd')

    def test_even_cat_normalisation(self):
        """Test the vacuum amplitude of the even cat for alpha = 2."""
        psi = cat_state(self.layout, 0, 2.0, Parity.EVEN)
        expected = 2 * np.exp(-2.0) / np.sqrt(2 * (1 + np.exp(-8.0)))
        self.assertAlmostEqual(psi.amplitudes[0].real, expected, places=12)

    def test_parity_support(self):
        """Test that even and odd cats live on even and odd Fock levels."""
        even = cat_state(self.layout, 0, 2.0, Parity.EVEN).amplitudes
        odd = cat_state(self.layout, 0, 2.0, Parity.ODD).amplitudes
        self.assertLess(np.max(np.abs(even[1::2])), 1e-12)
        self.assertLess(np.max(np.abs(odd[0::2])), 1e-12)

    def test_odd_cat_photon_boost(self):
        """Test <n> = |alpha|^2 coth(|alpha|^2) for the odd cat."""
        psi = cat_state(self.layout, 0, 1.5, Parity.ODD)
        self.assertAlmostEqual(mean_photon_number(psi, 0), 2.25 / np.tanh(2.25), places=8)
        self.assertGreater(mean_photon_number(psi, 0), 2.25)


class DisplacementTest(SimpleTestCase):
    """Test cases for the displacement amplitude."""

    def test_resonant_limit(self):
        """Test alpha = -i g t / 2 at delta = 0."""
        self.assertAlmostEqual(displacement_amplitude(1.0, 0.0, 2.0), -1j, places=15)

    def test_detuned_formula(self):
        """Test alpha = -g (e^{i delta t} - 1) / (2 delta)."""
        g, delta, t = 1.3, 0.7, 2.4
        expected = -g * (np.exp(1j * delta * t) - 1) / (2 * delta)
        self.assertAlmostEqual(displacement_amplitude(g, delta, t), expected, places=13)

    def test_small_detuning_is_continuous(self):
        """Test that a tiny detuning approaches the resonant value."""
        self.assertAlmostEqual(displacement_amplitude(1.0, 1e-9, 2.0), -1j, places=8)

    def test_sign_fixed_by_resonant_limit(self):
        """Test that dropping the leading minus sign would flip the resonant value."""
        g, delta, t = 1.0, 1e-4, 2.0
        unsigned = g * (np.exp(1j * delta * t) - 1) / (2 * delta)
        self.assertAlmostEqual(unsigned, 1j, places=3)
        self.assertAlmostEqual(displacement_amplitude(g, delta, t), -unsigned, places=12)


class CatTargetTest(SimpleTestCase):
    """Test cases for the one- and two-atom cat targets."""

    def test_cat1_at_zero_is_ground_vacuum(self):
        """Test that the cat starts as |g,0>."""
        layout = make_layout(1, [20])
        psi = target_cat1(DriveParamsFactory(), 0.0, layout)
        self.assertAlmostEqual(fidelity(psi, basis_ket(layout, ['g', 0])), 1.0, places=12)

    def test_cat1_resonant_displacement(self):
        """Test that the |+> branch is displaced by -i at gt = 2."""
        layout = make_layout(1, [40])
        psi = target_cat1(DriveParamsFactory(), 2.0, layout)
        upper = measure_qubit(psi, 0, 'dressed')[0].conditional
        a, _ = boson_ops(upper.layout, 0)
        self.assertAlmostEqual(upper.inner(a @ upper), -1j, delta=1e-8)
        self.assertAlmostEqual(mean_photon_number(psi, 1), 1.0, delta=1e-6)

    def test_cat1_matches_effective_evolution(self):
        """Test the cat against stepped evolution from |g,0> at several times."""
        layout = make_layout(1, [25])
        psi0 = basis_ket(layout, ['g', 0])
        for delta in (0.0, 0.7):
            params = DriveParamsFactory(delta_a=delta)
            H = build_effective(params, layout)
            grid = TimeGrid.uniform(3.0, 4, TimeGrid.max_step(H.omega_max))
            for t, psi in propagate_timedep(H, psi0, grid):
                with self.subTest(delta=delta, t=t):
                    self.assertGreaterEqual(fidelity(psi, target_cat1(params, t, layout)), 1 - 1e-8)

    def test_cat1_needs_one_atom(self):
        """Test that the one-atom cat refuses two atoms."""
        with self.assertRaises(RegimeError):
            target_cat1(DriveParamsFactory(n_atoms=2), 1.0)

    def test_sx_eigenstates(self):
        """Test eigenvalues, orthonormality and spectral reconstruction."""
        eigenstates = two_atom_sx_eigenstates()
        self.assertEqual([value for _, value in eigenstates], [2.0, -2.0, 0.0, 0.0])
        vectors = np.column_stack([psi.amplitudes for psi, _ in eigenstates])
        np.testing.assert_allclose(vectors.conj().T @ vectors, np.eye(4), atol=1e-12)
        layout = eigenstates[0][0].layout
        total_x = qubit_ops(layout, 0)[2] + qubit_ops(layout, 1)[2]
        reconstruction = sum(value * np.outer(psi.amplitudes, psi.amplitudes.conj()) for psi, value in eigenstates)
        np.testing.assert_allclose(reconstruction, total_x.entries, atol=1e-12)

    def test_cat2_at_zero(self):
        """Test that the two-atom state starts as |g g,0>."""
        layout = make_layout(2, [25])
        psi = target_cat2(DriveParamsFactory(n_atoms=2), 0.0, layout)
        self.assertAlmostEqual(fidelity(psi, basis_ket(layout, ['g', 'g', 0])), 1.0, places=12)

    def test_cat2_matches_effective_evolution(self):
        """Test the two-atom state against exact evolution at gt = 1.5."""
        layout = make_layout(2, [25])
        params = DriveParamsFactory(n_atoms=2)
        H = build_effective(params, layout)(0.0)
        psi0 = basis_ket(layout, ['g', 'g', 0])
        for t in (0.5, 1.0, 1.5):
            with self.subTest(t=t):
                self.assertGreaterEqual(fidelity(propagate_static(H, psi0, t), target_cat2(params, t, layout)), 1 - 1e-8)

    def test_cat2_doubles_displacement(self):
        """Test that the |++> branch carries 2 alpha."""
        layout = make_layout(2, [25])
        psi = target_cat2(DriveParamsFactory(n_atoms=2), 1.0, layout)
        upper = outcome(measure_qubits(psi, [0, 1], 'dressed'), '++')
        self.assertAlmostEqual(upper.probability, 0.25, places=12)
        a, _ = boson_ops(upper.conditional.layout, 0)
        self.assertAlmostEqual(upper.conditional.inner(a @ upper.conditional), -1j, delta=1e-8)

    def test_cat2_requires_resonance(self):
        """Test that a detuned mode is refused."""
        with self.assertRaises(RegimeError):
            target_cat2(DriveParamsFactory(n_atoms=2, delta_a=0.1), 1.0)

    def test_triple_cat(self):
        """Test the triple superposition at t = 0 and against the measurement pipeline."""
        field = make_layout(0, [30])
        params = DriveParamsFactory(n_atoms=2, omega_drive=5.0)
        initial = target_triple_cat(params, 0.0, field)
        self.assertAlmostEqual(fidelity(initial, basis_ket(field, [0])), 1.0, places=12)
        layout = make_layout(2, [30])
        t = 2.0
        interaction = propagate_static(build_effective(params, layout)(0.0), basis_ket(layout, ['g', 'g', 0]), t)
        rotating = change_picture(interaction, t, 'interaction', 'drive-rotating', params)
        outcomes = measure_qubits(rotating, [0, 1], 'bare')
        self.assertAlmostEqual(sum(item.probability for item in outcomes), 1.0, delta=1e-10)
        target = target_triple_cat(params, t, field)
        self.assertAlmostEqual(target.norm, 1.0, places=12)
        self.assertGreaterEqual(fidelity(outcome(outcomes, 'gg').conditional, target), 1 - 1e-6)


class TwoModeTargetTest(SimpleTestCase):
    """Test cases for the two-mode targets."""

    def setUp(self):
        """Set up test data."""
        self.layout = make_layout(1, [15, 15])
        self.field = make_layout(0, [15, 15])
        self.params = DriveParamsFactory(two_mode=True, omega_drive=3.0)

    def test_two_mode_cat_at_zero(self):
        """Test that the two-mode cat starts as |g,0,0>."""
        psi = target_two_mode_cat(self.params, 0.0, self.layout)
        self.assertAlmostEqual(fidelity(psi, basis_ket(self.layout, ['g', 0, 0])), 1.0, places=12)

    def test_equal_couplings_give_equal_amplitudes(self):
        """Test that g_a = g_b makes both modes carry the same photon number."""
        psi = target_two_mode_cat(self.params, 1.2, self.layout)
        self.assertAlmostEqual(mean_photon_number(psi, 1), mean_photon_number(psi, 2), places=12)

    def test_two_mode_cat_branch_amplitudes(self):
        """Test that the |+> branch carries -i g_a t / 2 and -i g_b t / 2."""
        params = DriveParamsFactory(g_a=1.0, g_b=0.6, delta_b=0.0)
        psi = target_two_mode_cat(params, 1.2, self.layout)
        upper = outcome(measure_qubit(psi, 0, 'dressed'), '+').conditional
        a, _ = boson_ops(upper.layout, 0)
        b, _ = boson_ops(upper.layout, 1)
        self.assertAlmostEqual(upper.inner(a @ upper), -0.6j, delta=1e-8)
        self.assertAlmostEqual(upper.inner(b @ upper), -0.36j, delta=1e-8)

    def test_two_mode_cat_matches_evolution(self):
        """Test the two-mode cat against exact evolution of the effective form."""
        params = DriveParamsFactory(g_a=1.0, g_b=0.6, delta_b=0.0)
        H = build_two_mode_effective(params, self.layout)(0.0)
        psi0 = basis_ket(self.layout, ['g', 0, 0])
        for t in (0.4, 0.8, 1.2):
            with self.subTest(t=t):
                psi = propagate_static(H, psi0, t)
                self.assertGreaterEqual(fidelity(psi, target_two_mode_cat(params, t, self.layout)), 1 - 1e-8)

    def test_entangled_coherent_degenerate_at_zero(self):
        """Test that sign=-1 at t=0 is refused and sign=+1 gives |0,0>."""
        with self.assertRaises(DegenerateStateError):
            target_entangled_coherent(self.params, 0.0, -1, self.field)
        psi = target_entangled_coherent(self.params, 0.0, 1, self.field)
        self.assertAlmostEqual(fidelity(psi, basis_ket(self.field, [0, 0])), 1.0, places=12)

    def test_entangled_coherent_from_measurement(self):
        """Test that measuring the atom in |g> / |e> leaves the +/- entangled coherent states."""
        t = 1.2
        H = build_two_mode_effective(self.params, self.layout)(0.0)
        interaction = propagate_static(H, basis_ket(self.layout, ['g', 0, 0]), t)
        rotating = change_picture(interaction, t, 'interaction', 'drive-rotating', self.params)
        outcomes = measure_qubit(rotating, 0, 'bare')
        for label, sign in (('g', 1), ('e', -1)):
            with self.subTest(outcome=label):
                target = target_entangled_coherent(self.params, t, sign, self.field)
                self.assertAlmostEqual(target.norm, 1.0, places=12)
                self.assertGreaterEqual(fidelity(outcome(outcomes, label).conditional, target), 1 - 1e-6)

    def test_mode_bell_state(self):
        """Test norm, support and negativity of the mode Bell state."""
        bell = target_mode_bell(self.field)
        support = np.flatnonzero(np.abs(bell.amplitudes) > 1e-15)
        self.assertEqual(list(support), [1, self.field.dims[1]])
        self.assertAlmostEqual(negativity(bell, ([0], [1])), 0.5, delta=1e-6)

    def test_mode_bell_after_projection(self):
        """Test the field after finding the atom in |-> at tau = sqrt(2) pi / (4 g)."""
        g = 1.0
        params = DriveParamsFactory(g_a=g, g_b=g, delta_b=0.0)
        H = build_two_mode_dressed_jc(params, self.layout, 1)
        tau = np.sqrt(2) * np.pi / (4 * g)
        psi = propagate_static(H, basis_ket(self.layout, ['+', 0, 0]), tau)
        lower = outcome(measure_qubit(psi, 0, 'dressed'), '-')
        self.assertAlmostEqual(lower.probability, 0.5, places=10)
        self.assertGreaterEqual(fidelity(lower.conditional, target_mode_bell(self.field)), 1 - 1e-8)

    def test_mode_bell_evolution_closed_form(self):
        """Test the closed-form two-mode JC evolution at several times."""
        params = DriveParamsFactory(g_a=1.0, g_b=1.0, delta_b=0.0)
        H = build_two_mode_dressed_jc(params, self.layout, 1)
        psi0 = basis_ket(self.layout, ['+', 0, 0])
        for t in (0.3, 1.1, 2.9):
            with self.subTest(t=t):
                target = target_mode_bell_evolution(params, t, self.layout)
                self.assertGreaterEqual(fidelity(propagate_static(H, psi0, t), target), 1 - 1e-10)

    def test_mode_bell_needs_two_modes(self):
        """Test that a single-mode layout is refused."""
        with self.assertRaises(LayoutError):
            target_mode_bell(make_layout(1, [3]))


class DressedRabiTargetTest(SimpleTestCase):
    """Test cases for the dressed JC / anti-JC oscillations."""

    def setUp(self):
        """Set up test data."""
        self.layout = make_layout(1, [6])
        self.params = DriveParamsFactory(g_a=1.3)

    def test_against_exact_evolution(self):
        """Test both signs against the exact dressed JC evolution."""
        for sign, start in ((1, '+'), (-1, '-')):
            H = build_dressed_jc(self.params, self.layout, sign)
            psi0 = basis_ket(self.layout, [start, 0])
            for t in (0.5, 1.7, 4.0):
                with self.subTest(sign=sign, t=t):
                    target = target_dressed_rabi(self.params, t, sign, self.layout)
                    self.assertGreaterEqual(fidelity(propagate_static(H, psi0, t), target), 1 - 1e-10)

    def test_ramsey_equivalence(self):
        """Test |g,0> under the JC form and its ground probability cos^2(gt/4)."""
        H = build_dressed_jc(self.params, self.layout, 1)
        psi0 = basis_ket(self.layout, ['g', 0])
        for t in (0.8, 2.4, 5.0):
            with self.subTest(t=t):
                target = target_ramsey_jc(self.params, t, self.layout)
                self.assertGreaterEqual(fidelity(propagate_static(H, psi0, t), target), 1 - 1e-10)
                ground = outcome(measure_qubit(target, 0, 'bare'), 'g')
                self.assertAlmostEqual(ground.probability, np.cos(self.params.g * t / 4) ** 2, places=10)

    def test_invalid_sign(self):
        """Test that only +1 and -1 are accepted."""
        with self.assertRaises(RegimeError):
            target_dressed_rabi(self.params, 1.0, 2, self.layout)
