"""
Unit tests for the dynamics app.

Covers the Hamiltonian builders at every frame/approximation level, the
static and stepped propagators, and picture changes.
"""

import numpy as np
from django.test import SimpleTestCase

from hilbert.exceptions import LayoutError, NumericalGuardError, RegimeError
from hilbert.layout import make_layout
from hilbert.operators import (
    OperatorMatrix, boson_ops, dressed_ops, excitation_number, identity, number_op, qubit_ops, zeros,
)
from hilbert.states import Ket, basis_ket, fock, plus, product_state

from .evolution import (
    Picture, TimeGrid, change_picture, evolve_static, propagate_static, propagate_timedep, propagator,
)
from .factories import DriveParamsFactory, LabFrequenciesFactory
from .hamiltonians import (
    HamiltonianLevel, TimeDependentOperator, build_dressed_jc, build_effective, build_hamiltonian,
    build_interaction_picture, build_lab_frame, build_rotating_frame, build_two_mode_dressed_jc,
    build_two_mode_effective, build_two_mode_interaction, build_two_mode_rotating, free_evolution,
    free_spectrum, interaction_hamiltonian,
)
from .params import DriveParams, LabFrequencies


def max_diff(left, right):
    return float(np.max(np.abs(left.entries - right.entries)))


def idle_mode(operator, cutoff):
    """Embed a single-mode operator into a layout with an extra idle mode."""
    return np.kron(operator.entries, np.eye(cutoff + 1))


class DriveParamsTest(SimpleTestCase):
    """Test cases for parameter validation."""

    def test_second_mode_requires_both_fields(self):
        """Test that g_b without delta_b is rejected."""
        with self.assertRaises(RegimeError):
            DriveParams(n_atoms=1, g_a=1.0, g_b=1.0)

    def test_negative_coupling_rejected(self):
        """Test that negative couplings are rejected."""
        with self.assertRaises(RegimeError):
            DriveParamsFactory(g_a=-1.0)

    def test_non_finite_rejected(self):
        """Test that infinite detunings are rejected."""
        with self.assertRaises(RegimeError):
            DriveParamsFactory(delta_a=float('inf'))

    def test_lab_frequencies_must_match_detunings(self):
        """Test that detunings must agree with the lab frequencies."""
        with self.assertRaises(RegimeError):
            DriveParamsFactory(delta_a=0.3, lab_frequencies=LabFrequenciesFactory())

    def test_from_lab_derives_detunings(self):
        """Test detunings derived from bare frequencies."""
        params = DriveParams.from_lab(1, 1.0, 5.0, LabFrequencies(40.0, 42.5, 40.0))
        self.assertEqual(params.delta_atom, 0.0)
        self.assertEqual(params.delta_a, 2.5)

    def test_check_layout(self):
        """Test that atom and mode counts are compared with the layout."""
        params = DriveParamsFactory()
        params.check_layout(make_layout(1, [4]))
        with self.assertRaises(LayoutError):
            params.check_layout(make_layout(2, [4]))
        with self.assertRaises(LayoutError):
            params.check_layout(make_layout(1, [4, 4]))


class RotatingFrameTest(SimpleTestCase):
    """Test cases for the drive-frame Hamiltonian."""

    def test_pure_jc_block_splitting(self):
        """Test that the {|g,1>, |e,0>} block splits to +-g."""
        g = 1.7
        layout = make_layout(1, [3])
        H = build_rotating_frame(DriveParamsFactory(g_a=g), layout)
        index_g1, index_e0 = 1, layout.dims[1]
        block = H.entries[np.ix_([index_g1, index_e0], [index_g1, index_e0])]
        np.testing.assert_allclose(np.linalg.eigvalsh(block), [-g, g], atol=1e-12)

    def test_uncoupled_spectrum(self):
        """Test that g=0 gives +-Omega per atom plus delta*n."""
        params = DriveParamsFactory(n_atoms=2, g_a=0.0, omega_drive=1.3, delta_a=0.4)
        layout = make_layout(2, [4])
        H = build_rotating_frame(params, layout)
        energies, _ = free_spectrum(params, layout)
        np.testing.assert_allclose(np.linalg.eigvalsh(H.entries), np.sort(energies), atol=1e-12)

    def test_all_zero_parameters(self):
        """Test that vanishing parameters give the zero matrix."""
        H = build_rotating_frame(DriveParamsFactory(g_a=0.0), make_layout(1, [5]))
        self.assertEqual(H.max_abs(), 0.0)

    def test_atom_detuning_honoured(self):
        """Test that Delta enters as Delta * sigma^dagger sigma."""
        layout = make_layout(1, [2])
        base = build_rotating_frame(DriveParamsFactory(), layout)
        detuned = build_rotating_frame(DriveParamsFactory(delta_atom=0.8), layout)
        sigma_minus, sigma_plus, _ = qubit_ops(layout, 0)
        self.assertLess(max_diff(detuned - base, 0.8 * (sigma_plus @ sigma_minus)), 1e-14)

    def test_two_mode_layout_rejected(self):
        """Test that the single-mode builder refuses two modes."""
        with self.assertRaises(LayoutError):
            build_rotating_frame(DriveParamsFactory(two_mode=True), make_layout(1, [2, 2]))


class LabFrameTest(SimpleTestCase):
    """Test cases for the lab-frame Hamiltonian."""

    def setUp(self):
        """Set up test data."""
        self.lab = LabFrequencies(50.0, 51.0, 50.0)
        self.params = DriveParams.from_lab(1, 1.0, 2.0, self.lab)
        self.layout = make_layout(1, [4])

    def test_requires_lab_frequencies(self):
        """Test that a missing lab frequency set is rejected."""
        with self.assertRaises(RegimeError):
            build_lab_frame(DriveParamsFactory(), self.layout)

    def test_decoupled_limit_is_diagonal(self):
        """Test that Omega = g = 0 leaves the bare energies."""
        params = DriveParams.from_lab(1, 0.0, 0.0, self.lab)
        H = build_lab_frame(params, self.layout)(0.7)
        off_diagonal = H.entries - np.diag(np.diag(H.entries))
        self.assertEqual(float(np.max(np.abs(off_diagonal))), 0.0)
        diagonal = np.real(np.diag(H.entries))
        self.assertEqual(diagonal[self.layout.dims[1]], self.lab.omega_atom)
        self.assertEqual(diagonal[2], 2 * self.lab.omega_mode)

    def test_frame_shift_at_zero(self):
        """Test H_lab(0) = H_rot + w_L (sigma^dagger sigma + a^dagger a)."""
        lab = build_lab_frame(self.params, self.layout)(0.0)
        rotating = build_rotating_frame(self.params, self.layout)
        shift = self.lab.omega_laser * excitation_number(self.layout)
        self.assertLess(max_diff(lab, rotating + shift), 1e-12)

    def test_omega_max_is_laser_frequency(self):
        """Test the declared maximum frequency."""
        self.assertEqual(build_lab_frame(self.params, self.layout).omega_max, 50.0)


class HermiticityTest(SimpleTestCase):
    """Test that every builder returns Hermitian matrices."""

    def test_every_level_single_mode(self):
        """Test Hermiticity at twenty random times for all single-mode levels."""
        rng = np.random.default_rng(3)
        lab = LabFrequencies(30.0, 30.5, 30.0)
        params = DriveParams.from_lab(2, 1.0, 4.0, lab)
        layout = make_layout(2, [5])
        for level in HamiltonianLevel:
            H = build_hamiltonian(level, params, layout)
            for t in rng.uniform(0, 10, 20):
                with self.subTest(level=level.value, t=t):
                    self.assertTrue(H(t).is_hermitian())

    def test_every_level_two_mode(self):
        """Test Hermiticity for all two-mode levels."""
        rng = np.random.default_rng(4)
        params = DriveParamsFactory(two_mode=True, omega_drive=3.0, delta_a=6.0, delta_b=6.0)
        layout = make_layout(1, [3, 3])
        for level in set(HamiltonianLevel) - {HamiltonianLevel.LAB}:
            H = build_hamiltonian(level, params, layout)
            for t in rng.uniform(0, 10, 20):
                with self.subTest(level=level.value, t=t):
                    self.assertTrue(H(t).is_hermitian())


class InteractionPictureTest(SimpleTestCase):
    """Test cases for the interaction-picture builders."""

    def assert_conjugation(self, params, layout, times):
        H_int = interaction_hamiltonian(params, layout)
        builder = build_two_mode_interaction if layout.n_modes == 2 else build_interaction_picture
        H = builder(params, layout)
        for t in times:
            U = free_evolution(params, layout, t)
            conjugated = U.dagger() @ H_int @ U
            with self.subTest(t=t):
                self.assertLess(max_diff(H(t), conjugated), 1e-10 * H_int.max_abs())

    def test_conjugation_identity(self):
        """Test H_I(t) = e^{i H_o t} H_int e^{-i H_o t} at random times."""
        rng = np.random.default_rng(11)
        times = [0.37] + list(rng.uniform(0, 5, 9))
        for n_atoms in (1, 2):
            params = DriveParamsFactory(n_atoms=n_atoms, omega_drive=3.0, delta_a=1.5)
            self.assert_conjugation(params, make_layout(n_atoms, [6]), times)

    def test_two_mode_conjugation_identity(self):
        """Test the two-mode frame conjugation at t=0.5."""
        params = DriveParamsFactory(g_a=1.0, g_b=0.6, delta_a=2.0, delta_b=-1.0, omega_drive=2.5)
        self.assert_conjugation(params, make_layout(1, [4, 4]), [0.5, 1.9])

    def test_trivial_frame(self):
        """Test that Omega = delta = 0 leaves H_int unchanged."""
        params = DriveParamsFactory()
        layout = make_layout(1, [5])
        H = build_interaction_picture(params, layout)
        H_int = interaction_hamiltonian(params, layout)
        for t in (0.0, 1.3, 7.2):
            self.assertLess(max_diff(H(t), H_int), 1e-14)

    def test_initial_time_structure(self):
        """Test that at t=0 the dressed flips cancel to g (sigma^dagger a + h.c.)."""
        params = DriveParamsFactory(omega_drive=4.0, delta_a=1.0)
        layout = make_layout(1, [5])
        H0 = build_interaction_picture(params, layout)(0.0)
        self.assertLess(max_diff(H0, interaction_hamiltonian(params, layout)), 1e-14)

    def test_omega_max(self):
        """Test the declared maximum frequency 2 Omega + |delta|."""
        params = DriveParamsFactory(omega_drive=4.0, delta_a=-1.0)
        self.assertEqual(build_interaction_picture(params, make_layout(1, [3])).omega_max, 9.0)

    def test_detuned_atom_rejected(self):
        """Test that Delta != 0 is unsupported at this level."""
        with self.assertRaises(RegimeError):
            build_interaction_picture(DriveParamsFactory(delta_atom=0.5), make_layout(1, [3]))

    def test_two_mode_decouples_to_single_mode(self):
        """Test that g_b = 0 reproduces the single-mode form with an idle mode."""
        cutoff = 3
        single = build_interaction_picture(DriveParamsFactory(omega_drive=2.0, delta_a=0.7), make_layout(1, [cutoff]))
        double = build_two_mode_interaction(
            DriveParamsFactory(omega_drive=2.0, delta_a=0.7, g_b=0.0, delta_b=0.7), make_layout(1, [cutoff, cutoff])
        )
        for t in (0.0, 0.4, 2.2):
            np.testing.assert_allclose(double(t).entries, idle_mode(single(t), cutoff), atol=1e-14)


class EffectiveHamiltonianTest(SimpleTestCase):
    """Test cases for the strong-driving effective Hamiltonians."""

    def test_resonant_single_atom_form(self):
        """Test (g/2) sigma_x (a + a^dagger) at delta = 0."""
        layout = make_layout(1, [6])
        H = build_effective(DriveParamsFactory(g_a=1.4), layout)
        self.assertTrue(H.static)
        a, a_dagger = boson_ops(layout, 1)
        expected = 0.7 * (qubit_ops(layout, 0)[2] @ (a + a_dagger))
        self.assertLess(max_diff(H(3.0), expected), 1e-14)

    def test_commutes_with_each_sigma_x(self):
        """Test that the effective form conserves every sigma_x."""
        layout = make_layout(2, [4])
        H = build_effective(DriveParamsFactory(n_atoms=2, delta_a=0.9), layout)
        for j in layout.atom_indices:
            sigma_x = qubit_ops(layout, j)[2]
            self.assertLess(H(1.1).commutator(sigma_x).max_abs(), 1e-14)

    def test_commutator_is_c_number_per_eigenspace(self):
        """Test [H(t1), H(t2)] = c (sum sigma_x)^2 below the truncation edge."""
        g, delta, t1, t2 = 1.0, 0.8, 0.3, 1.7
        cutoff = 5
        layout = make_layout(2, [cutoff])
        H = build_effective(DriveParamsFactory(n_atoms=2, g_a=g, delta_a=delta), layout)
        commutator = H(t1).commutator(H(t2))
        total_x = qubit_ops(layout, 0)[2] + qubit_ops(layout, 1)[2]
        c = 0.25 * g ** 2 * 2j * np.sin(delta * (t2 - t1))
        below_edge = np.real(np.diag(number_op(layout, 2).entries)) < cutoff
        projector = np.diag(below_edge.astype(complex))
        np.testing.assert_allclose(
            projector @ commutator.entries @ projector,
            c * projector @ (total_x @ total_x).entries @ projector,
            atol=1e-12,
        )

    def test_equals_interaction_picture_without_dressed_flips(self):
        """Test assembly from the interaction picture with the e^{+-2i Omega t} terms removed."""
        g, delta, t = 1.0, 0.6, 0.83
        layout = make_layout(1, [5])
        params = DriveParamsFactory(g_a=g, delta_a=delta, omega_drive=7.0)
        a, _ = boson_ops(layout, 1)
        p_plus, p_minus, _, _ = dressed_ops(layout, 0)
        half = (0.5 * g * np.exp(-1j * delta * t)) * ((p_plus - p_minus) @ a)
        self.assertLess(max_diff(build_effective(params, layout)(t), half + half.dagger()), 1e-14)

    def test_two_mode_resonant_form(self):
        """Test (1/2) sigma_x (g_a (a + a^dagger) + g_b (b + b^dagger))."""
        layout = make_layout(1, [3, 3])
        H = build_two_mode_effective(DriveParamsFactory(g_a=1.0, g_b=0.5, delta_b=0.0), layout)
        a, a_dagger = boson_ops(layout, 1)
        b, b_dagger = boson_ops(layout, 2)
        expected = 0.5 * (qubit_ops(layout, 0)[2] @ ((a + a_dagger) + 0.5 * (b + b_dagger)))
        self.assertLess(max_diff(H(0.0), expected), 1e-14)

    def test_two_mode_decouples_to_single_mode(self):
        """Test that g_b = 0 reproduces the single-mode effective form."""
        cutoff = 4
        single = build_effective(DriveParamsFactory(delta_a=0.5), make_layout(1, [cutoff]))
        double = build_two_mode_effective(
            DriveParamsFactory(delta_a=0.5, g_b=0.0, delta_b=0.0), make_layout(1, [cutoff, cutoff])
        )
        np.testing.assert_allclose(double(0.9).entries, idle_mode(single(0.9), cutoff), atol=1e-14)


class DressedJaynesCummingsTest(SimpleTestCase):
    """Test cases for the dressed-basis JC and anti-JC forms."""

    def setUp(self):
        """Set up test data."""
        self.g = 1.2
        self.layout = make_layout(1, [4])
        self.params = DriveParamsFactory(g_a=self.g)

    def test_jc_matrix_element(self):
        """Test <-,1|H|+,0> = g/2."""
        H = build_dressed_jc(self.params, self.layout, 1)
        element = basis_ket(self.layout, ['-', 1]).inner(H @ basis_ket(self.layout, ['+', 0]))
        self.assertAlmostEqual(element, self.g / 2, places=14)

    def test_jc_annihilates_lower_vacuum(self):
        """Test that the JC form annihilates |-,0>."""
        H = build_dressed_jc(self.params, self.layout, 1)
        self.assertLess((H @ basis_ket(self.layout, ['-', 0])).norm, 1e-15)

    def test_anti_jc_excites_from_below(self):
        """Test that the anti-JC form maps |-,0> to (g/2)|+,1>."""
        H = build_dressed_jc(self.params, self.layout, -1)
        image = H @ basis_ket(self.layout, ['-', 0])
        expected = (self.g / 2) * basis_ket(self.layout, ['+', 1])
        np.testing.assert_allclose(image.amplitudes, expected.amplitudes, atol=1e-14)

    def test_invalid_sign(self):
        """Test that only +1 and -1 are accepted."""
        with self.assertRaises(RegimeError):
            build_dressed_jc(self.params, self.layout, 0)

    def test_two_mode_action_on_upper_vacuum(self):
        """Test H|+,0,0> = (g/2)(|-,0,1> + |-,1,0>)."""
        layout = make_layout(1, [2, 2])
        H = build_two_mode_dressed_jc(DriveParamsFactory(g_a=self.g, g_b=self.g, delta_b=0.0), layout, 1)
        image = H @ basis_ket(layout, ['+', 0, 0])
        expected = (self.g / 2) * (basis_ket(layout, ['-', 0, 1]) + basis_ket(layout, ['-', 1, 0]))
        np.testing.assert_allclose(image.amplitudes, expected.amplitudes, atol=1e-14)

    def test_two_mode_block_splitting(self):
        """Test that the bright block splits to +-g/sqrt(2)."""
        layout = make_layout(1, [2, 2])
        H = build_two_mode_dressed_jc(DriveParamsFactory(g_a=self.g, g_b=self.g, delta_b=0.0), layout, 1)
        upper = basis_ket(layout, ['+', 0, 0])
        bright = (basis_ket(layout, ['-', 0, 1]) + basis_ket(layout, ['-', 1, 0])).normalize()
        block = np.array([
            [upper.inner(H @ upper), upper.inner(H @ bright)],
            [bright.inner(H @ upper), bright.inner(H @ bright)],
        ])
        np.testing.assert_allclose(np.linalg.eigvalsh(block), [-self.g / np.sqrt(2), self.g / np.sqrt(2)], atol=1e-12)
        self.assertLess((H @ basis_ket(layout, ['-', 0, 0])).norm, 1e-15)

    def test_two_mode_requires_equal_couplings(self):
        """Test that g_a != g_b is rejected."""
        with self.assertRaises(RegimeError):
            build_two_mode_dressed_jc(DriveParamsFactory(g_a=1.0, g_b=0.5, delta_b=0.0), make_layout(1, [2, 2]), 1)


class TwoModeRotatingTest(SimpleTestCase):
    """Test cases for the two-mode drive-frame Hamiltonian."""

    def test_idle_second_mode(self):
        """Test that g_b = 0 embeds the single-mode Hamiltonian."""
        cutoff = 3
        single = build_rotating_frame(DriveParamsFactory(omega_drive=1.5, delta_a=0.5), make_layout(1, [cutoff]))
        double = build_two_mode_rotating(
            DriveParamsFactory(omega_drive=1.5, delta_a=0.5, g_b=0.0, delta_b=0.0), make_layout(1, [cutoff, cutoff])
        )
        np.testing.assert_allclose(double.entries, idle_mode(single, cutoff), atol=1e-14)

    def test_uncoupled_is_diagonal(self):
        """Test that zero couplings leave delta_a n_a + delta_b n_b."""
        layout = make_layout(1, [3, 3])
        H = build_two_mode_rotating(DriveParamsFactory(g_a=0.0, g_b=0.0, delta_a=0.3, delta_b=-0.2), layout)
        expected = 0.3 * number_op(layout, 1) - 0.2 * number_op(layout, 2)
        self.assertLess(max_diff(H, expected), 1e-15)

    def test_single_mode_layout_rejected(self):
        """Test that a single-mode layout is refused."""
        with self.assertRaises(LayoutError):
            build_two_mode_rotating(DriveParamsFactory(), make_layout(1, [3]))


class StaticPropagationTest(SimpleTestCase):
    """Test cases for exact exponentials."""

    def setUp(self):
        """Set up test data."""
        self.layout = make_layout(1, [1])
        self.psi0 = basis_ket(self.layout, ['g', 0])

    def test_zero_hamiltonian(self):
        """Test that H = 0 leaves the state unchanged."""
        psi = propagate_static(zeros(self.layout), self.psi0, 3.0)
        np.testing.assert_allclose(psi.amplitudes, self.psi0.amplitudes, atol=1e-15)

    def test_half_sigma_x_flip(self):
        """Test that (g/2) sigma_x for t = pi/g maps |g> to -i|e>."""
        g = 2.0
        H = (g / 2) * qubit_ops(self.layout, 0)[2]
        psi = propagate_static(H, self.psi0, np.pi / g)
        expected = -1j * basis_ket(self.layout, ['e', 0]).amplitudes
        np.testing.assert_allclose(psi.amplitudes, expected, atol=1e-12)

    def test_zero_time_is_identity(self):
        """Test that t = 0 gives the identity."""
        H = build_rotating_frame(DriveParamsFactory(omega_drive=1.0), make_layout(1, [3]))
        self.assertLess(max_diff(propagator(H, 0.0), identity(H.layout)), 1e-12)

    def test_non_hermitian_rejected(self):
        """Test that a non-Hermitian operator is refused."""
        sigma_minus = qubit_ops(self.layout, 0)[0]
        with self.assertRaises(NumericalGuardError):
            propagate_static(sigma_minus, self.psi0, 1.0)

    def test_unitarity(self):
        """Test U^dagger U = I for a random Hermitian H."""
        rng = np.random.default_rng(5)
        layout = make_layout(1, [4])
        M = rng.normal(size=(layout.dim, layout.dim)) + 1j * rng.normal(size=(layout.dim, layout.dim))
        U = propagator(OperatorMatrix(layout, (M + M.conj().T) / 2), 1.3)
        self.assertLess(max_diff(U.dagger() @ U, identity(layout)), 1e-9)

    def test_energy_conservation(self):
        """Test that <H> is constant under its own exact evolution."""
        layout = make_layout(1, [10])
        H = build_rotating_frame(DriveParamsFactory(omega_drive=2.0, delta_a=0.5), layout)
        psi0 = basis_ket(layout, ['e', 2])
        energies = [np.real(psi.inner(H @ psi)) for _, psi in evolve_static(H, psi0, np.linspace(0, 5, 11))]
        self.assertLess(max(abs(e - energies[0]) for e in energies), 1e-9 * abs(energies[0]))


class SteppedPropagationTest(SimpleTestCase):
    """Test cases for the midpoint-exponential stepper."""

    def test_constant_operator_matches_exact(self):
        """Test that a constant H stepped to t=1 matches the exact exponential."""
        layout = make_layout(1, [5])
        H = build_rotating_frame(DriveParamsFactory(omega_drive=1.2, delta_a=0.3), layout)
        psi0 = basis_ket(layout, ['g', 1])
        stepped = propagate_timedep(TimeDependentOperator.constant(H), psi0, TimeGrid.uniform(1.0, 1, 0.01))
        exact = propagate_static(H, psi0, 1.0)
        np.testing.assert_allclose(stepped[-1][1].amplitudes, exact.amplitudes, atol=1e-10)

    def test_effective_hamiltonian_displaces_upper_branch(self):
        """Test that |+,0> at gt=2 becomes |+> times the coherent state |-i>."""
        layout = make_layout(1, [40])
        H = build_effective(DriveParamsFactory(), layout)
        psi0 = basis_ket(layout, ['+', 0])
        final = propagate_timedep(H, psi0, TimeGrid.uniform(2.0, 1, 0.01))[-1][1]
        a, _ = boson_ops(layout, 1)
        self.assertAlmostEqual(final.inner(a @ final), -1j, places=10)
        self.assertAlmostEqual(abs(psi0.inner(final)) ** 2, np.exp(-1.0), places=10)

    def test_zero_length_grid(self):
        """Test that a zero-length grid returns the initial state."""
        layout = make_layout(1, [3])
        H = build_interaction_picture(DriveParamsFactory(omega_drive=5.0), layout)
        psi0 = basis_ket(layout, ['g', 0])
        samples = propagate_timedep(H, psi0, TimeGrid(0.0, 0.0, 1e-4, (0.0,)))
        self.assertEqual(len(samples), 1)
        np.testing.assert_array_equal(samples[0][1].amplitudes, psi0.amplitudes)

    def test_step_too_large(self):
        """Test that dt above 0.01/omega_max is refused."""
        layout = make_layout(1, [3])
        H = build_interaction_picture(DriveParamsFactory(omega_drive=10.0), layout)
        with self.assertRaises(NumericalGuardError):
            propagate_timedep(H, basis_ket(layout, ['g', 0]), TimeGrid.uniform(1.0, 2, 0.01))

    def test_samples_land_on_requested_times(self):
        """Test that samples are returned exactly at the grid's sample times."""
        layout = make_layout(1, [3])
        H = build_effective(DriveParamsFactory(delta_a=1.0), layout)
        grid = TimeGrid.uniform(0.95, 4, 0.01)
        samples = propagate_timedep(H, basis_ket(layout, ['g', 0]), grid)
        self.assertEqual([t for t, _ in samples], list(grid.sample_times))
        for _, psi in samples:
            self.assertLess(abs(psi.norm - 1.0), 1e-8)

    def test_second_order_convergence(self):
        """Test that halving dt reduces the displacement error at least threefold."""
        g, delta, t_end = 2.0, 1.0, 3.0
        layout = make_layout(1, [30])
        H = build_effective(DriveParamsFactory(g_a=g, delta_a=delta), layout)
        psi0 = basis_ket(layout, ['+', 0])
        a, _ = boson_ops(layout, 1)
        exact = -g * (np.exp(1j * delta * t_end) - 1) / (2 * delta)
        errors = []
        for dt in (0.01, 0.005):
            final = propagate_timedep(H, psi0, TimeGrid.uniform(t_end, 1, dt))[-1][1]
            errors.append(abs(final.inner(a @ final) - exact))
        self.assertGreater(errors[0], 1e-8)
        self.assertGreaterEqual(errors[0] / errors[1], 3.0)

    def test_time_grid_validation(self):
        """Test rejection of unsorted or out-of-window samples."""
        with self.assertRaises(NumericalGuardError):
            TimeGrid(0.0, 1.0, 0.01, (0.5, 0.2))
        with self.assertRaises(NumericalGuardError):
            TimeGrid(0.0, 1.0, 0.01, (1.5,))
        with self.assertRaises(NumericalGuardError):
            TimeGrid(0.0, 1.0, 0.0, (1.0,))

    def test_max_step(self):
        """Test the step bound helper."""
        self.assertEqual(TimeGrid.max_step(0.0), 0.01)
        self.assertAlmostEqual(TimeGrid.max_step(4.0), 0.0025)


class ChangePictureTest(SimpleTestCase):
    """Test cases for picture changes."""

    def setUp(self):
        """Set up test data."""
        self.omega = 3.0
        self.lab = LabFrequencies(20.0, 20.5, 20.0)
        self.params = DriveParams.from_lab(1, 1.0, self.omega, self.lab)
        self.layout = make_layout(1, [6])
        rng = np.random.default_rng(9)
        amplitudes = rng.normal(size=self.layout.dim) + 1j * rng.normal(size=self.layout.dim)
        self.psi = product_state(self.layout, [plus(), fock(6, 0)])
        self.random = Ket(self.layout, amplitudes / np.linalg.norm(amplitudes))

    def test_zero_time_identity(self):
        """Test that t = 0 is the identity for every picture pair."""
        for source in Picture:
            for target in Picture:
                with self.subTest(source=source.value, target=target.value):
                    moved = change_picture(self.random, 0.0, source, target, self.params)
                    np.testing.assert_allclose(moved.amplitudes, self.random.amplitudes, atol=1e-14)

    def test_upper_branch_phase(self):
        """Test the phase e^{-i Omega t} on |+,0> going to the drive frame."""
        t = 0.45
        moved = change_picture(self.psi, t, 'interaction', 'drive-rotating', self.params)
        np.testing.assert_allclose(moved.amplitudes, np.exp(-1j * self.omega * t) * self.psi.amplitudes, atol=1e-14)

    def test_round_trip_through_lab(self):
        """Test interaction -> lab -> interaction returns the input."""
        t = 1.7
        lab = change_picture(self.random, t, Picture.INTERACTION, Picture.LAB, self.params)
        back = change_picture(lab, t, Picture.LAB, Picture.INTERACTION, self.params)
        np.testing.assert_allclose(back.amplitudes, self.random.amplitudes, atol=1e-12)

    def test_lab_requires_frequencies(self):
        """Test that the lab picture needs lab frequencies."""
        with self.assertRaises(RegimeError):
            change_picture(self.psi, 1.0, 'drive-rotating', 'lab', DriveParamsFactory(omega_drive=1.0))

    def test_unknown_picture(self):
        """Test that an unknown picture name is rejected."""
        with self.assertRaises(ValueError):
            change_picture(self.psi, 1.0, 'interaction', 'heisenberg', self.params)

    def test_interaction_state_maps_to_exact_drive_frame_evolution(self):
        """Test e^{-i H_o t} U_I(t) = e^{-i H t} with H the drive-frame Hamiltonian."""
        t = 0.6
        params = DriveParamsFactory(omega_drive=2.0, delta_a=0.5)
        layout = make_layout(1, [12])
        psi0 = basis_ket(layout, ['g', 0])
        H_rot = build_rotating_frame(params, layout)
        H_I = build_interaction_picture(params, layout)
        dt = TimeGrid.max_step(H_I.omega_max)
        interaction_state = propagate_timedep(H_I, psi0, TimeGrid.uniform(t, 1, dt))[-1][1]
        moved = change_picture(interaction_state, t, 'interaction', 'drive-rotating', params)
        exact = propagate_static(H_rot, psi0, t)
        self.assertGreater(abs(moved.inner(exact)) ** 2, 1 - 1e-9)
