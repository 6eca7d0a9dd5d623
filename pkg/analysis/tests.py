"""
Unit tests for the analysis app.
"""

import numpy as np
from django.test import SimpleTestCase
from scipy.special import factorial

from dynamics.factories import DriveParamsFactory
from hilbert.exceptions import ConfigError, LayoutError, NumericalGuardError
from hilbert.layout import make_layout
from hilbert.states import Ket, basis_ket, product_state, plus
from targets.coherent import Parity, cat_state, coherent, coherent_vector
from targets.predictions import target_cat1, target_entangled_coherent, target_mode_bell

from .measurement import MeasurementBasis, measure_qubit, measure_qubits, outcome, sample_outcome
from .metrics import (
    DensityMatrix, entropy, expectation, fidelity, mean_photon_number, negativity, partial_trace,
    photon_distribution, purity, quadrature_distribution,
)
from .wigner import GridSpec, wigner


def random_ket(layout, seed):
    rng = np.random.default_rng(seed)
    amplitudes = rng.normal(size=layout.dim) + 1j * rng.normal(size=layout.dim)
    return Ket(layout, amplitudes / np.linalg.norm(amplitudes))


def qubit_bell():
    layout = make_layout(2, [])
    return (basis_ket(layout, ['g', 'g']) + basis_ket(layout, ['e', 'e'])).normalize()


class FidelityTest(SimpleTestCase):
    """Test cases for state fidelity."""

    def setUp(self):
        """Set up test data."""
        self.layout = make_layout(0, [30])

    def test_identical_and_orthogonal(self):
        """Test F = 1 for identical states and 0 for orthogonal ones."""
        psi = basis_ket(self.layout, [0])
        self.assertAlmostEqual(fidelity(psi, psi), 1.0, places=14)
        self.assertAlmostEqual(fidelity(psi, basis_ket(self.layout, [1])), 0.0, places=14)

    def test_opposite_coherent_states(self):
        """Test F(|alpha>, |-alpha>) = e^{-4|alpha|^2} for alpha = 1."""
        value = fidelity(coherent(self.layout, 0, 1.0), coherent(self.layout, 0, -1.0))
        self.assertAlmostEqual(value, np.exp(-4.0), places=12)

    def test_blind_to_global_phase(self):
        """Test that a global phase does not change the fidelity."""
        psi = random_ket(self.layout, 3)
        self.assertAlmostEqual(fidelity(psi, psi.with_phase(0.7)), 1.0, places=12)

    def test_mixed_argument(self):
        """Test <psi|rho|psi> against the ket-ket value."""
        psi = random_ket(self.layout, 4)
        phi = random_ket(self.layout, 5)
        rho = DensityMatrix.from_ket(phi)
        self.assertAlmostEqual(fidelity(psi, rho), fidelity(psi, phi), places=12)
        self.assertAlmostEqual(fidelity(rho, psi), fidelity(psi, phi), places=12)

    def test_layout_mismatch(self):
        """Test that states on different layouts are refused."""
        with self.assertRaises(LayoutError):
            fidelity(basis_ket(self.layout, [0]), basis_ket(make_layout(0, [10]), [0]))

    def test_unnormalized_state(self):
        """Test that an unnormalized ket is refused."""
        psi = basis_ket(self.layout, [0]) + basis_ket(self.layout, [1])
        with self.assertRaises(NumericalGuardError):
            fidelity(psi, psi)


class DensityMatrixTest(SimpleTestCase):
    """Test cases for density matrices and reduced states."""

    def test_rejects_bad_trace(self):
        """Test that a trace different from 1 is refused."""
        with self.assertRaises(NumericalGuardError):
            DensityMatrix(make_layout(1, []), np.eye(2))

    def test_mixture_purity(self):
        """Test the purity of an equal mixture of two Fock states."""
        layout = make_layout(0, [3])
        rho = DensityMatrix.mixture([(0.5, basis_ket(layout, [0])), (0.5, basis_ket(layout, [1]))])
        self.assertAlmostEqual(purity(rho), 0.5, places=14)
        self.assertAlmostEqual(entropy(rho), np.log(2), places=12)

    def test_product_state_stays_pure(self):
        """Test that tracing out one factor of a product state leaves a pure state."""
        layout = make_layout(1, [20])
        psi = product_state(layout, [plus(), coherent_vector(20, 0.8)])
        self.assertAlmostEqual(purity(partial_trace(psi, [0])), 1.0, places=12)
        self.assertAlmostEqual(entropy(partial_trace(psi, [1])), 0.0, places=8)

    def test_bell_pair_reduces_to_identity(self):
        """Test that a Bell pair leaves I/2 on each qubit."""
        rho = partial_trace(qubit_bell(), [1])
        np.testing.assert_allclose(rho.entries, np.eye(2) / 2, atol=1e-14)
        self.assertAlmostEqual(entropy(rho), np.log(2), places=12)

    def test_ket_and_density_paths_agree(self):
        """Test that tracing a ket and its projector give the same result."""
        psi = random_ket(make_layout(1, [2, 2]), 6)
        from_ket = partial_trace(psi, [0, 2])
        from_rho = partial_trace(DensityMatrix.from_ket(psi), [2, 0])
        np.testing.assert_allclose(from_ket.entries, from_rho.entries, atol=1e-12)
        self.assertEqual(from_ket.layout.dims, (2, 3))

    def test_cat_atom_reduced_state(self):
        """Test the atom of the cat at alpha = -1.5i: eigenvalues (1 +- e^{-4.5}) / 2."""
        psi = target_cat1(DriveParamsFactory(), 3.0, make_layout(1, [40]))
        rho = partial_trace(psi, [0])
        overlap = np.exp(-4.5)
        np.testing.assert_allclose(rho.eigenvalues(), [(1 - overlap) / 2, (1 + overlap) / 2], atol=1e-10)
        lower, upper = (1 - overlap) / 2, (1 + overlap) / 2
        expected = -(lower * np.log(lower) + upper * np.log(upper))
        self.assertAlmostEqual(entropy(rho), expected, delta=1e-6)

    def test_pure_state_entropies_match(self):
        """Test that both halves of a pure state have the same entropy."""
        psi = random_ket(make_layout(1, [3]), 7)
        self.assertAlmostEqual(entropy(partial_trace(psi, [0])), entropy(partial_trace(psi, [1])), delta=1e-8)

    def test_keep_must_be_valid(self):
        """Test that an empty or out-of-range keep list is refused."""
        psi = qubit_bell()
        with self.assertRaises(LayoutError):
            partial_trace(psi, [])
        with self.assertRaises(LayoutError):
            partial_trace(psi, [2])


class NegativityTest(SimpleTestCase):
    """Test cases for the negativity."""

    def test_product_state(self):
        """Test zero negativity for a product state."""
        psi = basis_ket(make_layout(1, [2]), ['+', 1])
        self.assertAlmostEqual(negativity(psi, ([0], [1])), 0.0, places=12)

    def test_bell_states(self):
        """Test 1/2 for a qubit Bell pair and for the mode Bell state."""
        self.assertAlmostEqual(negativity(qubit_bell(), ([0], [1])), 0.5, places=12)
        field = make_layout(0, [4, 4])
        self.assertAlmostEqual(negativity(target_mode_bell(field), ([0], [1])), 0.5, delta=1e-6)

    def test_entangled_coherent_state(self):
        """Test the even entangled coherent state against its two-term Schmidt form."""
        field = make_layout(0, [20, 20])
        params = DriveParamsFactory(two_mode=True)
        psi = target_entangled_coherent(params, 2.0, 1, field)
        overlap = np.vdot(coherent_vector(20, 1.0), coherent_vector(20, -1.0)).real
        # (N+^2 |e+ e+> + N-^2 |e- e->) with N+-^2 = 2 (1 +- s) in the orthonormal
        # even / odd basis of each mode.
        weights = np.array([2 * (1 + overlap), 2 * (1 - overlap)])
        schmidt = weights / np.linalg.norm(weights)
        expected = (schmidt.sum() ** 2 - 1) / 2
        self.assertAlmostEqual(negativity(psi, ([0], [1])), expected, delta=1e-8)
        self.assertGreater(expected, 0.45)

    def test_bipartition_must_cover_layout(self):
        """Test that overlapping or partial bipartitions are refused."""
        psi = random_ket(make_layout(1, [2, 2]), 8)
        with self.assertRaises(LayoutError):
            negativity(psi, ([0], [1]))
        with self.assertRaises(LayoutError):
            negativity(psi, ([0, 1], [1, 2]))


class PhotonStatisticsTest(SimpleTestCase):
    """Test cases for photon-number and quadrature distributions."""

    def test_coherent_is_poissonian(self):
        """Test P(n) = e^{-|a|^2} |a|^{2n} / n! for alpha = 1."""
        layout = make_layout(0, [30])
        distribution = photon_distribution(coherent(layout, 0, 1.0))
        n = np.arange(31)
        expected = np.exp(-1.0) / factorial(n)
        np.testing.assert_allclose(distribution, expected, atol=1e-8)
        self.assertAlmostEqual(distribution.sum(), 1.0, places=12)

    def test_even_cat_has_no_odd_counts(self):
        """Test that odd photon numbers are absent from the even cat."""
        distribution = photon_distribution(cat_state(make_layout(0, [40]), 0, 2.0, Parity.EVEN))
        self.assertLess(distribution[1::2].max(), 1e-12)

    def test_mode_index_required_for_composite_states(self):
        """Test that a composite state needs a mode index."""
        psi = target_cat1(DriveParamsFactory(), 1.0, make_layout(1, [20]))
        with self.assertRaises(LayoutError):
            photon_distribution(psi)
        with self.assertRaises(LayoutError):
            photon_distribution(psi, 0)
        self.assertAlmostEqual(photon_distribution(psi, 1).sum(), 1.0, places=12)

    def test_mean_photon_number_matches_expectation(self):
        """Test <n> for a coherent state on one of two modes."""
        layout = make_layout(1, [20, 20])
        psi = coherent(layout, 2, 0.9j)
        self.assertAlmostEqual(mean_photon_number(psi, 2), 0.81, delta=1e-8)
        self.assertAlmostEqual(mean_photon_number(psi, 1), 0.0, places=14)

    def test_vacuum_quadrature(self):
        """Test |psi_0(x)|^2 = e^{-x^2} / sqrt(pi)."""
        x = np.linspace(-3, 3, 13)
        density = quadrature_distribution(basis_ket(make_layout(0, [5]), [0]), x)
        np.testing.assert_allclose(density, np.exp(-x ** 2) / np.sqrt(np.pi), atol=1e-14)

    def test_expectation_layout_mismatch(self):
        """Test that operator and state layouts must agree."""
        from hilbert.operators import number_op
        with self.assertRaises(LayoutError):
            expectation(number_op(make_layout(0, [3]), 0), basis_ket(make_layout(0, [4]), [0]))


class GridSpecTest(SimpleTestCase):
    """Test cases for Wigner grid parsing."""

    def test_parse(self):
        """Test 'min:max:step' parsing and axis construction."""
        spec = GridSpec.parse('-4:4:0.1')
        axis = spec.axis()
        self.assertEqual(len(axis), 81)
        self.assertAlmostEqual(axis[40], 0.0, places=14)
        self.assertEqual(str(spec), '-4:4:0.1')

    def test_invalid_specs(self):
        """Test that zero step, inverted bounds and junk are refused."""
        for text in ('-4:4:0', '4:-4:0.1', '-4:4', 'a:b:c'):
            with self.subTest(text=text):
                with self.assertRaises(ConfigError):
                    GridSpec.parse(text)

    def test_step_must_divide_span(self):
        """Test that a step which does not tile the range is refused."""
        with self.assertRaises(ConfigError) as caught:
            GridSpec.parse('-4:4:0.3')
        self.assertIn('grid.step', str(caught.exception.errors))
        self.assertEqual(len(GridSpec.parse('-4:4:0.25').axis()), 33)
        self.assertEqual(len(GridSpec.parse('-7:7:0.1').axis()), 141)


class WignerTest(SimpleTestCase):
    """Test cases for Wigner functions."""

    def test_vacuum(self):
        """Test W(0, 0) = 2/pi for the vacuum and unit integral."""
        grid = wigner(basis_ket(make_layout(0, [10]), [0]), GridSpec(-4, 4, 0.1))
        self.assertAlmostEqual(grid.value_at(0.0, 0.0), 2 / np.pi, delta=1e-3)
        self.assertTrue(0.98 <= grid.integral() <= 1.02)
        self.assertTrue(grid.boundary_ok)

    def test_coherent_peak(self):
        """Test that |alpha = 1> peaks at x = sqrt(2), p = 0."""
        grid = wigner(coherent(make_layout(0, [30]), 0, 1.0), GridSpec(-5, 5, 0.05))
        i_p, i_x = np.unravel_index(np.argmax(grid.values), grid.values.shape)
        self.assertLessEqual(abs(grid.x_axis[i_x] - np.sqrt(2)), 0.05)
        self.assertLessEqual(abs(grid.p_axis[i_p]), 0.05)
        self.assertAlmostEqual(grid.values.max(), 2 / np.pi, delta=1e-3)
        self.assertGreater(grid.minimum, -1e-6)

    def test_even_cat_interference(self):
        """Test negative fringes and normalisation for the even cat with alpha = 2."""
        grid = wigner(cat_state(make_layout(0, [40]), 0, 2.0, Parity.EVEN), GridSpec(-7, 7, 0.1))
        self.assertLess(grid.minimum, -0.05)
        self.assertTrue(0.98 <= grid.integral() <= 1.02)

    def test_position_marginal(self):
        """Test that integrating over p gives the position quadrature density."""
        psi = cat_state(make_layout(0, [40]), 0, 1.5, Parity.ODD)
        grid = wigner(psi, GridSpec(-7, 7, 0.1))
        expected = quadrature_distribution(psi, grid.x_axis)
        self.assertLess(np.max(np.abs(grid.position_marginal() - expected)), 2e-3)

    def test_reduced_mode(self):
        """Test the Wigner function of a mode inside a larger state."""
        layout = make_layout(1, [20])
        psi = coherent(layout, 1, 1.0)
        grid = wigner(psi, GridSpec(-4, 4, 0.5), mode_index=1)
        alone = wigner(coherent(make_layout(0, [20]), 0, 1.0), GridSpec(-4, 4, 0.5))
        np.testing.assert_allclose(grid.values, alone.values, atol=1e-12)
        with self.assertRaises(LayoutError):
            wigner(psi, GridSpec(-4, 4, 0.5))

    def test_narrow_grid_is_flagged(self):
        """Test that a grid cutting through the state reports its boundary."""
        with self.assertLogs('analysis.wigner', level='WARNING'):
            grid = wigner(coherent(make_layout(0, [30]), 0, 2.0), GridSpec(-1, 1, 0.1))
        self.assertFalse(grid.boundary_ok)


class MeasurementTest(SimpleTestCase):
    """Test cases for projective atom measurements."""

    def test_certain_outcome(self):
        """Test that |g,0> gives g with probability 1 and e is absent."""
        layout = make_layout(1, [5])
        outcomes = measure_qubit(basis_ket(layout, ['g', 0]), 0)
        self.assertAlmostEqual(outcome(outcomes, 'g').probability, 1.0, places=14)
        self.assertTrue(outcome(outcomes, 'e').absent)
        self.assertIsNone(outcome(outcomes, 'e').conditional)

    def test_dressed_measurement_of_cat(self):
        """Test that measuring the cat's atom in |+-> leaves |+-alpha>."""
        layout = make_layout(1, [30])
        psi = target_cat1(DriveParamsFactory(), 2.0, layout)
        field = layout.subset([1])
        for label, alpha in (('+', -1j), ('-', 1j)):
            with self.subTest(outcome=label):
                branch = outcome(measure_qubit(psi, 0, MeasurementBasis.DRESSED), label)
                self.assertAlmostEqual(branch.probability, 0.5, places=12)
                self.assertGreaterEqual(fidelity(branch.conditional, coherent(field, 0, alpha)), 1 - 1e-10)
                self.assertEqual(branch.post_state.layout, layout)

    def test_bare_measurement_leaves_cat(self):
        """Test that finding |g> in the drive frame leaves e^{-i W t}|a> + e^{i W t}|-a>."""
        from dynamics.evolution import change_picture
        params = DriveParamsFactory(omega_drive=4.0)
        layout = make_layout(1, [30])
        t = 2.0
        rotating = change_picture(target_cat1(params, t, layout), t, 'interaction', 'drive-rotating', params)
        branch = outcome(measure_qubit(rotating, 0, 'bare'), 'g')
        field = layout.subset([1])
        phase = np.exp(-1j * params.omega_drive * t)
        expected = Ket(
            field,
            phase * coherent_vector(30, -1j) + np.conj(phase) * coherent_vector(30, 1j),
            normalized=False,
        ).normalize()
        self.assertGreaterEqual(fidelity(branch.conditional, expected), 1 - 1e-8)

    def test_outcomes_reconstruct_reduced_state(self):
        """Test sum_k p_k |c_k><c_k| = reduced state of the unmeasured part."""
        psi = random_ket(make_layout(2, [3]), 9)
        outcomes = measure_qubits(psi, [1, 0], 'dressed')
        self.assertEqual([item.label for item in outcomes], ['++', '+-', '-+', '--'])
        self.assertAlmostEqual(sum(item.probability for item in outcomes), 1.0, places=12)
        reconstructed = sum(
            item.probability * np.outer(item.conditional.amplitudes, item.conditional.amplitudes.conj())
            for item in outcomes
        )
        np.testing.assert_allclose(reconstructed, partial_trace(psi, [2]).entries, atol=1e-9)

    def test_post_state_is_collapsed(self):
        """Test that the post-measurement state is an eigenstate of the measured atom."""
        psi = random_ket(make_layout(2, [2]), 10)
        branch = outcome(measure_qubits(psi, [1]), 'e')
        again = outcome(measure_qubit(branch.post_state, 1), 'e')
        self.assertAlmostEqual(again.probability, 1.0, places=12)

    def test_only_atoms_are_measured(self):
        """Test that mode indices and empty selections are refused."""
        psi = basis_ket(make_layout(1, [3]), ['g', 0])
        with self.assertRaises(LayoutError):
            measure_qubit(psi, 1)
        with self.assertRaises(LayoutError):
            measure_qubits(psi, [])

    def test_seeded_sampling(self):
        """Test that sampling is reproducible and never picks an absent outcome."""
        psi = random_ket(make_layout(2, []), 11)
        outcomes = measure_qubits(psi, [0, 1])
        first = [sample_outcome(outcomes, seed=seed).label for seed in range(20)]
        second = [sample_outcome(outcomes, seed=seed).label for seed in range(20)]
        self.assertEqual(first, second)
        certain = measure_qubit(basis_ket(make_layout(1, []), ['e']), 0)
        for seed in range(10):
            self.assertEqual(sample_outcome(certain, seed=seed).label, 'e')
