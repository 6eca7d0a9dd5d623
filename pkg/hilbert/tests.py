"""
Unit tests for the hilbert app.

This module tests layouts, local and product kets, and embedded operators.
"""

import numpy as np
from django.test import SimpleTestCase

from .exceptions import ConfigError, DegenerateStateError, LayoutError
from .layout import BosonMode, HilbertLayout, Qubit, make_layout
from .operators import (
    OperatorMatrix, boson_ops, dressed_ops, embed, excitation_number, identity, number_op, qubit_ops,
)
from .states import Ket, basis_ket, excited, fock, ground, minus, plus, product_state


class LayoutTest(SimpleTestCase):
    """Test cases for HilbertLayout construction."""

    def test_dimensions(self):
        """Test the flattened dimension for typical layouts."""
        self.assertEqual(make_layout(1, [20]).dim, 42)
        self.assertEqual(make_layout(2, [30]).dim, 124)
        self.assertEqual(make_layout(1, [15, 15]).dim, 512)

    def test_atoms_before_modes(self):
        """Test that atoms occupy the leading indices."""
        layout = make_layout(2, [3, 4])
        self.assertEqual(layout.atom_indices, (0, 1))
        self.assertEqual(layout.mode_indices, (2, 3))
        self.assertEqual(layout.dims, (2, 2, 4, 5))
        self.assertEqual(layout.mode(1), 3)

    def test_field_only_layout(self):
        """Test that a layout without atoms is allowed."""
        layout = make_layout(0, [5])
        self.assertEqual(layout.dim, 6)
        self.assertEqual(layout.n_atoms, 0)

    def test_empty_layout_rejected(self):
        """Test that zero subsystems are rejected."""
        with self.assertRaises(LayoutError):
            make_layout(0, [])

    def test_bad_cutoff_rejected(self):
        """Test that a cutoff below one is rejected."""
        with self.assertRaises(LayoutError):
            make_layout(1, [0])
        with self.assertRaises(LayoutError):
            BosonMode(2.5)

    def test_too_many_modes_rejected(self):
        """Test that a third mode is rejected."""
        with self.assertRaises(LayoutError):
            make_layout(1, [2, 2, 2])

    def test_subset_keeps_layout_order(self):
        """Test that subsets preserve the original ordering."""
        layout = make_layout(2, [3, 4])
        reduced = layout.subset([3, 0])
        self.assertEqual(reduced.dims, (2, 5))
        self.assertEqual(layout.field_layout().dims, (4, 5))

    def test_description_round_trip(self):
        """Test describe/from_description."""
        layout = make_layout(2, [7, 3])
        self.assertEqual(HilbertLayout.from_description(layout.describe()), layout)

    def test_unknown_description_rejected(self):
        """Test that an unknown subsystem kind is rejected."""
        with self.assertRaises(LayoutError):
            HilbertLayout.from_description([{'kind': 'qutrit'}])

    def test_check_index_kind(self):
        """Test that a kind mismatch is reported."""
        layout = make_layout(1, [2])
        self.assertIsInstance(layout.check_index(0, Qubit), Qubit)
        with self.assertRaises(LayoutError):
            layout.check_index(0, BosonMode)
        with self.assertRaises(LayoutError):
            layout.check_index(2)


class KetTest(SimpleTestCase):
    """Test cases for kets and product states."""

    def setUp(self):
        """Set up test data."""
        self.layout = make_layout(1, [20])

    def test_ground_vacuum_index(self):
        """Test that |g,0> sits at flat index 0."""
        psi = product_state(self.layout, [ground(), fock(20, 0)])
        self.assertEqual(int(np.argmax(np.abs(psi.amplitudes))), 0)

    def test_excited_vacuum_index(self):
        """Test that |e,0> sits at flat index 21."""
        psi = product_state(self.layout, [excited(), fock(20, 0)])
        self.assertEqual(psi.amplitudes[21], 1.0)

    def test_dressed_superposition(self):
        """Test that |+,0> = (e_0 + e_21)/sqrt(2)."""
        psi = product_state(self.layout, [plus(), fock(20, 0)])
        expected = np.zeros(42, dtype=complex)
        expected[[0, 21]] = 1 / np.sqrt(2)
        np.testing.assert_allclose(psi.amplitudes, expected, atol=1e-15)

    def test_factors_are_normalised(self):
        """Test that unnormalised factors are rescaled."""
        psi = product_state(self.layout, [[3.0, 4.0], fock(20, 2)])
        self.assertAlmostEqual(psi.norm, 1.0, places=14)

    def test_wrong_factor_count(self):
        """Test that a missing factor is rejected."""
        with self.assertRaises(LayoutError):
            product_state(self.layout, [ground()])

    def test_wrong_local_dimension(self):
        """Test that a factor with the wrong dimension is rejected."""
        with self.assertRaises(LayoutError):
            product_state(self.layout, [ground(), fock(5, 0)])

    def test_zero_factor(self):
        """Test that a zero-norm factor is rejected."""
        with self.assertRaises(DegenerateStateError):
            product_state(self.layout, [[0.0, 0.0], fock(20, 0)])

    def test_normalized_flag_enforced(self):
        """Test that a flagged ket must have unit norm."""
        with self.assertRaises(DegenerateStateError):
            Ket(self.layout, np.ones(42))
        self.assertFalse(Ket(self.layout, np.ones(42), normalized=False).normalized)

    def test_amplitudes_frozen(self):
        """Test that amplitudes cannot be modified in place."""
        psi = basis_ket(self.layout, ['g', 0])
        with self.assertRaises(ValueError):
            psi.amplitudes[0] = 0.0

    def test_basis_ket_levels(self):
        """Test dressed and bare labels in basis_ket."""
        psi = basis_ket(self.layout, ['-', 3])
        np.testing.assert_allclose(psi.tensor()[:, 3], minus(), atol=1e-15)
        self.assertEqual(basis_ket(self.layout, [1, 0]).amplitudes[21], 1.0)

    def test_inner_and_arithmetic(self):
        """Test inner products and linear combinations."""
        g0 = basis_ket(self.layout, ['g', 0])
        e0 = basis_ket(self.layout, ['e', 0])
        combined = (g0 + e0).normalize()
        self.assertAlmostEqual(combined.inner(basis_ket(self.layout, ['+', 0])), 1.0, places=14)
        self.assertAlmostEqual((g0 - g0).norm, 0.0)
        with self.assertRaises(DegenerateStateError):
            (g0 - g0).normalize()


class OperatorTest(SimpleTestCase):
    """Test cases for embedded operators."""

    def setUp(self):
        """Set up test data."""
        self.layout = make_layout(1, [3])

    def test_annihilation(self):
        """Test a|2> = sqrt(2)|1> and a|0> = 0."""
        a, _ = boson_ops(self.layout, 1)
        image = a @ basis_ket(self.layout, ['g', 2])
        np.testing.assert_allclose(image.amplitudes, np.sqrt(2) * basis_ket(self.layout, ['g', 1]).amplitudes)
        self.assertEqual((a @ basis_ket(self.layout, ['g', 0])).norm, 0.0)

    def test_truncated_creation(self):
        """Test that a^dagger annihilates |n_max>."""
        _, a_dagger = boson_ops(self.layout, 1)
        self.assertEqual((a_dagger @ basis_ket(self.layout, ['e', 3])).norm, 0.0)

    def test_canonical_commutator_below_edge(self):
        """Test [a, a^dagger] acts as identity below the cutoff."""
        a, a_dagger = boson_ops(self.layout, 1)
        commutator = a.commutator(a_dagger)
        for n in range(3):
            psi = basis_ket(self.layout, ['g', n])
            np.testing.assert_allclose((commutator @ psi).amplitudes, psi.amplitudes, atol=1e-14)

    def test_qubit_ladder(self):
        """Test sigma^+|g> = |e> and sigma^-|g> = 0."""
        sigma_minus, sigma_plus, _ = qubit_ops(self.layout, 0)
        g0 = basis_ket(self.layout, ['g', 0])
        np.testing.assert_array_equal((sigma_plus @ g0).amplitudes, basis_ket(self.layout, ['e', 0]).amplitudes)
        self.assertEqual((sigma_minus @ g0).norm, 0.0)

    def test_sigma_x_eigenvectors(self):
        """Test that |+-> are sigma_x eigenvectors with eigenvalues +-1."""
        sigma_x = qubit_ops(self.layout, 0)[2]
        for label, eigenvalue in (('+', 1.0), ('-', -1.0)):
            psi = basis_ket(self.layout, [label, 1])
            np.testing.assert_allclose((sigma_x @ psi).amplitudes, eigenvalue * psi.amplitudes, atol=1e-15)
        np.testing.assert_allclose((sigma_x @ sigma_x).entries, identity(self.layout).entries, atol=1e-15)

    def test_wrong_subsystem_kind(self):
        """Test that ladder builders check the subsystem kind."""
        with self.assertRaises(LayoutError):
            boson_ops(self.layout, 0)
        with self.assertRaises(LayoutError):
            qubit_ops(self.layout, 1)

    def test_disjoint_operators_commute(self):
        """Test that operators on different subsystems commute exactly."""
        layout = make_layout(2, [2, 2])
        a, _ = boson_ops(layout, 2)
        b, b_dagger = boson_ops(layout, 3)
        sigma_x = qubit_ops(layout, 0)[2]
        sigma_minus = qubit_ops(layout, 1)[0]
        for left, right in ((a, b_dagger), (sigma_x, a), (sigma_minus, b), (sigma_x, sigma_minus)):
            self.assertEqual(left.commutator(right).max_abs(), 0.0)

    def test_number_spectrum(self):
        """Test that a^dagger a has eigenvalues 0..n_max exactly."""
        n = number_op(make_layout(0, [6]), 0)
        np.testing.assert_allclose(np.linalg.eigvalsh(n.entries), np.arange(7), atol=1e-12)

    def test_embedding_preserves_norm(self):
        """Test that embedding keeps the spectral norm of a local factor."""
        local = np.array([[0.3, 1.2j], [-0.7, 2.0]])
        embedded = embed(make_layout(1, [3]), 0, local)
        self.assertAlmostEqual(np.linalg.norm(embedded.entries, 2), np.linalg.norm(local, 2), places=12)

    def test_dressed_projectors(self):
        """Test the dressed-basis operator algebra."""
        p_plus, p_minus, s_plus, s_minus = dressed_ops(self.layout, 0)
        np.testing.assert_allclose((p_plus + p_minus).entries, identity(self.layout).entries, atol=1e-15)
        np.testing.assert_allclose((s_plus @ s_minus).entries, p_plus.entries, atol=1e-15)
        image = s_minus @ basis_ket(self.layout, ['+', 0])
        np.testing.assert_allclose(image.amplitudes, basis_ket(self.layout, ['-', 0]).amplitudes, atol=1e-15)

    def test_excitation_number(self):
        """Test N = sigma^dagger sigma + a^dagger a on a basis state."""
        N = excitation_number(self.layout)
        psi = basis_ket(self.layout, ['e', 2])
        np.testing.assert_allclose((N @ psi).amplitudes, 3 * psi.amplitudes)

    def test_hermiticity_defect(self):
        """Test the relative hermiticity check."""
        sigma_minus, _, sigma_x = qubit_ops(self.layout, 0)
        self.assertTrue(sigma_x.is_hermitian())
        self.assertFalse(sigma_minus.is_hermitian())
        self.assertTrue((0.0 * sigma_x).is_hermitian())

    def test_shape_mismatch(self):
        """Test that operators must match the layout dimension."""
        with self.assertRaises(LayoutError):
            OperatorMatrix(self.layout, np.eye(3))
        with self.assertRaises(LayoutError):
            identity(self.layout) @ identity(make_layout(1, [4]))


class ExceptionTest(SimpleTestCase):
    """Test cases for the exception hierarchy."""

    def test_config_error_joins_messages(self):
        """Test that ConfigError keeps every field message."""
        error = ConfigError(['params.g_a: required', 'cutoffs.0: too small'])
        self.assertEqual(error.errors, ['params.g_a: required', 'cutoffs.0: too small'])
        self.assertIn('cutoffs.0', str(error))
        self.assertIsInstance(error, ValueError)
