"""
Closed-form states predicted by the strong-driving model.

Atom-field targets (cat1, cat2, two-mode cat, dressed Rabi, mode Bell
evolution) are written in the interaction picture. The field-only states left
after measuring the atoms (triple cat, entangled coherent states) are written
in the frame rotating with the drive, where the dressed branches carry the
phases e^{-+i Omega t}.

Displacements follow the dynamical solution of the effective Hamiltonian,
alpha(t) = -g (e^{i delta t} - 1) / (2 delta), which tends to -i g t / 2 at
delta = 0. Published closed forms of this result circulate as
g (e^{i delta t} - 1) / (2 delta), without the leading minus sign, and the
two-mode cat amplitude is sometimes printed without its factor -i. Neither
matches the resonant limit -i g t / 2; the targets here use the sign and phase
the evolution actually produces.
"""

import numpy as np
from django.conf import settings

from hilbert.exceptions import DegenerateStateError, LayoutError, RegimeError
from hilbert.layout import CAT2_CUTOFF, SINGLE_MODE_CUTOFF, TWO_MODE_CUTOFF, make_layout
from hilbert.states import Ket, basis_ket, fock, minus, plus, product_state

from .coherent import coherent_vector

SQRT_HALF = 1.0 / np.sqrt(2.0)
DEGENERATE_NORM = 1e-10


def _cutoff(name, fallback):
    return int(getattr(settings, name, fallback))


def single_mode_cutoff():
    return _cutoff('DRIVENQED_SINGLE_MODE_CUTOFF', SINGLE_MODE_CUTOFF)


def two_mode_cutoff():
    return _cutoff('DRIVENQED_TWO_MODE_CUTOFF', TWO_MODE_CUTOFF)


def cat2_cutoff():
    return _cutoff('DRIVENQED_CAT2_CUTOFF', CAT2_CUTOFF)


def displacement_amplitude(g, delta, t):
    """
    alpha(t) = -g (e^{i delta t} - 1) / (2 delta).

    Written as -i (g t / 2) e^{i delta t / 2} sinc(delta t / 2) so that the
    resonant limit -i g t / 2 needs no special case.
    """
    return complex(-0.5j * g * t * np.exp(0.5j * delta * t) * np.sinc(delta * t / (2 * np.pi)))


def _resolve_layout(params, layout, n_modes, cutoff):
    if layout is None:
        layout = make_layout(params.n_atoms, [cutoff] * n_modes)
    params.check_layout(layout)
    return layout


def _field_layout(layout, n_modes, cutoff):
    if layout is None:
        return make_layout(0, [cutoff] * n_modes)
    if layout.n_atoms or layout.n_modes != n_modes:
        raise LayoutError(f"Expected a field-only layout with {n_modes} mode(s), got dims {layout.dims}")
    return layout


def _require_atoms(params, count, name):
    if params.n_atoms != count:
        raise RegimeError(f"{name} is defined for {count} atom(s), got {params.n_atoms}")


def _require_resonant(params, name):
    detunings = [delta for _, delta in params.couplings()]
    if any(delta != 0.0 for delta in detunings):
        raise RegimeError(f"{name} is defined for resonant modes (delta = 0), got {detunings}")


def _superpose(layout, branches):
    """Sum of coefficient * product_state(factors) over branches."""
    total = np.zeros(layout.dim, dtype=complex)
    for coefficient, factors in branches:
        total = total + coefficient * product_state(layout, factors).amplitudes
    return Ket(layout, total, normalized=False)


def _normalized(ket, name):
    if ket.norm < DEGENERATE_NORM:
        raise DegenerateStateError(f"{name}: branches cancel, the state is undefined")
    return ket.normalize()


def target_cat1(params, t, layout=None):
    """
    One-atom cat (|+>|alpha> + |->|-alpha>)/sqrt(2) in the interaction picture.

    Args:
        params: DriveParams with one atom and one mode
        t: time in units of 1/g
        layout: optional layout; defaults to the single-mode cutoff
    """
    _require_atoms(params, 1, "target_cat1")
    if params.two_mode:
        raise RegimeError("target_cat1 is a single-mode state")
    layout = _resolve_layout(params, layout, 1, single_mode_cutoff())
    cutoff = layout.subsystems[1].cutoff
    alpha = displacement_amplitude(params.g, params.delta, t)
    return _superpose(layout, [
        (SQRT_HALF, [plus(), coherent_vector(cutoff, alpha)]),
        (SQRT_HALF, [minus(), coherent_vector(cutoff, -alpha)]),
    ]).normalize()


def two_atom_sx_eigenstates():
    """
    Eigenstates of sigma_x^(1) + sigma_x^(2).

    Returns:
        list of (Ket, eigenvalue): |++> (+2), |--> (-2), |+-> (0), |-+> (0)
    """
    layout = make_layout(2, [])
    return [
        (basis_ket(layout, labels), eigenvalue)
        for labels, eigenvalue in ((['+', '+'], 2.0), (['-', '-'], -2.0), (['+', '-'], 0.0), (['-', '+'], 0.0))
    ]


def target_cat2(params, t, layout=None):
    """
    Two-atom state (1/2)[|++>|2a> + |-->|-2a> + (|+-> + |-+>)|0>].

    Only defined on resonance, where the Sigma sigma_x eigenvalues +-2 double
    the displacement and the 0 eigenspace leaves the field in vacuum.
    """
    _require_atoms(params, 2, "target_cat2")
    _require_resonant(params, "target_cat2")
    if params.two_mode:
        raise RegimeError("target_cat2 is a single-mode state")
    layout = _resolve_layout(params, layout, 1, cat2_cutoff())
    cutoff = layout.subsystems[2].cutoff
    alpha = displacement_amplitude(params.g, 0.0, t)
    vacuum = fock(cutoff, 0)
    return _superpose(layout, [
        (0.5, [plus(), plus(), coherent_vector(cutoff, 2 * alpha)]),
        (0.5, [minus(), minus(), coherent_vector(cutoff, -2 * alpha)]),
        (0.5, [plus(), minus(), vacuum]),
        (0.5, [minus(), plus(), vacuum]),
    ]).normalize()


def target_triple_cat(params, t, layout=None):
    """
    Field left by projecting the two-atom state onto |g1 g2>.

    N (e^{-2i Omega t}|2a> + e^{2i Omega t}|-2a> + 2|0>) in the drive frame.
    """
    _require_atoms(params, 2, "target_triple_cat")
    _require_resonant(params, "target_triple_cat")
    layout = _field_layout(layout, 1, cat2_cutoff())
    cutoff = layout.subsystems[0].cutoff
    alpha = displacement_amplitude(params.g, 0.0, t)
    phase = np.exp(-2j * params.omega_drive * t)
    return _normalized(_superpose(layout, [
        (phase, [coherent_vector(cutoff, 2 * alpha)]),
        (np.conj(phase), [coherent_vector(cutoff, -2 * alpha)]),
        (2.0, [fock(cutoff, 0)]),
    ]), "target_triple_cat")


def _two_mode_amplitudes(params, t):
    if not params.two_mode:
        raise RegimeError("Two-mode targets need g_b and delta_b")
    return (
        displacement_amplitude(params.g_a, params.delta_a, t),
        displacement_amplitude(params.g_b, params.delta_b, t),
    )


def target_two_mode_cat(params, t, layout=None):
    """(|+>|a>|b> + |->|-a>|-b>)/sqrt(2) with a = -i g_a t/2, b = -i g_b t/2."""
    _require_atoms(params, 1, "target_two_mode_cat")
    _require_resonant(params, "target_two_mode_cat")
    alpha, beta = _two_mode_amplitudes(params, t)
    layout = _resolve_layout(params, layout, 2, two_mode_cutoff())
    cut_a, cut_b = (layout.subsystems[i].cutoff for i in layout.mode_indices)
    return _superpose(layout, [
        (SQRT_HALF, [plus(), coherent_vector(cut_a, alpha), coherent_vector(cut_b, beta)]),
        (SQRT_HALF, [minus(), coherent_vector(cut_a, -alpha), coherent_vector(cut_b, -beta)]),
    ]).normalize()


def target_entangled_coherent(params, t, sign=1, layout=None):
    """
    Entangled coherent state N(e^{-i Omega t}|a,b> +- e^{i Omega t}|-a,-b>).

    sign=+1 is the field after finding the atom in |g>, sign=-1 after |e>.
    Coincident branches with sign=-1 raise DegenerateStateError.
    """
    if sign not in (1, -1):
        raise RegimeError(f"sign must be +1 or -1, got {sign}")
    _require_atoms(params, 1, "target_entangled_coherent")
    _require_resonant(params, "target_entangled_coherent")
    alpha, beta = _two_mode_amplitudes(params, t)
    layout = _field_layout(layout, 2, two_mode_cutoff())
    cut_a, cut_b = layout.dims[0] - 1, layout.dims[1] - 1
    phase = np.exp(-1j * params.omega_drive * t)
    return _normalized(_superpose(layout, [
        (phase, [coherent_vector(cut_a, alpha), coherent_vector(cut_b, beta)]),
        (sign * np.conj(phase), [coherent_vector(cut_a, -alpha), coherent_vector(cut_b, -beta)]),
    ]), f"target_entangled_coherent(sign={sign:+d})")


def target_mode_bell(layout=None):
    """(|0,1> + |1,0>)/sqrt(2) on two modes; atoms in ``layout`` are dropped."""
    if layout is None:
        layout = make_layout(0, [two_mode_cutoff()] * 2)
    if layout.n_modes != 2:
        raise LayoutError(f"The mode Bell state needs two modes, layout has {layout.n_modes}")
    field = layout.field_layout()
    return (basis_ket(field, [0, 1]) + basis_ket(field, [1, 0])).normalize()


def _bright_state(layout):
    """|-> (|0,1> + |1,0>)/sqrt(2) for one atom and two modes."""
    return (basis_ket(layout, ['-', 0, 1]) + basis_ket(layout, ['-', 1, 0])).normalize()


def target_mode_bell_evolution(params, t, layout=None):
    """
    cos(g t/sqrt(2))|+,0,0> - i sin(g t/sqrt(2))|->(|0,1> + |1,0>)/sqrt(2).

    Closed form of the two-mode dressed JC evolution from |+,0,0>.
    """
    _require_atoms(params, 1, "target_mode_bell_evolution")
    if not params.two_mode or params.g_a != params.g_b:
        raise RegimeError("The mode Bell evolution needs two modes with g_a == g_b")
    layout = _resolve_layout(params, layout, 2, two_mode_cutoff())
    angle = params.g * t / np.sqrt(2.0)
    amplitudes = (
        np.cos(angle) * basis_ket(layout, ['+', 0, 0]).amplitudes
        - 1j * np.sin(angle) * _bright_state(layout).amplitudes
    )
    return Ket(layout, amplitudes, normalized=False).normalize()


def target_dressed_rabi(params, t, sign=1, layout=None):
    """
    Dressed JC (sign=+1) or anti-JC (sign=-1) oscillation.

    sign=+1: cos(gt/2)|+,0> - i sin(gt/2)|-,1>
    sign=-1: cos(gt/2)|-,0> - i sin(gt/2)|+,1>
    """
    if sign not in (1, -1):
        raise RegimeError(f"sign must be +1 or -1, got {sign}")
    _require_atoms(params, 1, "target_dressed_rabi")
    layout = _resolve_layout(params, layout, 1, single_mode_cutoff())
    start, partner = ('+', '-') if sign == 1 else ('-', '+')
    angle = params.g * t / 2
    amplitudes = (
        np.cos(angle) * basis_ket(layout, [start, 0]).amplitudes
        - 1j * np.sin(angle) * basis_ket(layout, [partner, 1]).amplitudes
    )
    return Ket(layout, amplitudes, normalized=False).normalize()


def target_ramsey_jc(params, t, layout=None):
    """
    |g,0> evolved by the dressed JC form.

    (|-,0> + cos(gt/2)|+,0> - i sin(gt/2)|-,1>)/sqrt(2); the probability of
    finding the atom in |g> is cos^2(gt/4).
    """
    _require_atoms(params, 1, "target_ramsey_jc")
    layout = _resolve_layout(params, layout, 1, single_mode_cutoff())
    rabi = target_dressed_rabi(params, t, 1, layout)
    amplitudes = SQRT_HALF * (basis_ket(layout, ['-', 0]).amplitudes + rabi.amplitudes)
    return Ket(layout, amplitudes, normalized=False).normalize()
