"""
Truncated coherent and cat states.

Amplitudes follow c_n = e^{-|alpha|^2/2} alpha^n / sqrt(n!) and are built by
the recursion c_n = c_{n-1} alpha / sqrt(n). A tail guard refuses amplitudes
whose Poisson tail is not contained in the Fock cutoff.
"""

from enum import Enum

import numpy as np

from hilbert.exceptions import DegenerateStateError, TruncationError
from hilbert.layout import BosonMode, Qubit
from hilbert.states import ground, fock, product_state


class Parity(str, Enum):
    EVEN = 'even'
    ODD = 'odd'


def tail_budget(alpha):
    """Smallest admissible cutoff for a coherent amplitude."""
    size = abs(alpha)
    return size ** 2 + 6 * size + 10


def check_tail(alpha, cutoff):
    if tail_budget(alpha) > cutoff:
        raise TruncationError(
            f"Cutoff {cutoff} too small for |alpha| = {abs(alpha):.4f}; "
            f"needs at least {tail_budget(alpha):.1f}"
        )


def coherent_vector(cutoff, alpha):
    """
    Local amplitudes of |alpha> on a mode truncated at ``cutoff``.

    Returns:
        np.ndarray: normalised vector of length cutoff + 1
    """
    check_tail(alpha, cutoff)
    alpha = complex(alpha)
    amplitudes = np.empty(cutoff + 1, dtype=complex)
    amplitudes[0] = np.exp(-abs(alpha) ** 2 / 2)
    for n in range(1, cutoff + 1):
        amplitudes[n] = amplitudes[n - 1] * alpha / np.sqrt(n)
    return amplitudes / np.linalg.norm(amplitudes)


def cat_vector(cutoff, alpha, parity=Parity.EVEN):
    """Local amplitudes of N(|alpha> +- |-alpha>)."""
    parity = Parity(parity)
    sign = 1.0 if parity is Parity.EVEN else -1.0
    combined = coherent_vector(cutoff, alpha) + sign * coherent_vector(cutoff, -alpha)
    norm = np.linalg.norm(combined)
    if norm < 1e-12:
        raise DegenerateStateError(f"{parity.value} cat with alpha = {alpha} is the zero vector")
    return combined / norm


def _embed_local(layout, mode_index, vector):
    """Product state with ``vector`` on one mode, |g> on atoms and |0> elsewhere."""
    layout.check_index(mode_index, BosonMode)
    factors = []
    for index, subsystem in enumerate(layout.subsystems):
        if index == mode_index:
            factors.append(vector)
        elif isinstance(subsystem, Qubit):
            factors.append(ground())
        else:
            factors.append(fock(subsystem.cutoff, 0))
    return product_state(layout, factors)


def coherent(layout, mode_index, alpha):
    """
    Coherent state |alpha> on the mode at ``mode_index``.

    Every other subsystem is left in |g> or the vacuum.
    """
    cutoff = layout.check_index(mode_index, BosonMode).cutoff
    return _embed_local(layout, mode_index, coherent_vector(cutoff, alpha))


def cat_state(layout, mode_index, alpha, parity=Parity.EVEN):
    """Even or odd coherent state N(|alpha> +- |-alpha>) on one mode."""
    cutoff = layout.check_index(mode_index, BosonMode).cutoff
    return _embed_local(layout, mode_index, cat_vector(cutoff, alpha, parity))
