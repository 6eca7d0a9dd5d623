"""
Wigner functions of single-mode states.

W(beta) = (2/pi) Tr[D(beta) rho D(beta)^dagger Pi] with Pi the parity operator
and beta = (x + i p)/sqrt(2), evaluated exactly in the truncated Fock basis
from the Laguerre form of the |m><n| Wigner functions:

    W_mn = (2/pi) (-1)^n sqrt(n!/m!) (2 beta*)^(m-n) e^{-2|beta|^2}
           L_n^(m-n)(4|beta|^2),   m >= n,   W_nm = conj(W_mn).

The phase-space measure is d^2 beta = dx dp / 2.
"""

import logging
from dataclasses import dataclass, field

import numpy as np
from scipy.special import eval_genlaguerre, gammaln

from hilbert.exceptions import ConfigError, LayoutError

from .metrics import reduce_to_mode

logger = logging.getLogger(__name__)

BOUNDARY_TOLERANCE = 1e-4
NEGLIGIBLE_ELEMENT = 1e-14


@dataclass(frozen=True)
class GridSpec:
    """Uniform axis from ``minimum`` to ``maximum`` in steps of ``step``."""

    minimum: float
    maximum: float
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise ConfigError([f"grid.step: must be positive, got {self.step}"])
        if not self.maximum > self.minimum:
            raise ConfigError([f"grid: maximum {self.maximum} must exceed minimum {self.minimum}"])
        span = self.maximum - self.minimum
        if abs(round(span / self.step) * self.step - span) > 1e-9 * max(1.0, abs(span)):
            raise ConfigError([f"grid.step: {self.step:g} does not divide [{self.minimum:g}, {self.maximum:g}]"])

    @classmethod
    def parse(cls, text):
        """Parse ``"min:max:step"``, e.g. ``"-4:4:0.1"``."""
        parts = str(text).split(':')
        if len(parts) != 3:
            raise ConfigError([f"grid: expected 'min:max:step', got {text!r}"])
        try:
            minimum, maximum, step = (float(part) for part in parts)
        except ValueError:
            raise ConfigError([f"grid: non-numeric value in {text!r}"])
        return cls(minimum, maximum, step)

    def axis(self):
        count = int(round((self.maximum - self.minimum) / self.step)) + 1
        return np.linspace(self.minimum, self.maximum, count)

    def __str__(self):
        return f"{self.minimum:g}:{self.maximum:g}:{self.step:g}"


@dataclass(frozen=True, eq=False)
class WignerGrid:
    """
    Wigner function sampled on a rectangular grid.

    ``values[i_p, i_x]`` holds W(x_axis[i_x], p_axis[i_p]).
    """

    x_axis: np.ndarray = field(repr=False)
    p_axis: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)

    @property
    def dx(self):
        return float(self.x_axis[1] - self.x_axis[0]) if self.x_axis.size > 1 else 0.0

    @property
    def dp(self):
        return float(self.p_axis[1] - self.p_axis[0]) if self.p_axis.size > 1 else 0.0

    def integral(self):
        """sum W dx dp / 2; close to 1 for a well-contained state."""
        return float(np.sum(self.values) * self.dx * self.dp / 2)

    def position_marginal(self):
        """(1/2) sum_p W dp, the position-quadrature density on x_axis."""
        return np.sum(self.values, axis=0) * self.dp / 2

    @property
    def boundary_max(self):
        v = self.values
        return float(max(np.abs(v[0]).max(), np.abs(v[-1]).max(), np.abs(v[:, 0]).max(), np.abs(v[:, -1]).max()))

    @property
    def boundary_ok(self):
        return self.boundary_max < BOUNDARY_TOLERANCE

    def value_at(self, x, p):
        """Value at the grid point nearest to (x, p)."""
        return float(self.values[np.abs(self.p_axis - p).argmin(), np.abs(self.x_axis - x).argmin()])

    @property
    def minimum(self):
        return float(self.values.min())


def wigner(state, grid, p_grid=None, mode_index=None):
    """
    Wigner function of one mode.

    Args:
        state: Ket or DensityMatrix over a single mode, or a larger state with
            ``mode_index`` naming the mode to keep
        grid: GridSpec for x (and p unless ``p_grid`` is given)
        p_grid: optional GridSpec for p
        mode_index: subsystem to reduce to

    Returns:
        WignerGrid
    """
    if mode_index is None and len(state.layout) != 1:
        raise LayoutError(f"wigner needs a single-mode state, got dims {state.layout.dims}; pass mode_index")
    rho = reduce_to_mode(state, mode_index).entries
    x_axis = grid.axis()
    p_axis = (p_grid or grid).axis()
    X, P = np.meshgrid(x_axis, p_axis)
    beta = (X + 1j * P) / np.sqrt(2.0)
    radius = 4 * np.abs(beta) ** 2
    envelope = (2 / np.pi) * np.exp(-radius / 2)
    size = rho.shape[0]
    log_factorial = gammaln(np.arange(size) + 1)
    values = np.zeros(beta.shape)
    for k in range(size):
        # k = m - n; diagonal terms count once, off-diagonal pairs twice through Re.
        power = (2 * np.conj(beta)) ** k
        for n in range(size - k):
            element = rho[n + k, n]
            if abs(element) < NEGLIGIBLE_ELEMENT:
                continue
            scale = (-1) ** n * np.exp(0.5 * (log_factorial[n] - log_factorial[n + k]))
            term = element * scale * power * eval_genlaguerre(n, k, radius)
            values += np.real(term) if k == 0 else 2 * np.real(term)
    result = WignerGrid(x_axis, p_axis, values * envelope)
    if not result.boundary_ok:
        logger.warning(f"Wigner grid too narrow: boundary |W| reaches {result.boundary_max:.2e}")
    return result
