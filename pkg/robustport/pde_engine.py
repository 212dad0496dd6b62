# ==============================================================================
# robustport v1.0: Robust Portfolio Selection with Learning
# pde_engine.py - 유한차분 PDE 솔버
# ==============================================================================

"""
Finite-difference engine for robustport v1.0
Marches the Cauchy problem

    f_t + f_yy gamma^2 / (2 sigma^2) + f_y gamma (r - y) / sigma^2 = g(t, y),  f(T, y) = 0

backward in time with a theta-scheme on a uniform (t, y) grid.  Boundary
values at y_min and y_max come from the quadrature oracle at every time
step.  The result is an immutable SolutionSurface.
"""

import logging
import warnings

import numpy as np
from scipy.linalg import solve_banded

from .analytic_oracles import f_quadrature
from .config import PECLET_LIMIT
from .enums import Provenance
from .errors import DomainError, NumericalFailure, NumericalWarning
from .hjbi import source_g_tilde
from .market_model import gamma_at
from .models import QuadratureConfig, SolutionSurface

logger = logging.getLogger(__name__)

__all__ = ["FiniteDifferenceSolver", "solve_f", "surface_lookup", "source_g_tilde", "state_gradient"]


class FiniteDifferenceSolver:
    """
    Backward theta-scheme for the reduced HJBI equation.

    Attributes:
        params (MarketParams): Market constants
        prior (Prior): Drift prior
        grid (GridSpec): Rectangular grid
        quadrature (QuadratureConfig): Settings of the boundary oracle
        times (ndarray): Ascending time nodes
        states (ndarray): Ascending state nodes
        notes (list): Warnings attached to the resulting surface
    """

    def __init__(self, params, prior, grid, quadrature=None):
        """Validate the grid and lay out the nodes."""
        grid.check_coverage(params, prior)
        self.params = params
        self.prior = prior
        self.grid = grid
        self.quadrature = quadrature or QuadratureConfig()
        self.times = grid.times(params.T)
        self.states = grid.states()
        self.h = self.states[1] - self.states[0]
        self.notes = []

    def run(self):
        """March from f(T, .) = 0 down to t = 0 and return the surface."""
        if self.prior.degenerate:
            return self._degenerate_surface()

        n_t, n_y = self.times.size, self.states.size
        f = np.zeros((n_t, n_y))
        self._check_peclet()
        boundary = self._boundary_values()
        f[-1] = 0.0
        f[:, 0], f[:, -1] = boundary[:, 0], boundary[:, 1]
        f[-1, [0, -1]] = 0.0

        logger.info("solving f on %d x %d grid, theta=%.2f", n_t, n_y, self.grid.theta)
        for n in range(n_t - 2, -1, -1):
            f[n, 1:-1] = self._step(n, f[n + 1], f[n, 0], f[n, -1])
            if not np.all(np.isfinite(f[n])):
                raise NumericalFailure(f"non-finite values at time step {n} (t={self.times[n]:.6g})",
                                       stage=f"solve_f step {n}")
        f_y = np.vstack([state_gradient(row, self.h) for row in f])
        f_y[-1] = 0.0
        return SolutionSurface(self.grid, self.times, self.states, f, f_y,
                               Provenance.FiniteDifference, tuple(self.notes))

    def _coefficients(self, t):
        """Diffusion and advection coefficients of the generator at time t."""
        gamma = gamma_at(self.params, self.prior, t)
        s2 = self.params.sigma ** 2
        diffusion = 0.5 * gamma * gamma / s2
        advection = gamma * (self.params.r - self.states) / s2
        return diffusion, advection

    def _stencil(self, t):
        """Lower, main and upper stencil weights of L at every node."""
        diffusion, advection = self._coefficients(t)
        h2 = self.h * self.h
        lower = diffusion / h2 - advection / (2.0 * self.h)
        main = np.full(self.states.size, -2.0 * diffusion / h2)
        upper = diffusion / h2 + advection / (2.0 * self.h)
        return lower, main, upper

    def _apply(self, stencil, values):
        lower, main, upper = stencil
        return lower[1:-1] * values[:-2] + main[1:-1] * values[1:-1] + upper[1:-1] * values[2:]

    def _step(self, n, f_next, left_now, right_now):
        """Solve (I - theta dt L^n) f^n = (I + (1 - theta) dt L^{n+1}) f^{n+1} - dt g."""
        theta = self.grid.theta
        t_now, t_next = self.times[n], self.times[n + 1]
        dt = t_next - t_now
        now = self._stencil(t_now)
        nxt = self._stencil(t_next)
        interior = self.states[1:-1]

        source = (theta * source_g_tilde(self.params, self.prior, t_now, interior)
                  + (1.0 - theta) * source_g_tilde(self.params, self.prior, t_next, interior))
        rhs = f_next[1:-1] + (1.0 - theta) * dt * self._apply(nxt, f_next) - dt * source

        lower, main, upper = (w[1:-1] for w in now)
        rhs[0] += theta * dt * lower[0] * left_now
        rhs[-1] += theta * dt * upper[-1] * right_now

        banded = np.zeros((3, interior.size))
        banded[0, 1:] = -theta * dt * upper[:-1]
        banded[1, :] = 1.0 - theta * dt * main
        banded[2, :-1] = -theta * dt * lower[1:]
        return solve_banded((1, 1), banded, rhs)

    def _boundary_values(self):
        """Oracle values of f at y_min and y_max for every time node."""
        edges = np.array([self.states[0], self.states[-1]])
        return np.array([f_quadrature(self.params, self.prior, t, edges, self.quadrature)
                         for t in self.times])

    def _check_peclet(self):
        """Attach a warning when central advection is under-resolved."""
        worst = 0.0
        for t in (self.times[0], self.times[-1]):
            diffusion, advection = self._coefficients(t)
            if diffusion > 0:
                worst = max(worst, float(np.max(np.abs(advection))) * self.h / diffusion)
        if worst > PECLET_LIMIT:
            message = f"cell Peclet number {worst:.3g} exceeds {PECLET_LIMIT}; refine n_y"
            self.notes.append(message)
            warnings.warn(message, NumericalWarning, stacklevel=3)
            logger.warning(message)

    def _degenerate_surface(self):
        """Known drift: f = -(T - t)(r - y)^2 / (2 sigma^2) in closed form."""
        tau = (self.params.T - self.times)[:, None]
        gap = (self.params.r - self.states)[None, :]
        s2 = self.params.sigma ** 2
        f = -tau * gap * gap / (2.0 * s2)
        f_y = tau * gap / s2 * np.ones_like(f)
        logger.info("degenerate prior: closed-form surface")
        return SolutionSurface(self.grid, self.times, self.states, f, f_y, Provenance.FiniteDifference)


def state_gradient(row, h):
    """
    d/dy of one time row.

    Second-order central differences inside and second-order one-sided at
    the edges.  Wider stencils overshoot across the source kinks at
    |y - r| = a sqrt(gamma) and flip the sign of small gradients near T.
    """
    return np.gradient(row, h, edge_order=2)


def solve_f(params, prior, grid, quadrature=None):
    """Finite-difference SolutionSurface of f and f_y on the grid."""
    return FiniteDifferenceSolver(params, prior, grid, quadrature).run()


def _bracket(nodes, value):
    index = int(np.clip(np.searchsorted(nodes, value, side="right") - 1, 0, nodes.size - 2))
    weight = (value - nodes[index]) / (nodes[index + 1] - nodes[index])
    return index, weight


def surface_lookup(surface, t, y):
    """
    Bilinear (f, f_y) at (t, y); exact at grid nodes.

    y may be an array.  Raises DomainError outside the grid (no extrapolation).
    """
    times, states = surface.times, surface.states
    y_arr = np.asarray(y, dtype=float)
    if not times[0] <= t <= times[-1]:
        raise DomainError(f"t={t} outside surface times [{times[0]}, {times[-1]}]")
    if np.any(y_arr < states[0]) or np.any(y_arr > states[-1]):
        raise DomainError(f"y={y} outside surface states [{states[0]}, {states[-1]}]")
    i, wt = _bracket(times, t)
    j = np.clip(np.searchsorted(states, y_arr, side="right") - 1, 0, states.size - 2)
    wy = (y_arr - states[j]) / (states[j + 1] - states[j])

    def interpolate(table):
        low = (1.0 - wy) * table[i, j] + wy * table[i, j + 1]
        high = (1.0 - wy) * table[i + 1, j] + wy * table[i + 1, j + 1]
        return (1.0 - wt) * low + wt * high

    f, f_y = interpolate(surface.f), interpolate(surface.f_y)
    if y_arr.ndim == 0:
        return float(f), float(f_y)
    return f, f_y
