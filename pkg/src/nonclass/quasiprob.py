"""Husimi and Wigner evaluation on points and phase-space grids.

The Husimi density is Q(beta) = |<beta|psi>|^2 / pi, bounded by 1/pi.
The Wigner function is evaluated by the displaced-parity sum
W(beta) = (2/pi) sum_m (-1)^m |<m|D(-beta)|psi>|^2, which stays inside
[-2/pi, 2/pi] by construction.  Grids sample cell centers, so summing
values times the cell area is the midpoint quadrature rule.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DomainError
from .states import PhasePoint, _as_complex

WIGNER_GUARD = 30.0


@dataclass(frozen=True, eq=False)
class QGrid:
    """Values of Q or W sampled at the cell centers of a rectangle.

    values[i][j] holds the point (x_centers[j], y_centers[i]); rows scan
    y, columns scan x.
    """

    x_min: float
    x_max: float
    y_min: float
    y_max: float
    resolution: int
    what: str
    values: np.ndarray

    def cell_area(self):
        dx = (self.x_max - self.x_min) / self.resolution
        dy = (self.y_max - self.y_min) / self.resolution
        return dx * dy

    def x_centers(self):
        dx = (self.x_max - self.x_min) / self.resolution
        return self.x_min + dx * (np.arange(self.resolution) + 0.5)

    def y_centers(self):
        dy = (self.y_max - self.y_min) / self.resolution
        return self.y_min + dy * (np.arange(self.resolution) + 0.5)


def q_value(state, beta):
    """Husimi density at one point."""
    beta = _as_complex(beta)
    amp = _kernels.coherent_overlaps(state.amplitudes, np.array([beta]))[0]
    return float((amp.real**2 + amp.imag**2) / math.pi)


def _check_window(window, resolution):
    x_min, x_max, y_min, y_max = map(float, window)
    if not (x_min < x_max and y_min < y_max):
        raise DomainError("window must satisfy x_min < x_max and y_min < y_max")
    if resolution < 1 or resolution != int(resolution):
        raise DomainError(f"resolution must be a positive integer, got {resolution}")
    return x_min, x_max, y_min, y_max, int(resolution)


def _center_lattice(x_min, x_max, y_min, y_max, res):
    dx = (x_max - x_min) / res
    dy = (y_max - y_min) / res
    xs = x_min + dx * (np.arange(res) + 0.5)
    ys = y_min + dy * (np.arange(res) + 0.5)
    return (xs[None, :] + 1j * ys[:, None]).ravel(), xs, ys


def q_grid(state, window, resolution):
    """Husimi density on the cell-center lattice of a window.

    window is (x_min, x_max, y_min, y_max).
    """
    x_min, x_max, y_min, y_max, res = _check_window(window, resolution)
    betas, _, _ = _center_lattice(x_min, x_max, y_min, y_max, res)
    amps = _kernels.coherent_overlaps(state.amplitudes, betas)
    vals = (amps.real**2 + amps.imag**2) / math.pi
    return QGrid(x_min, x_max, y_min, y_max, res, "q", vals.reshape(res, res))


def wigner_value(state, beta):
    """Wigner function at one point via the displaced-parity sum."""
    beta = _as_complex(beta)
    if abs(beta) > WIGNER_GUARD:
        raise DomainError(f"|beta|={abs(beta):.4g} exceeds the Wigner guard {WIGNER_GUARD}")
    return float(_kernels.wigner_values(state.amplitudes, np.array([beta]))[0])


def wigner_grid(state, window, resolution):
    """Wigner function on the cell-center lattice of a window."""
    x_min, x_max, y_min, y_max, res = _check_window(window, resolution)
    if max(abs(x_min), abs(x_max)) ** 2 + max(abs(y_min), abs(y_max)) ** 2 > WIGNER_GUARD**2:
        raise DomainError("window corner exceeds the Wigner guard radius")
    betas, _, _ = _center_lattice(x_min, x_max, y_min, y_max, res)
    vals = _kernels.wigner_values(state.amplitudes, betas)
    return QGrid(x_min, x_max, y_min, y_max, res, "wigner", vals.reshape(res, res))


def grid_quadrature(grid):
    """Midpoint-rule integral of the sampled surface."""
    return float(np.sum(grid.values) * grid.cell_area())


def wigner_min_scan(state, window, resolution, zoom_factor=10):
    """Locate the minimum of W on a window: coarse scan plus one zoom.

    Returns (PhasePoint, value).  The refinement re-grids a window of two
    coarse cells around the best cell at `zoom_factor` finer spacing.
    """
    grid = wigner_grid(state, window, resolution)
    flat = int(np.argmin(grid.values))
    iy, ix = divmod(flat, grid.resolution)
    xs, ys = grid.x_centers(), grid.y_centers()
    cx, cy = float(xs[ix]), float(ys[iy])
    best_val = float(grid.values[iy, ix])
    best_pt = (cx, cy)

    dx = (grid.x_max - grid.x_min) / grid.resolution
    dy = (grid.y_max - grid.y_min) / grid.resolution
    sub = int(4 * zoom_factor) + 1
    fine_x = cx + np.linspace(-2.0 * dx, 2.0 * dx, sub)
    fine_y = cy + np.linspace(-2.0 * dy, 2.0 * dy, sub)
    betas = (fine_x[None, :] + 1j * fine_y[:, None]).ravel()
    vals = _kernels.wigner_values(state.amplitudes, betas)
    j = int(np.argmin(vals))
    if vals[j] < best_val:
        best_val = float(vals[j])
        jy, jx = divmod(j, sub)
        best_pt = (float(fine_x[jx]), float(fine_y[jy]))
    return PhasePoint(best_pt[0], best_pt[1]), best_val
