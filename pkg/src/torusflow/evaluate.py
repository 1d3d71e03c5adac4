"""Exact off-grid evaluation of spectral fields (direct mode summation).

Validation points and tracer particles never sit on grid nodes; evaluating
the trigonometric interpolant directly keeps interpolation error out of the
lemma residuals.
"""

from __future__ import annotations

import numpy as np

from . import _kernels
from .grid import Grid, VorticityField


def row_modes(cut: int) -> np.ndarray:
    """Signed row mode numbers in fft order: [0..cut, -cut..-1]."""
    return np.concatenate([np.arange(cut + 1), np.arange(-cut, 0)])


def spectrum_block(field: VorticityField, band: int | None = None):
    """Truncated spectrum block plus kernel metadata (n1 modes, scale)."""
    grid = field.grid
    cut = grid.dealias_cut if band is None else min(band, grid.resolution // 2 - 1)
    block = _band_block(grid, field.spectral, cut)
    return block, row_modes(cut), 1.0 / grid.resolution**2


def _band_block(grid: Grid, what: np.ndarray, cut: int) -> np.ndarray:
    top = what[: cut + 1, : cut + 1]
    bot = what[-cut:, : cut + 1]
    return np.concatenate([top, bot], axis=0)


def scalar_at(field: VorticityField, points: np.ndarray, band: int | None = None) -> np.ndarray:
    """Field values at an (M, 2) array of points."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    block, n1, scale = spectrum_block(field, band)
    return _kernels.eval_scalar(block, n1, scale, pts[:, 0], pts[:, 1])


def velocity_at(field: VorticityField, points: np.ndarray, band: int | None = None) -> np.ndarray:
    """Biot-Savart velocity at an (M, 2) array of points, shape (M, 2)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    block, n1, scale = spectrum_block(field, band)
    u1, u2 = _kernels.eval_velocity(block, n1, scale, pts[:, 0], pts[:, 1])
    return np.stack([u1, u2], axis=1)


def velocity_from_block(block: np.ndarray, grid_resolution: int, points: np.ndarray) -> np.ndarray:
    """Velocity from a pre-truncated vorticity block (tracer hot path)."""
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    cut = (block.shape[0] - 1) // 2
    n1 = row_modes(cut)
    u1, u2 = _kernels.eval_velocity(block, n1, 1.0 / grid_resolution**2, pts[:, 0], pts[:, 1])
    return np.stack([u1, u2], axis=1)
