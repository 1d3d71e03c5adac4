"""Periodic grid and field containers.

The domain is the square torus [-1, 1)^2, so the Fourier basis is
exp(i*pi*n.x) with integer mode vectors n; wavenumbers are k = pi*n.
Fields are stored as real samples at the nodes x_j = -1 + j*h, h = 2/N,
with axis 0 <-> x1 and axis 1 <-> x2.  Spectral coefficients use numpy's
rfft2 layout (half spectrum along axis 1).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import NonFiniteFieldError


def _is_power_of_two(n: int) -> bool:
    return n >= 1 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid:
    """Uniform N x N grid on [-1, 1)^2, N a power of two >= 16."""

    resolution: int

    def __post_init__(self):
        n = self.resolution
        if not isinstance(n, (int, np.integer)) or n < 16 or not _is_power_of_two(int(n)):
            raise ValueError(f"resolution must be a power of two >= 16, got {n!r}")

    @property
    def spacing(self) -> float:
        return 2.0 / self.resolution

    @cached_property
    def nodes(self) -> np.ndarray:
        x = -1.0 + self.spacing * np.arange(self.resolution)
        x.flags.writeable = False
        return x

    def coords(self) -> tuple[np.ndarray, np.ndarray]:
        """Meshgrid of node coordinates, indexing='ij' (axis 0 is x1)."""
        x1, x2 = np.meshgrid(self.nodes, self.nodes, indexing="ij")
        return x1, x2

    @cached_property
    def k1(self) -> np.ndarray:
        """Wavenumbers along axis 0 in rfft2 layout (full range)."""
        n = self.resolution
        k = np.pi * np.fft.fftfreq(n, d=1.0 / n)
        k.flags.writeable = False
        return k

    @cached_property
    def k2(self) -> np.ndarray:
        """Wavenumbers along axis 1 in rfft2 layout (half range)."""
        n = self.resolution
        k = np.pi * np.arange(n // 2 + 1).astype(float)
        k.flags.writeable = False
        return k

    @cached_property
    def ksq(self) -> np.ndarray:
        ksq = self.k1[:, None] ** 2 + self.k2[None, :] ** 2
        ksq.flags.writeable = False
        return ksq

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """Two-thirds rule: keep modes with |n_i| <= N/3 on both axes."""
        n = self.resolution
        cut = n // 3
        m1 = np.abs(np.fft.fftfreq(n, d=1.0 / n)) <= cut
        m2 = np.arange(n // 2 + 1) <= cut
        mask = m1[:, None] & m2[None, :]
        mask.flags.writeable = False
        return mask

    @property
    def dealias_cut(self) -> int:
        return self.resolution // 3

    def radius(self) -> np.ndarray:
        x1, x2 = self.coords()
        return np.hypot(x1, x2)


def _freeze(a: np.ndarray) -> np.ndarray:
    a = np.ascontiguousarray(a)
    a.flags.writeable = False
    return a


@dataclass(frozen=True)
class VorticityField:
    """Scalar vorticity snapshot; values and spectrum kept consistent."""

    grid: Grid
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        n = self.grid.resolution
        if self.values.shape != (n, n):
            raise ValueError(f"values shape {self.values.shape} != grid ({n},{n})")
        object.__setattr__(self, "values", _freeze(np.asarray(self.values, dtype=float)))

    @classmethod
    def from_values(cls, grid: Grid, values: np.ndarray) -> "VorticityField":
        return cls(grid, values)

    @classmethod
    def from_spectral(cls, grid: Grid, spectral: np.ndarray) -> "VorticityField":
        f = cls(grid, np.fft.irfft2(spectral, s=(grid.resolution, grid.resolution)))
        f.__dict__["spectral"] = _freeze(spectral.astype(complex))
        return f

    @classmethod
    def from_function(cls, grid: Grid, fn) -> "VorticityField":
        x1, x2 = grid.coords()
        return cls(grid, fn(x1, x2))

    @cached_property
    def spectral(self) -> np.ndarray:
        return _freeze(np.fft.rfft2(self.values))

    def require_finite(self):
        if not np.all(np.isfinite(self.values)):
            raise NonFiniteFieldError("vorticity contains NaN or Inf")

    def mean(self) -> float:
        return float(np.mean(self.values))

    def linf(self) -> float:
        return float(np.max(np.abs(self.values)))

    def l2(self) -> float:
        # L2 norm on [-1,1)^2 with cell measure h^2
        return float(np.sqrt(np.sum(self.values**2) * self.grid.spacing**2))


@dataclass(frozen=True)
class VelocityField:
    """Two-component velocity snapshot with its spectral certificate."""

    grid: Grid
    u1: np.ndarray = field(repr=False)
    u2: np.ndarray = field(repr=False)
    spectral1: np.ndarray = field(repr=False)
    spectral2: np.ndarray = field(repr=False)

    def __post_init__(self):
        for name in ("u1", "u2"):
            object.__setattr__(self, name, _freeze(np.asarray(getattr(self, name), dtype=float)))
        for name in ("spectral1", "spectral2"):
            object.__setattr__(self, name, _freeze(np.asarray(getattr(self, name), dtype=complex)))

    def max_speed(self) -> float:
        return float(np.max(np.hypot(self.u1, self.u2)))

    def divergence_certificate(self) -> float:
        """max_k |k . u_hat(k)| normalized by max_k |u_hat(k)|."""
        g = self.grid
        div = g.k1[:, None] * self.spectral1 + g.k2[None, :] * self.spectral2
        scale = max(np.max(np.abs(self.spectral1)), np.max(np.abs(self.spectral2)), 1e-300)
        return float(np.max(np.abs(div)) / scale)

    def values(self) -> np.ndarray:
        """Stacked (2, N, N) view of the samples."""
        return np.stack([self.u1, self.u2])
