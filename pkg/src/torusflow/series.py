"""Separated-variable stream functions: psi with Lap psi = f(r) g(theta).

For a pi/2-periodic mean-zero angular factor g with Fourier coefficients
(a_n, b_n) on the 4n-harmonics, the solution is assembled from blocks
psi_n = f_n(r) g_n(theta) where

    f_n(r) = -(1/r^(4n)) * int_0^r s^(8n-1) int_s^1 tau^(1-4n) f(tau) dtau ds,
    g_n(theta) = a_n cos(4n theta) + b_n sin(4n theta),

so that each block satisfies Lap(f_n g_n) = f g_n exactly.

Large powers are never formed directly: substituting tau = s e^w and
s = r e^(-v) turns both nested integrals into exponentially-weighted
integrals of bounded integrands,

    G(s) := s^(4n-1) int_s^1 tau^(1-4n) f dtau
          = s * int_0^{ln 1/s} e^{-(4n-2) w} f(s e^w) dw,
    f_n(r) = -r^2 * int_0^inf e^{-(4n+2) v} (G/s)(r e^{-v}) dv,

which on a uniform log-radius mesh are discrete convolutions; these are
evaluated with FFT convolution plus Gregory end corrections (4th order).
A slow independent route (`radial_block`, nested adaptive quadrature)
covers pointwise queries and cross-checks the tabulation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import quad
from scipy.signal import fftconvolve

from .errors import QuadratureError
from .grid import Grid
from .recipe import ScalarProfile

__all__ = [
    "radial_block",
    "angular_coeffs",
    "RadialBlocks",
    "build_blocks",
    "SeriesState",
    "partial_stream",
    "ResidualReport",
    "verify_poisson_identity",
    "verify_decay_bounds",
]

# uniform log-radius mesh: tau_k = exp(-k*delta), k = 0..K
MESH_DELTA = 5.0e-4
MESH_FLOOR = 1.0e-8

# Gregory 4th-order end-correction weights relative to the plain sum
_GREGORY = np.array([9 / 24 - 1.0, 28 / 24 - 1.0, 23 / 24 - 1.0])


def radial_block(f, n: int, r: float, epsrel: float = 1e-10) -> float:
    """Pointwise f_n(r) by nested adaptive quadrature (slow, independent).

    `f` is any callable on [0, 1]; n >= 1; r in [0, 1].
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if not 0.0 <= r <= 1.0:
        raise QuadratureError(f"r must lie in [0, 1], got {r}")
    if r == 0.0:
        return 0.0

    def g_tilde(s: float) -> float:
        # (G/s)(s) = int_0^{ln 1/s} exp(-(4n-2)w) f(s e^w) dw
        top = math.log(1.0 / s)
        if top <= 0.0:
            return 0.0
        val, err = quad(
            lambda w: math.exp(-(4 * n - 2) * w) * f(s * math.exp(w)),
            0.0,
            top,
            epsabs=0.0,
            epsrel=epsrel,
            limit=400,
        )
        return val

    v_top = min(200.0 / (4 * n + 2), math.log(r / 1e-300))
    val, err = quad(
        lambda v: math.exp(-(4 * n + 2) * v) * g_tilde(r * math.exp(-v)),
        0.0,
        v_top,
        epsabs=0.0,
        epsrel=epsrel,
        limit=400,
    )
    out = -(r**2) * val
    if not math.isfinite(out):
        raise QuadratureError(f"nested quadrature diverged at n={n}, r={r}")
    return out


def angular_coeffs(g, n: int, samples: int = 8192) -> tuple[float, float]:
    """Fourier pair (a_n, b_n) of a pi/2-periodic g on the 4n harmonics.

    Uniform trapezoid on the period: spectrally accurate for smooth g.
    """
    th = (math.pi / 2) * np.arange(samples) / samples
    gv = np.asarray(g(th), dtype=float)
    w = (math.pi / 2) / samples
    a = (4 / math.pi) * w * float(np.sum(gv * np.cos(4 * n * th)))
    b = (4 / math.pi) * w * float(np.sum(gv * np.sin(4 * n * th)))
    return a, b


def _gregory_convolve(a: np.ndarray, fvals: np.ndarray, delta: float) -> np.ndarray:
    """Cumulative integral C_i = int with samples (a conv f), 4th order.

    C_i approximates sum_{m=0..i} a_m f_{i-m} * delta with Gregory-corrected
    end weights; C_0 = 0 by construction (degenerate integral).
    """
    raw = fftconvolve(a, fvals)[: len(fvals)]
    corr = np.zeros_like(raw)
    for j, c in enumerate(_GREGORY):
        if j < len(a):
            corr[j:] += c * a[j] * fvals[: len(fvals) - j]
            corr[j:] += c * fvals[j] * a[: len(fvals) - j]
    out = (raw + corr) * delta
    # fewer than 5 panels: fall back to trapezoid to avoid negative weights
    for i in range(min(4, len(out))):
        m = np.arange(i + 1)
        w = np.ones(i + 1)
        w[0] = w[-1] = 0.5
        out[i] = delta * np.sum(w * a[m] * fvals[i - m]) if i > 0 else 0.0
    return out


@dataclass
class RadialBlocks:
    """Tabulated f_n, f_n', f_n'' for n = 1..n_terms on the log-radius mesh."""

    n_terms: int
    mesh: np.ndarray  # radii, descending from 1 to MESH_FLOOR
    f_on_mesh: np.ndarray
    fn: np.ndarray  # (n_terms, K+1)
    fn_prime: np.ndarray
    fn_second: np.ndarray
    delta: float

    def _interp(self, table: np.ndarray, r: np.ndarray) -> np.ndarray:
        """Cubic interpolation in log r on the uniform mesh (vectorized)."""
        lr = -np.log(np.maximum(r, self.mesh[-1]))
        pos = lr / self.delta
        k = len(self.mesh) - 1
        i = np.clip(pos.astype(int), 1, k - 2)
        t = pos - i
        ym1, y0, y1, y2 = table[i - 1], table[i], table[i + 1], table[i + 2]
        # Catmull-Rom cubic through the four neighbours
        return 0.5 * (
            2 * y0
            + (y1 - ym1) * t
            + (2 * ym1 - 5 * y0 + 4 * y1 - y2) * t**2
            + (-ym1 + 3 * y0 - 3 * y1 + y2) * t**3
        )

    def eval(self, n: int, r, deriv: int = 0):
        """f_n (deriv=0), f_n' (1) or f_n'' (2) at radii r (vectorized).

        Radii above 1 use the analytic harmonic tail f_n(1) r^(-4n); radii
        at 0 return the limit 0 (and 0 for the derivatives' products used
        downstream, which all carry positive powers of r).
        """
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        table = (self.fn, self.fn_prime, self.fn_second)[deriv]
        inside = (r > self.mesh[-1]) & (r <= 1.0)
        if np.any(inside):
            out[inside] = self._interp(table[n - 1], r[inside])
        beyond = r > 1.0
        if np.any(beyond):
            f1 = self.fn[n - 1][0]
            rb = r[beyond]
            if deriv == 0:
                out[beyond] = f1 * rb ** (-4 * n)
            elif deriv == 1:
                out[beyond] = -4 * n * f1 * rb ** (-4 * n - 1)
            else:
                out[beyond] = 4 * n * (4 * n + 1) * f1 * rb ** (-4 * n - 2)
        return out


def build_blocks(f, n_terms: int, delta: float = MESH_DELTA, floor: float = MESH_FLOOR) -> RadialBlocks:
    """Tabulate all radial blocks by log-mesh convolution."""
    k = int(math.ceil(math.log(1.0 / floor) / delta))
    mesh = np.exp(-delta * np.arange(k + 1))
    fv = np.asarray(f(mesh), dtype=float)
    m = np.arange(k + 1)
    fn = np.empty((n_terms, k + 1))
    fp = np.empty_like(fn)
    fs = np.empty_like(fn)
    for n in range(1, n_terms + 1):
        a_in = np.exp(-(4 * n - 2) * delta * m)
        g_tilde = _gregory_convolve(a_in, fv, delta)  # (G/s) at mesh points
        a_out = np.exp(-(4 * n + 2) * delta * m)
        # integral runs toward smaller radii: convolve along reversed mesh
        h = _gregory_convolve(a_out, g_tilde[::-1], delta)[::-1]
        fn[n - 1] = -(mesh**2) * h
        g_full = mesh * g_tilde  # G(s) = s * (G/s)
        fp[n - 1] = -4 * n * fn[n - 1] / mesh - g_full
        fs[n - 1] = fv - fp[n - 1] / mesh + 16 * n**2 * fn[n - 1] / mesh**2
    return RadialBlocks(
        n_terms=n_terms, mesh=mesh, f_on_mesh=fv, fn=fn, fn_prime=fp, fn_second=fs, delta=delta
    )
