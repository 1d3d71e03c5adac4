"""Spectral field operations: Poisson inversion, Biot-Savart, advection stepping.

Conventions fixed once for the whole package:

* velocity law  u = grad_perp (-Lap)^{-1} omega  with grad_perp = (-d2, d1),
  i.e.  u1_hat = -i k2 chi_hat,  u2_hat = +i k1 chi_hat,  chi_hat = w_hat/|k|^2;
* time stepping is classical explicit RK4 on the dealiased (two-thirds rule)
  pseudo-spectral advection  d(omega)/dt = -u . grad(omega);
* dt adapts to dt = cfl * h / max|u| and the loop is deterministic for a
  given configuration.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import CFLViolationError, NonFiniteFieldError, NonZeroMeanError
from .grid import Grid, VelocityField, VorticityField

MEAN_TOL = 1e-12


def _check_mean_zero(w: VorticityField):
    w.require_finite()
    scale = max(w.linf(), 1.0)
    m = w.mean()
    if abs(m) > MEAN_TOL * scale:
        raise NonZeroMeanError(m)


def _inverse_laplacian(grid: Grid, what: np.ndarray) -> np.ndarray:
    """Spectral (-Lap)^{-1}: divide by |k|^2, zero mode pinned to 0."""
    ksq = grid.ksq.copy()
    ksq[0, 0] = 1.0
    chi = what / ksq
    chi[0, 0] = 0.0
    return chi


def poisson_solve(w: VorticityField) -> VorticityField:
    """Return psi with  Lap psi = omega  spectrally; psi has zero mean."""
    _check_mean_zero(w)
    psi_hat = -_inverse_laplacian(w.grid, w.spectral)
    return VorticityField.from_spectral(w.grid, psi_hat)


def velocity_spectra(grid: Grid, what: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Biot-Savart multipliers applied to a vorticity spectrum."""
    chi = _inverse_laplacian(grid, what)
    u1h = -1j * grid.k2[None, :] * chi
    u2h = 1j * grid.k1[:, None] * chi
    return u1h, u2h


def biot_savart(w: VorticityField) -> VelocityField:
    """Velocity u = grad_perp (-Lap)^{-1} omega with divergence certificate."""
    _check_mean_zero(w)
    u1h, u2h = velocity_spectra(w.grid, w.spectral)
    n = w.grid.resolution
    u1 = np.fft.irfft2(u1h, s=(n, n))
    u2 = np.fft.irfft2(u2h, s=(n, n))
    return VelocityField(w.grid, u1, u2, u1h, u2h)


def _advection_rhs(grid: Grid, what: np.ndarray) -> tuple[np.ndarray, float]:
    """Spectral RHS of d(omega)/dt = -u.grad(omega), dealiased; also max|u|."""
    n = grid.resolution
    mask = grid.dealias_mask
    wh = what * mask
    u1h, u2h = velocity_spectra(grid, wh)
    u1 = np.fft.irfft2(u1h, s=(n, n))
    u2 = np.fft.irfft2(u2h, s=(n, n))
    w1 = np.fft.irfft2(1j * grid.k1[:, None] * wh, s=(n, n))
    w2 = np.fft.irfft2(1j * grid.k2[None, :] * wh, s=(n, n))
    adv = np.fft.rfft2(u1 * w1 + u2 * w2)
    np.multiply(adv, mask, out=adv)
    rhs = -adv
    rhs[0, 0] = 0.0
    umax = float(np.max(np.hypot(u1, u2)))
    return rhs, umax


def _rk4_spectral(grid: Grid, what: np.ndarray, dt: float) -> tuple[np.ndarray, float]:
    k1_, umax = _advection_rhs(grid, what)
    k2_, _ = _advection_rhs(grid, what + 0.5 * dt * k1_)
    k3_, _ = _advection_rhs(grid, what + 0.5 * dt * k2_)
    k4_, _ = _advection_rhs(grid, what + dt * k3_)
    out = what + (dt / 6.0) * (k1_ + 2.0 * k2_ + 2.0 * k3_ + k4_)
    return out, umax


def max_speed(w: VorticityField) -> float:
    u1h, u2h = velocity_spectra(w.grid, w.spectral * w.grid.dealias_mask)
    n = w.grid.resolution
    u1 = np.fft.irfft2(u1h, s=(n, n))
    u2 = np.fft.irfft2(u2h, s=(n, n))
    return float(np.max(np.hypot(u1, u2)))


def step(w: VorticityField, dt: float, cfl: float = 0.5) -> VorticityField:
    """One RK4 step of the dealiased pseudo-spectral advection."""
    _check_mean_zero(w)
    if dt <= 0:
        raise ValueError(f"dt must be positive, got {dt}")
    umax = max_speed(w)
    if umax > 0:
        dt_max = cfl * w.grid.spacing / umax
        if dt > dt_max * (1 + 1e-12):
            raise CFLViolationError(dt, dt_max)
    out_hat, _ = _rk4_spectral(w.grid, w.spectral.copy(), dt)
    if not np.all(np.isfinite(out_hat)):
        raise NonFiniteFieldError("time step produced NaN/Inf")
    return VorticityField.from_spectral(w.grid, out_hat)


def odd_odd_project(w: VorticityField) -> VorticityField:
    """Projection onto the component odd in x1 and odd in x2."""
    v = w.values
    r1 = np.roll(v[::-1, :], 1, axis=0)
    r2 = np.roll(v[:, ::-1], 1, axis=1)
    r12 = np.roll(np.roll(v[::-1, ::-1], 1, axis=0), 1, axis=1)
    return VorticityField(w.grid, 0.25 * (v - r1 - r2 + r12))


def odd_odd_defect(w: VorticityField) -> float:
    """Sup deviation from odd-odd symmetry (absolute)."""
    v = w.values
    r1 = np.roll(v[::-1, :], 1, axis=0)
    r2 = np.roll(v[:, ::-1], 1, axis=1)
    return float(max(np.max(np.abs(v + r1)), np.max(np.abs(v + r2))))


@dataclass(frozen=True)
class StepRecord:
    t: float
    dt: float
    cfl: float
    l2_drift_rel: float
    linf_ratio: float


@dataclass
class TimeSeries:
    """Run output: strided spectral snapshots plus a per-step log.

    Interior snapshots are stored as dealias-truncated rfft2 blocks (modes
    |n1| <= cut, 0 <= n2 <= cut) to bound memory; the first and last states
    are kept exactly.  `states` re-inflates everything to VorticityField.
    """

    grid: Grid
    times: list[float] = field(default_factory=list)
    coeff_blocks: list[np.ndarray] = field(default_factory=list)
    step_log: list[StepRecord] = field(default_factory=list)
    tail_fractions: list[float] = field(default_factory=list)
    first: VorticityField | None = None
    last: VorticityField | None = None

    @property
    def cut(self) -> int:
        return self.grid.dealias_cut

    def append_state(self, t: float, what: np.ndarray):
        self.times.append(float(t))
        self.coeff_blocks.append(truncate_spectrum(self.grid, what))
        self.tail_fractions.append(spectrum_tail_fraction(self.grid, what))

    def state(self, idx: int) -> VorticityField:
        idx = range(len(self.times))[idx]
        if idx == 0 and self.first is not None:
            return self.first
        if idx == len(self.times) - 1 and self.last is not None:
            return self.last
        what = expand_spectrum(self.grid, self.coeff_blocks[idx])
        return VorticityField.from_spectral(self.grid, what)

    @property
    def states(self) -> list[VorticityField]:
        return [self.state(i) for i in range(len(self.times))]

    def times_array(self) -> np.ndarray:
        return np.asarray(self.times)


def truncate_spectrum(grid: Grid, what: np.ndarray) -> np.ndarray:
    """Keep the dealias band: rows n1 in [-cut, cut] (fft order), cols 0..cut."""
    cut = grid.dealias_cut
    top = what[: cut + 1, : cut + 1]
    bot = what[-cut:, : cut + 1]
    return np.concatenate([top, bot], axis=0).copy()

def expand_spectrum(grid: Grid, block: np.ndarray) -> np.ndarray:
    n = grid.resolution
    cut = grid.dealias_cut
    what = np.zeros((n, n // 2 + 1), dtype=complex)
    what[: cut + 1, : cut + 1] = block[: cut + 1]
    what[-cut:, : cut + 1] = block[cut + 1 :]
    return what


def spectrum_tail_fraction(grid: Grid, what: np.ndarray) -> float:
    """Fraction of enstrophy carried by the top third of retained modes."""
    cut = grid.dealias_cut
    n1 = np.abs(np.fft.fftfreq(grid.resolution, d=1.0 / grid.resolution))
    n2 = np.arange(grid.resolution // 2 + 1)
    w2 = np.abs(what) ** 2
    w2[:, 1:-1] *= 2.0  # rfft half-spectrum weight
    band = np.maximum(n1[:, None], n2[None, :])
    total = float(np.sum(w2[band <= cut]))
    tail = float(np.sum(w2[(band > (2 * cut) // 3) & (band <= cut)]))
    return tail / total if total > 0 else 0.0


def run(
    w0: VorticityField,
    horizon: float,
    snapshot_stride: int = 1,
    cfl: float = 0.5,
    enforce_odd_symmetry: bool = False,
    dt_floor: float = 1e-8,
) -> TimeSeries:
    """Advance w0 to `horizon` with CFL-adaptive RK4; record snapshots.

    Snapshots are taken every `snapshot_stride` accepted steps; the initial
    and final states are always recorded.  Deterministic for fixed inputs.
    """
    if horizon < 0:
        raise ValueError("horizon must be nonnegative")
    _check_mean_zero(w0)
    series = TimeSeries(grid=w0.grid, first=w0)
    what = w0.spectral * w0.grid.dealias_mask
    what = what.astype(complex)
    series.append_state(0.0, what)
    if horizon == 0:
        series.last = w0
        return series

    h = w0.grid.spacing
    l2_0 = float(np.sqrt(np.sum(np.abs(what[:, 0]) ** 2) + 2 * np.sum(np.abs(what[:, 1:-1]) ** 2) + np.sum(np.abs(what[:, -1]) ** 2)))
    linf_0 = max(w0.linf(), 1e-300)
    t = 0.0
    steps = 0
    while t < horizon - 1e-15:
        umax = max(max_speed(VorticityField.from_spectral(w0.grid, what)), 1e-12)
        dt = min(cfl * h / umax, horizon - t)
        dt = max(dt, dt_floor)
        new_hat, _ = _rk4_spectral(w0.grid, what, dt)
        if not np.all(np.isfinite(new_hat)):
            raise NonFiniteFieldError(f"blow-up at t={t:.4e}")
        if enforce_odd_symmetry:
            w_tmp = odd_odd_project(VorticityField.from_spectral(w0.grid, new_hat))
            new_hat = w_tmp.spectral * w0.grid.dealias_mask
        new_hat[0, 0] = 0.0
        t += dt
        steps += 1
        what = new_hat
        l2_t = float(np.sqrt(np.sum(np.abs(what[:, 0]) ** 2) + 2 * np.sum(np.abs(what[:, 1:-1]) ** 2) + np.sum(np.abs(what[:, -1]) ** 2)))
        w_now = VorticityField.from_spectral(w0.grid, what)
        series.step_log.append(
            StepRecord(
                t=t,
                dt=dt,
                cfl=umax * dt / h,
                l2_drift_rel=abs(l2_t - l2_0) / max(l2_0, 1e-300),
                linf_ratio=w_now.linf() / linf_0,
            )
        )
        if steps % snapshot_stride == 0 or t >= horizon - 1e-15:
            series.append_state(t, what)
    series.last = VorticityField.from_spectral(w0.grid, what)
    return series


def log_lipschitz_modulus(
    u_eval, pairs: np.ndarray
) -> np.ndarray:
    """|u(x)-u(y)| / (|x-y| log(1 + 1/|x-y|)) for an array of point pairs.

    `u_eval` maps an (M, 2) array of points to an (M, 2) array of velocities;
    `pairs` has shape (M, 2, 2).
    """
    xa = pairs[:, 0, :]
    xb = pairs[:, 1, :]
    ua = u_eval(xa)
    ub = u_eval(xb)
    du = np.linalg.norm(ua - ub, axis=1)
    dx = np.linalg.norm(xa - xb, axis=1)
    return du / (dx * np.log1p(1.0 / dx))
