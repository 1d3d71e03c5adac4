"""Initial vorticity construction and strip geometry.

The initial state is  omega0 = m + h  where, in polar coordinates on the
first quadrant,

    m(r, theta) = f(r) g(theta),
    f(r)     = sum_{n=n0}^{n_max} n^(-beta) * phi(base^n * (r - base^(-n))),
    g(theta) = phi_ang(theta) - phi_ang(pi/2 - theta)   (pi/2-periodic),

and h is a one-signed plateau bump filling the bulk of the quadrant.  Both
pieces are extended to the full torus oddly in x1 and in x2; for m the polar
formula already carries that symmetry because g is pi/2-periodic.

Each radial bump supports an annular strip D^(n) that splits into a positive
angular lobe D+^(n) near theta = pi/3 and its diagonal mirror D-^(n) near
theta = pi/6.

Scale bases: 4 reproduces the printed geometry (kept for geometry-only
checks; its strips are sub-cell at any feasible grid), 2 is the desk mode
that evolved runs use.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import RecipeError, UnderResolvedError
from .grid import Grid, VorticityField

__all__ = [
    "DataRecipe",
    "ScalarProfile",
    "AnnularSector",
    "StripAtlas",
    "plateau_bump",
    "radial_profile",
    "angular_profile",
    "stirrer",
    "synthesize",
    "strip_regions",
    "log_envelope",
    "cells_across_strip",
    "required_resolution",
    "max_resolvable_strip",
]


def _smoothstep(t):
    """C-infinity transition: 0 for t<=0, 1 for t>=1 (exp(-1/t) mollifier)."""
    t = np.asarray(t, dtype=float)
    lo = t <= 0.0
    hi = t >= 1.0
    mid = ~(lo | hi)
    out = np.where(hi, 1.0, 0.0)
    if np.any(mid):
        tm = t[mid]
        a = np.exp(-1.0 / tm)
        b = np.exp(-1.0 / (1.0 - tm))
        out = out.astype(float)
        out[mid] = a / (a + b)
    return out


def plateau_bump(r, plateau: float, support: float):
    """Smooth bump: 1 on (-plateau, plateau), 0 outside (-support, support).

    The transition is the symmetric exp(-1/t) mollifier, so the value at the
    midpoint of each transition band is exactly 1/2.
    """
    if not 0.0 < plateau < support:
        raise RecipeError(f"need 0 < plateau < support, got {plateau}, {support}")
    a = np.abs(np.asarray(r, dtype=float))
    out = _smoothstep((support - a) / (support - plateau))
    if np.isscalar(r) or np.ndim(r) == 0:
        return float(out)
    return out


@dataclass(frozen=True)
class DataRecipe:
    """All parameters of omega0 = m + h."""

    beta: float = 0.55
    n0: int = 4
    n_max: int = 6
    theta0: float = math.pi / 24
    base: int = 2
    bump_plateau: float = 1 / 8
    bump_support: float = 1 / 4
    h_amplitude: float = 1.0

    def __post_init__(self):
        if not 0.5 < self.beta <= 1.0:
            raise RecipeError(f"beta must be in (1/2, 1], got {self.beta}")
        if self.base not in (2, 4):
            raise RecipeError(f"base must be 2 or 4, got {self.base}")
        if self.n0 < 4:
            raise RecipeError(f"n0 must be >= 4, got {self.n0}")
        if self.n_max < self.n0:
            raise RecipeError(f"n_max {self.n_max} < n0 {self.n0}")
        if not 0.0 < self.theta0 < math.pi / 12:
            raise RecipeError(f"theta0 must be in (0, pi/12), got {self.theta0}")
        if not 0.0 < self.bump_plateau < self.bump_support:
            raise RecipeError("need 0 < bump_plateau < bump_support")
        # consecutive strip supports must stay disjoint
        s = self.bump_support
        if (1.0 + s) >= self.base * (1.0 - s):
            raise RecipeError(f"support {s} too wide: strips at base {self.base} overlap")
        if self.base ** (-(self.n0 - 2)) >= 5 / 6:
            raise RecipeError("stirrer support does not fit: base^-(n0-2) >= 5/6")
        if self.base ** (-(self.n0 - 3)) >= 2 / 3:
            raise RecipeError("stirrer plateau empty: base^-(n0-3) >= 2/3")
        if self.h_amplitude < 0:
            raise RecipeError("h_amplitude must be nonnegative")

    # paper geometry: tetradic scaling and the printed bump widths
    @classmethod
    def paper(cls, **kw) -> "DataRecipe":
        kw.setdefault("base", 4)
        kw.setdefault("bump_plateau", 1 / 32)
        kw.setdefault("bump_support", 1 / 16)
        kw.setdefault("beta", 1.0)
        return cls(**kw)

    def strip_radius(self, n: int) -> float:
        return float(self.base) ** (-n)

    def strip_interval(self, n: int) -> tuple[float, float]:
        r = self.strip_radius(n)
        return r * (1.0 - self.bump_support), r * (1.0 + self.bump_support)

    def amplitude(self, n: int) -> float:
        return float(n) ** (-self.beta)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "DataRecipe":
        return cls(**d)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "DataRecipe":
        return cls.from_dict(json.loads(text))

    def with_(self, **kw) -> "DataRecipe":
        return replace(self, **kw)


@dataclass(frozen=True)
class ScalarProfile:
    """A scalar function r -> value with declared support and smoothness."""

    fn: Callable = field(repr=False)
    support: tuple[float, float] = (0.0, 1.0)
    smoothness: str = "C-infinity"
    label: str = ""

    def __call__(self, r):
        return self.fn(r)


def radial_profile(r, recipe: DataRecipe):
    """f(r) = sum over strips of n^(-beta) phi(base^n (r - base^(-n)))."""
    r = np.asarray(r, dtype=float)
    out = np.zeros_like(r, dtype=float)
    for n in range(recipe.n0, recipe.n_max + 1):
        bn = float(recipe.base) ** n
        arg = bn * (r - 1.0 / bn)
        near = np.abs(arg) < recipe.bump_support
        if np.any(near):
            out[near] += recipe.amplitude(n) * plateau_bump(
                arg[near], recipe.bump_plateau, recipe.bump_support
            )
    if np.ndim(out) == 0:
        return float(out)
    return out


def _angular_bump(theta, recipe: DataRecipe):
    """1 on the middle third of (pi/3, pi/3 + theta0), 0 outside it."""
    center = math.pi / 3 + recipe.theta0 / 2
    return plateau_bump(np.asarray(theta) - center, recipe.theta0 / 6, recipe.theta0 / 2)


def angular_profile(theta, recipe: DataRecipe):
    """pi/2-periodic dipole g(theta) = phi(theta) - phi(pi/2 - theta).

    Antisymmetric under theta -> pi/2 - theta, hence mean-zero over any
    period and vanishing on the diagonal theta = pi/4.
    """
    th = np.mod(np.asarray(theta, dtype=float), math.pi / 2)
    out = _angular_bump(th, recipe) - _angular_bump(math.pi / 2 - th, recipe)
    if np.isscalar(theta) or np.ndim(theta) == 0:
        return float(out)
    return out


def _edge_profile(t, lo: float, hi: float, rising: bool):
    """Smoothstep across the middle half of [lo, hi] (width = half the gap)."""
    gap = hi - lo
    a = lo + gap / 4.0
    b = hi - gap / 4.0
    s = _smoothstep((np.asarray(t, dtype=float) - a) / (b - a))
    return s if rising else 1.0 - s


def stirrer(x, recipe: DataRecipe):
    """Smooth one-signed bulk bump on the first quadrant.

    Equals h_amplitude on [base^-(n0-3), 2/3]^2 and vanishes outside
    (base^-(n0-2), 5/6)^2.
    """
    x = np.asarray(x, dtype=float)
    scalar = x.ndim == 1
    pts = np.atleast_2d(x)
    a_out = float(recipe.base) ** (-(recipe.n0 - 2))
    a_in = float(recipe.base) ** (-(recipe.n0 - 3))
    h1 = _edge_profile(pts[:, 0], a_out, a_in, rising=True) * _edge_profile(
        pts[:, 0], 2 / 3, 5 / 6, rising=False
    )
    h2 = _edge_profile(pts[:, 1], a_out, a_in, rising=True) * _edge_profile(
        pts[:, 1], 2 / 3, 5 / 6, rising=False
    )
    out = recipe.h_amplitude * h1 * h2
    return float(out[0]) if scalar else out


def stirrer_grid(x1: np.ndarray, x2: np.ndarray, recipe: DataRecipe) -> np.ndarray:
    """Odd-odd extension of the stirrer sampled on coordinate arrays."""
    a_out = float(recipe.base) ** (-(recipe.n0 - 2))
    a_in = float(recipe.base) ** (-(recipe.n0 - 3))

    def edge1d(t):
        a = np.abs(t)
        return _edge_profile(a, a_out, a_in, rising=True) * _edge_profile(
            a, 2 / 3, 5 / 6, rising=False
        )

    return recipe.h_amplitude * np.sign(x1) * np.sign(x2) * edge1d(x1) * edge1d(x2)


@dataclass(frozen=True)
class AnnularSector:
    """Radial interval x angular interval, in polar coordinates."""

    r_lo: float
    r_hi: float
    th_lo: float
    th_hi: float

    def contains(self, r, th) -> np.ndarray:
        return (
            (self.r_lo <= r) & (r <= self.r_hi) & (self.th_lo <= th) & (th <= self.th_hi)
        )

    def swapped(self) -> "AnnularSector":
        """Image under the diagonal swap (x1, x2) -> (x2, x1)."""
        return AnnularSector(self.r_lo, self.r_hi, math.pi / 2 - self.th_hi, math.pi / 2 - self.th_lo)

    def corners(self) -> np.ndarray:
        rr = [self.r_lo, self.r_hi]
        tt = [self.th_lo, self.th_hi]
        return np.array([[r * math.cos(t), r * math.sin(t)] for r in rr for t in tt])


@dataclass(frozen=True)
class StripPair:
    plus: AnnularSector
    minus: AnnularSector

    @property
    def radial(self) -> tuple[float, float]:
        return self.plus.r_lo, self.plus.r_hi


@dataclass(frozen=True)
class StripAtlas:
    """Geometry of the dichotomous annular strips D^(n) = D+^(n) u D-^(n)."""

    recipe: DataRecipe
    strips: dict[int, StripPair]

    @property
    def indices(self) -> list[int]:
        return sorted(self.strips)

    def pairwise_disjoint(self) -> bool:
        iv = sorted((self.strips[n].radial for n in self.strips), key=lambda ab: ab[0])
        return all(iv[i][1] < iv[i + 1][0] for i in range(len(iv) - 1))

    def max_radius(self) -> float:
        return max(self.strips[n].radial[1] for n in self.strips)

    def diagonal_clearance(self) -> float:
        """Angular distance from every sector to the diagonal theta = pi/4."""
        c = math.inf
        for pair in self.strips.values():
            for sec in (pair.plus, pair.minus):
                c = min(c, abs(sec.th_lo - math.pi / 4), abs(sec.th_hi - math.pi / 4))
        return c


def strip_regions(recipe: DataRecipe) -> StripAtlas:
    """Explicit sector geometry per strip index n."""
    strips = {}
    for n in range(recipe.n0, recipe.n_max + 1):
        r_lo, r_hi = recipe.strip_interval(n)
        plus = AnnularSector(r_lo, r_hi, math.pi / 3, math.pi / 3 + recipe.theta0)
        minus = AnnularSector(r_lo, r_hi, math.pi / 6 - recipe.theta0, math.pi / 6)
        strips[n] = StripPair(plus=plus, minus=minus)
    return StripAtlas(recipe=recipe, strips=strips)


def cells_across_strip(grid: Grid, recipe: DataRecipe, n: int) -> float:
    lo, hi = recipe.strip_interval(n)
    return (hi - lo) / grid.spacing


def required_resolution(recipe: DataRecipe, n: int | None = None, cells: int = 8) -> int:
    """Smallest power-of-two resolution with >= `cells` across strip n."""
    n = recipe.n_max if n is None else n
    lo, hi = recipe.strip_interval(n)
    need = 2.0 * cells / (hi - lo)
    return 1 << max(4, math.ceil(math.log2(need)))


def max_resolvable_strip(grid: Grid, recipe: DataRecipe, cells: int = 8) -> int:
    """Largest strip index with >= `cells` cells across its support."""
    n = recipe.n0
    while n + 1 <= 64 and cells_across_strip(grid, recipe, n + 1) >= cells:
        n += 1
    if cells_across_strip(grid, recipe, n) < cells:
        raise UnderResolvedError(
            f"even strip {recipe.n0} is under-resolved at N={grid.resolution}; "
            f"need N >= {required_resolution(recipe, recipe.n0, cells)}"
        )
    return n


def synthesize(recipe: DataRecipe, grid: Grid, parts: str = "both") -> VorticityField:
    """Sample omega0 = m + h on the grid, extended oddly in both axes.

    `parts` selects "both", "m" (symmetric part only), or "h" (stirrer only).
    The grid must carry at least 8 cells across the thinnest strip whenever
    the m part is included.
    """
    if parts not in ("both", "m", "h"):
        raise ValueError(f"parts must be both|m|h, got {parts!r}")
    values = np.zeros((grid.resolution, grid.resolution))
    x1, x2 = grid.coords()
    if parts in ("both", "m"):
        nc = cells_across_strip(grid, recipe, recipe.n_max)
        if nc < 8:
            raise UnderResolvedError(
                f"strip {recipe.n_max} spans {nc:.1f} cells at N={grid.resolution}; "
                f"need N >= {required_resolution(recipe)}"
            )
        r = np.hypot(x1, x2)
        th = np.arctan2(x2, x1)
        values += radial_profile(r, recipe) * angular_profile(th, recipe)
    if parts in ("both", "h") and recipe.h_amplitude > 0:
        values += stirrer_grid(x1, x2, recipe)
    values -= values.mean()
    return VorticityField(grid, values)


def log_envelope(recipe: DataRecipe, margin: float = 1.0) -> ScalarProfile:
    """Radial envelope fbar(r) = C (log 1/r)^(-beta) dominating |f|.

    C is fitted as the max of |f| (log 1/r)^beta over a fine radial sample
    of the strip region, times `margin`.  The declared support is capped at
    exp(-(beta+1)), inside which the envelope is concave; fbar -> 0 at r=0.
    """
    beta = recipe.beta
    r_hi = min(0.2, math.exp(-(beta + 1.0)))
    rs = np.concatenate(
        [np.geomspace(1e-12, r_hi, 4001)]
        + [np.linspace(*recipe.strip_interval(n), 801) for n in range(recipe.n0, recipe.n_max + 1)]
    )
    rs = rs[(rs > 0) & (rs <= r_hi)]
    f_abs = np.abs(radial_profile(rs, recipe))
    with np.errstate(divide="ignore"):
        c_fit = float(np.max(f_abs * np.log(1.0 / rs) ** beta)) * margin
    if c_fit == 0.0:
        c_fit = margin

    def fbar(r):
        r = np.asarray(r, dtype=float)
        out = np.zeros_like(r)
        ok = (r > 0) & (r <= r_hi)
        out[ok] = c_fit * np.log(1.0 / r[ok]) ** (-beta)
        if np.ndim(out) == 0:
            return float(out)
        return out

    return ScalarProfile(fn=fbar, support=(0.0, r_hi), smoothness="C-infinity on (0, r_hi)", label=f"C(log 1/r)^-beta, C={c_fit:.6g}")
