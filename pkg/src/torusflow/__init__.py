"""torusflow: pseudo-spectral 2D Euler laboratory on the torus [-1,1)^2."""

from ._kernels import BACKEND as kernel_backend
from .grid import Grid, VelocityField, VorticityField
from .spectral import TimeSeries, biot_savart, poisson_solve, run, step

__version__ = "0.1.0"

__all__ = [
    "Grid",
    "VorticityField",
    "VelocityField",
    "TimeSeries",
    "poisson_solve",
    "biot_savart",
    "step",
    "run",
    "kernel_backend",
    "__version__",
]
