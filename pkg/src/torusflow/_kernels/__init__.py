"""Off-grid spectral evaluation kernels.

Evaluating the trigonometric interpolant at arbitrary (non-grid) points is
the hot loop of particle tracing and lemma validation.  Two implementations
exist:

* ``_evalc`` — compiled Cython core, streaming per-point accumulation;
* ``_evalnp`` — numpy fallback, phase-matrix factorization through BLAS.

The compiled core is selected at import when present; set the environment
variable ``TORUSFLOW_FORCE_FALLBACK=1`` to force the numpy path.  Both
share one contract and are cross-checked in the test suite; the benchmark
in ``benchmarks/bench_eval.py`` compares their throughput.
"""

import os

from . import _evalnp

try:
    from . import _evalc  # type: ignore[attr-defined]
except ImportError:  # pragma: no cover - depends on build environment
    _evalc = None

if _evalc is not None and os.environ.get("TORUSFLOW_FORCE_FALLBACK", "0") != "1":
    _impl = _evalc
    BACKEND = "compiled"
else:
    _impl = _evalnp
    BACKEND = "fallback"

# Streaming wins only while batches are small enough that BLAS setup and
# phase-matrix temporaries dominate; see benchmarks/bench_eval.py.
SMALL_BATCH = 16


def _pick(npoints: int):
    if _impl is _evalnp:
        return _evalnp
    return _impl if npoints <= SMALL_BATCH else _evalnp


def eval_scalar(block, n1, scale, x1, x2):
    """Evaluate a truncated rfft2 block at points (x1, x2).

    Parameters
    ----------
    block : complex (R, C) array; rows are fft-ordered modes `n1`,
        columns are modes 0..C-1 along axis 1.
    n1 : int array of length R with the signed row mode numbers.
    scale : float, normalization (1/N^2 for raw rfft2 output).
    x1, x2 : float arrays of evaluation coordinates in [-1, 1).
    """
    return _pick(len(x1)).eval_scalar(block, n1, scale, x1, x2)


def eval_velocity(block, n1, scale, x1, x2):
    """Velocity (u1, u2) induced by a truncated vorticity spectrum.

    Applies the Biot-Savart multipliers (-i k2/|k|^2, +i k1/|k|^2) mode by
    mode, then evaluates at the points.  Same layout conventions as
    `eval_scalar`.
    """
    return _pick(len(x1)).eval_velocity(block, n1, scale, x1, x2)


def eval_scalar_with(backend, block, n1, scale, x1, x2):
    """Explicit-backend variant (used by tests and the benchmark)."""
    impl = {"compiled": _evalc, "fallback": _evalnp}[backend]
    if impl is None:
        raise RuntimeError("compiled kernel not available")
    return impl.eval_scalar(block, n1, scale, x1, x2)


def eval_velocity_with(backend, block, n1, scale, x1, x2):
    impl = {"compiled": _evalc, "fallback": _evalnp}[backend]
    if impl is None:
        raise RuntimeError("compiled kernel not available")
    return impl.eval_velocity(block, n1, scale, x1, x2)
