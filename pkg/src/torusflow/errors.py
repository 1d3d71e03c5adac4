"""Exception types raised by the solver and diagnostics."""


class TorusFlowError(Exception):
    """Base class for package errors."""


class NonZeroMeanError(TorusFlowError):
    """Poisson inversion was asked for a field with nonvanishing mean."""

    def __init__(self, mean):
        self.mean = mean
        super().__init__(f"field has nonzero mean {mean:.3e}; Poisson inversion undefined")


class NonFiniteFieldError(TorusFlowError):
    """NaN or Inf encountered in field samples."""


class CFLViolationError(TorusFlowError):
    """Requested time step exceeds the advective CFL limit."""

    def __init__(self, dt, dt_max):
        self.dt = dt
        self.dt_max = dt_max
        super().__init__(f"dt={dt:.3e} exceeds CFL limit {dt_max:.3e}")


class UnderResolvedError(TorusFlowError):
    """Grid too coarse for the requested structure."""


class RecipeError(TorusFlowError):
    """Initial-data recipe violates one of its constraints."""


class RegionError(TorusFlowError):
    """Evaluation point outside the admissible wedge, or degenerate region."""


class SymmetryError(TorusFlowError):
    """Field fails a required discrete symmetry."""


class QuadratureError(TorusFlowError):
    """Adaptive quadrature failed to reach the requested tolerance."""


class NoQualifyingParticleError(TorusFlowError):
    """No tracked particle satisfies the precondition of a witness."""


class SnapshotFormatError(TorusFlowError):
    """Snapshot file is malformed or fails its checksum."""
