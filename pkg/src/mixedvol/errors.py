"""Exception hierarchy shared across the package."""


class MixedVolError(Exception):
    """Base class for all package errors."""


class GeometryError(MixedVolError):
    """Invalid geometric input (point outside polytope, empty set, ...)."""


class DimensionLimitError(MixedVolError):
    """Exact geometry requested above the configured dimension limit."""


class LPError(MixedVolError):
    """Malformed linear program or internal solver inconsistency."""


class CapacityError(MixedVolError):
    """Capacity optimization failed to converge within its iteration cap."""

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class BoundViolationError(MixedVolError):
    """A theorem-level bound failed; indicates an implementation bug."""


class SamplingError(MixedVolError):
    """Sampler failure (acceptance collapse, degenerate chord, ...)."""


class DecompositionError(MixedVolError):
    """Weight-decomposition LP infeasible: the point is not in the sum."""


class NonGenericShiftError(MixedVolError):
    """Shift vectors hit a normal-cone boundary; resample and retry."""


class SubdivisionError(MixedVolError):
    """Cell enumeration exceeded its configured budget."""


class InstanceValidationError(MixedVolError):
    """Instance file or parameters violate the input contract."""
