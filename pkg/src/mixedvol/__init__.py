"""Mixed volumes of lattice polytopes.

Exact rational geometry (hulls, volumes, faces, Minkowski sums), exact
simplex LP, the volume polynomial and its capacity, a Schneider-style
subdivision oracle, and the randomized sampling estimator for mixed-volume
coefficients, plus a CLI (`mixedvol`).
"""

__version__ = "0.1.0"

from .errors import (
    BoundViolationError,
    CapacityError,
    DecompositionError,
    DimensionLimitError,
    GeometryError,
    InstanceValidationError,
    LPError,
    MixedVolError,
    NonGenericShiftError,
    SamplingError,
    SubdivisionError,
)

__all__ = [
    "__version__",
    "BoundViolationError",
    "CapacityError",
    "DecompositionError",
    "DimensionLimitError",
    "GeometryError",
    "InstanceValidationError",
    "LPError",
    "MixedVolError",
    "NonGenericShiftError",
    "SamplingError",
    "SubdivisionError",
]
