"""Numerical toolkit for steady Stokes/Navier-Stokes flow in the half-space:
explicit kernels, tent-space and Littlewood-Paley norms, half-space potential
operators, and a small-data Picard solver, with property-based verification
suites at desk scale.
"""

__version__ = "0.1.0"

from .grid import (BoundaryField, HalfSpaceGrid, SampledField, interior_restrict,
                   make_grid, sample, sample_boundary)
from .tentspace import (CompactBox, TentParams, carleson_functional,
                        conical_functional, space_norm_X, space_norm_Y,
                        space_norm_Z, weighted_tent_norm)

__all__ = [
    "BoundaryField", "HalfSpaceGrid", "SampledField", "interior_restrict",
    "make_grid", "sample", "sample_boundary", "CompactBox", "TentParams",
    "carleson_functional", "conical_functional", "space_norm_X",
    "space_norm_Y", "space_norm_Z", "weighted_tent_norm", "__version__",
]
