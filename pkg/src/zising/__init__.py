"""Boundary spin correlations of the Z-invariant Ising model.

Correlations of a region are computed from the span of the curve
``gamma_R`` built from rescaled Jacobi functions; an exhaustive-enumeration
oracle on a concrete chord arrangement checks them independently.
"""
__version__ = "0.1.0"

from .elliptic import EllipticDomainError, EllipticParameter, resc_sncndn
from .region import Region, RegionError, regular_region, region_from_dict, validate
from .curve import gamma, gamma_values
from .correlations import NumericalError, correlation_matrix
from .arrangement import build_arrangement, build_black_graph, build_white_graph
from .oracle import exact_correlations

__all__ = [
    "__version__",
    "EllipticDomainError",
    "EllipticParameter",
    "resc_sncndn",
    "Region",
    "RegionError",
    "regular_region",
    "region_from_dict",
    "validate",
    "gamma",
    "gamma_values",
    "NumericalError",
    "correlation_matrix",
    "build_arrangement",
    "build_black_graph",
    "build_white_graph",
    "exact_correlations",
]
