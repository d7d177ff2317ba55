"""Exact computations with finite and affine root systems, foldings and Macdonald identities."""

from .affine_roots import AffineSystem, AffineType, build_affine
from .errors import CapacityError, DomainError, MacverError, UsageError
from .finite_roots import FiniteRootSystem, build_finite
from .qseries import QSeries

__all__ = [
    "AffineSystem", "AffineType", "build_affine",
    "FiniteRootSystem", "build_finite", "QSeries",
    "MacverError", "UsageError", "DomainError", "CapacityError",
]
