"""Finite circle geometries, their association schemes, and EKR searches."""

__version__ = "0.1.0"

from .gf import Field, field_create
from .geometry import CircleGeometry, validate
from .scheme import analyze, check_scheme, eigendata, relations
from .search import SearchBudget, max_t_intersecting

__all__ = [
    "CircleGeometry", "Field", "SearchBudget", "analyze", "check_scheme", "eigendata",
    "field_create", "max_t_intersecting", "relations", "validate", "__version__",
]
