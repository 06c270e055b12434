"""Exact orbit-based search: existence, counting and contour recovery."""

from ._jit import JIT_ACTIVE
from .api import (
    DEFAULT_MAX_ORDER,
    CountResult,
    SearchBoundError,
    SearchBudgetExceeded,
    contour_search,
    count_delta,
    exists_witness,
)
from .plan import OrbitPlan, build_orbit_plan, lcm_condition

__all__ = [
    "JIT_ACTIVE",
    "DEFAULT_MAX_ORDER",
    "CountResult",
    "SearchBoundError",
    "SearchBudgetExceeded",
    "OrbitPlan",
    "build_orbit_plan",
    "lcm_condition",
    "contour_search",
    "count_delta",
    "exists_witness",
]
