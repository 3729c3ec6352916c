"""Numerical integration and differentiation engine."""
from ._derivative import MAX_ORDER, nth_derivative
from ._integrate import (
    gauss_panels,
    integrate_1d,
    integrate_2d_nested,
    integrate_semi_infinite,
    integrate_vector,
    truncation_point,
)
from ._result import (
    ConvergenceLog,
    QuadratureWarning,
    QuadResult,
    absorb,
    call_tracked,
    report,
    track_convergence,
)

__all__ = [
    "ConvergenceLog",
    "MAX_ORDER",
    "QuadResult",
    "QuadratureWarning",
    "absorb",
    "call_tracked",
    "gauss_panels",
    "integrate_1d",
    "integrate_2d_nested",
    "integrate_semi_infinite",
    "integrate_vector",
    "nth_derivative",
    "report",
    "track_convergence",
    "truncation_point",
]
