from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special

from ..models import QuadSpec
from ._result import QuadResult, report

DEFAULT_SPEC = QuadSpec()


def _interior(points: Optional[Sequence[float]], a: float, b: float) -> list:
    if not points:
        return []
    return sorted({float(p) for p in points if a < p < b})


def _quad(f, a, b, spec, points=None, endpoint_powers=None) -> QuadResult:
    if not a <= b:
        raise ValueError(f"lower bound {a} exceeds upper bound {b}")
    if a == b:
        return QuadResult(0.0, 0.0, 0, True)
    kwargs = dict(
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        limit=spec.max_subdivisions,
        full_output=1,
    )
    if endpoint_powers is not None:
        out = integrate.quad(f, a, b, weight="alg", wvar=endpoint_powers, **kwargs)
    else:
        pts = _interior(points, a, b) if math.isfinite(b) else []
        if pts:
            kwargs["points"] = pts
        out = integrate.quad(f, a, b, **kwargs)
    # a fourth element carries the QUADPACK failure message
    value, err, info = out[:3]
    return QuadResult(float(value), float(err), int(info["neval"]), len(out) < 4)


def _quad_vec(f, a, b, spec, points=None) -> QuadResult:
    if not a <= b:
        raise ValueError(f"lower bound {a} exceeds upper bound {b}")
    if a == b:
        return QuadResult(np.zeros_like(np.asarray(f(a), dtype=float)), 0.0, 1, True)
    pts = _interior(points, a, b) if math.isfinite(b) else []
    value, err, info = integrate.quad_vec(
        f,
        a,
        b,
        epsabs=spec.abs_tol,
        epsrel=spec.rel_tol,
        norm="max",
        limit=spec.max_subdivisions,
        points=pts or None,
        full_output=True,
    )
    converged = bool(info.success)
    return QuadResult(np.asarray(value), float(err), int(info.neval), converged)


def integrate_1d(
    f: Callable[[float], float],
    a: float,
    b: float,
    spec: Optional[QuadSpec] = None,
    *,
    points: Optional[Sequence[float]] = None,
    endpoint_powers: Optional[Tuple[float, float]] = None,
) -> QuadResult:
    """Adaptive Gauss–Kronrod integral of ``f`` over ``[a, b]``.

    The default rule is open (never evaluates ``f`` at ``a`` or ``b``) and
    extrapolates over subdivisions, so integrable endpoint singularities such
    as ``1/sqrt(x)`` converge. ``endpoint_powers=(p, q)`` integrates
    ``f(x)·(x-a)^p·(b-x)^q`` with the algebraic-weight rule instead, for
    known singular factors that ``f`` leaves out.

    The integrand may be called from several threads; it must be reentrant.
    """
    spec = spec or DEFAULT_SPEC
    return report(_quad(f, a, b, spec, points, endpoint_powers))


def integrate_vector(
    f: Callable[[float], np.ndarray],
    a: float,
    b: float,
    spec: Optional[QuadSpec] = None,
    *,
    points: Optional[Sequence[float]] = None,
) -> QuadResult:
    """Adaptive integral of an array-valued ``f``; tolerance on the max norm."""
    spec = spec or DEFAULT_SPEC
    return report(_quad_vec(f, a, b, spec, points))


def truncation_point(a: float, decay: float, degree: int, eps: float) -> float:
    """Upper limit leaving relative mass ``eps`` of ``x^degree·e^{-decay·x}``.

    The tail beyond the returned point holds at most ``eps`` of the envelope's
    mass on ``[a, ∞)``.
    """
    if decay <= 0:
        raise ValueError(f"decay rate must be positive, got {decay}")
    k = degree + 1
    beyond_a = float(special.gammaincc(k, decay * a))
    if beyond_a == 0:
        return a
    return max(a, float(special.gammainccinv(k, eps * beyond_a)) / decay)


def _semi_infinite(f, a, spec, decay, degree, points, vector) -> QuadResult:
    upper = math.inf
    if decay is not None:
        upper = truncation_point(a, decay, degree, spec.tail_epsilon)
    if vector:
        return _quad_vec(f, a, upper, spec, points)
    return _quad(f, a, upper, spec, points)


def integrate_semi_infinite(
    f: Callable[[float], float],
    a: float,
    spec: Optional[QuadSpec] = None,
    *,
    decay: Optional[float] = None,
    degree: int = 1,
    points: Optional[Sequence[float]] = None,
    vector: bool = False,
) -> QuadResult:
    """Integral of ``f`` over ``[a, ∞)``.

    With a ``decay`` rate the integrand is assumed dominated by
    ``x^degree·e^{-decay·x}`` and the range is cut analytically at
    :func:`truncation_point`; otherwise QUADPACK's infinite-range transform
    is used.
    """
    spec = spec or DEFAULT_SPEC
    return report(_semi_infinite(f, a, spec, decay, degree, points, vector))


@lru_cache(maxsize=8)
def _legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    return np.polynomial.legendre.leggauss(order)


def _composite(f: Callable, a: float, b: float, panels: int, order: int) -> np.ndarray:
    nodes, weights = _legendre(order)
    half = (b - a) / (2 * panels)
    centers = a + half * (2 * np.arange(panels) + 1)
    x = (centers[:, None] + half * nodes[None, :]).ravel()
    values = np.asarray(f(x), dtype=float)
    return np.tensordot(np.tile(weights, panels) * half, values, axes=(0, 0))


def gauss_panels(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rel_tol: float = 1e-7,
    abs_tol: float = 1e-13,
    order: int = 16,
    max_panels: int = 128,
) -> Tuple[np.ndarray, bool]:
    """Composite Gauss–Legendre integral with panel doubling.

    ``f`` receives a 1D array of abscissae and returns values along axis 0
    (trailing axes are integrated independently). Returns the estimate and
    whether two successive refinements agreed within tolerance.
    """
    if b <= a:
        return np.zeros_like(np.asarray(f(np.array([a])), dtype=float)[0]), True
    previous = _composite(f, a, b, 1, order)
    panels = 1
    while panels < max_panels:
        panels *= 2
        current = _composite(f, a, b, panels, order)
        gap = np.max(np.abs(current - previous))
        if gap <= max(abs_tol, rel_tol * np.max(np.abs(current))):
            return current, True
        previous = current
    return current, False


def integrate_2d_nested(
    f: Callable[[float, np.ndarray], np.ndarray],
    l_bounds: Tuple[float, float],
    theta_bounds: Callable[[float], Tuple[float, float]],
    spec: Optional[QuadSpec] = None,
    *,
    points: Optional[Sequence[float]] = None,
    decay: Optional[float] = None,
    vector: bool = False,
) -> QuadResult:
    """Iterated integral ``∫ dl ∫_{θ_lo(l)}^{θ_hi(l)} f(l, θ) dθ``.

    The inner θ-integral uses :func:`gauss_panels` vectorized over θ with a
    tenth of the outer relative tolerance; the outer l-integral is adaptive.
    An empty θ-interval contributes exactly 0. An infinite upper l-bound
    should come with ``decay`` (see :func:`integrate_semi_infinite`).
    Inner non-convergence marks the whole result as not converged.
    """
    spec = spec or DEFAULT_SPEC
    inner = spec.inner()
    inner_failures = 0

    def outer(l: float) -> np.ndarray:
        nonlocal inner_failures
        lo, hi = theta_bounds(l)
        value, ok = gauss_panels(
            lambda th: f(l, th), lo, max(lo, hi), inner.rel_tol, inner.abs_tol
        )
        if not ok:
            inner_failures += 1
        return value if vector else float(value)

    a, b = l_bounds
    if math.isinf(b):
        result = _semi_infinite(outer, a, spec, decay, 1, points, vector)
    elif vector:
        result = _quad_vec(outer, a, b, spec, points)
    else:
        result = _quad(outer, a, b, spec, points)
    if inner_failures:
        result = result._replace(converged=False)
    return report(result)
