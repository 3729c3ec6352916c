from __future__ import annotations

import warnings
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Any, Callable, Iterator, NamedTuple, Optional, Tuple


class QuadratureWarning(RuntimeWarning):
    """An integral did not reach its requested tolerance."""


class QuadResult(NamedTuple):
    value: Any  # float, or ndarray for vector integrands
    error_estimate: float
    evaluations: int
    converged: bool


class ConvergenceLog:
    """Counts integrals and failures evaluated inside :func:`track_convergence`."""

    def __init__(self) -> None:
        self.integrals = 0
        self.failures = 0
        self.evaluations = 0

    @property
    def converged(self) -> bool:
        return self.failures == 0

    def record(self, result: QuadResult) -> None:
        self.integrals += 1
        self.evaluations += result.evaluations
        if not result.converged:
            self.failures += 1

    def merge(self, other: ConvergenceLog) -> None:
        self.integrals += other.integrals
        self.failures += other.failures
        self.evaluations += other.evaluations


_ACTIVE_LOG: ContextVar[Optional[ConvergenceLog]] = ContextVar(
    "_ACTIVE_LOG", default=None
)


@contextmanager
def track_convergence() -> Iterator[ConvergenceLog]:
    """Collect convergence of every integral evaluated in the block.

    Examples
    --------
    >>> import math
    >>> from aerocov.quad import integrate_1d
    >>> with track_convergence() as log:
    ...     _ = integrate_1d(math.sin, 0, math.pi)
    >>> log.converged
    True
    """
    log = ConvergenceLog()
    token = _ACTIVE_LOG.set(log)
    try:
        yield log
    finally:
        _ACTIVE_LOG.reset(token)


def absorb(other: ConvergenceLog) -> None:
    """Fold a log collected elsewhere, e.g. in a worker process, into the active one."""
    log = _ACTIVE_LOG.get()
    if log is not None:
        log.merge(other)


def call_tracked(func: Callable[[Any], Any], item: Any) -> Tuple[Any, ConvergenceLog]:
    """``func(item)`` together with the convergence of the integrals it evaluated.

    Parallel workers do not see the caller's :func:`track_convergence`
    context; they return their own log for the caller to :func:`absorb`.
    """
    with track_convergence() as log:
        value = func(item)
    return value, log


def report(result: QuadResult, message: str = "") -> QuadResult:
    log = _ACTIVE_LOG.get()
    if log is not None:
        log.record(result)
    if not result.converged:
        warnings.warn(
            f"quadrature did not converge (error estimate "
            f"{result.error_estimate:.3g}) {message}".rstrip(),
            QuadratureWarning,
            stacklevel=3,
        )
    return result
