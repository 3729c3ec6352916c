from __future__ import annotations

import itertools
import logging
import math
from functools import partial
from typing import Callable, Dict, List, Optional, Sequence

import xarray as xr

from ..analytic import local_coverage, overall_coverage
from ..core import expected_uav_count
from ..models import OptProblem, Scenario
from ..quad import absorb, call_tracked
from ..util import labelled_grid, parallel_map
from ._constraints import (
    LocalFn,
    beta_for_count,
    count_constraint,
    default_z_grid,
    floor_constraint,
)
from ._result import InfeasibleError, OptResult, Point

logger = logging.getLogger(__name__)

ObjectiveFn = Callable[[Scenario], float]

COUNT_CAP = "count_cap"
FLOOR_VIOLATION = "floor_violation"


class Evaluation:
    __slots__ = ("betas", "value", "count", "reason")

    def __init__(self, betas: Point, value: float, count: float, reason: str):
        self.betas = betas
        self.value = value
        self.count = count
        self.reason = reason

    @property
    def feasible(self) -> bool:
        return not self.reason


class Evaluator:
    """Constraint and objective evaluation of an :class:`OptProblem`, cached by β.

    ``objective`` and ``local`` replace the analytic overall and local
    coverage (they receive the candidate scenario). Both must be picklable
    for parallel grid search.
    """

    def __init__(
        self,
        problem: OptProblem,
        objective: Optional[ObjectiveFn] = None,
        local: Optional[LocalFn] = None,
    ):
        self.problem = problem
        self.objective = objective or partial(
            _analytic_objective,
            gamma=problem.gamma1,
            method=problem.method,
            nodes=problem.nodes,
            spec=problem.quad,
        )
        self.local = local or partial(
            _analytic_local, gamma=problem.gamma2, spec=problem.quad
        )
        scenario = problem.scenario
        self.z_grid = problem.z_grid or default_z_grid(
            scenario.users, region=scenario.region_radius_m
        )
        region = scenario.region_radius_m
        self._counts = None
        if problem.lambda_mode == "rescale":
            self._counts = [
                expected_uav_count(t, math.inf if region is None else region)
                for t in scenario.tiers
            ]
        self._cache: Dict[Point, Evaluation] = {}

    @property
    def evaluations(self) -> int:
        return len(self._cache)

    def scenario_at(self, betas: Sequence[float]) -> Scenario:
        """The template scenario with the given β, λ rescaled in ``rescale`` mode."""
        scenario = self.problem.scenario.with_betas(betas)
        if self._counts is None:
            return scenario
        region = scenario.region_radius_m
        radius = math.inf if region is None else region
        tiers = []
        for tier, count in zip(scenario.tiers, self._counts):
            unit = expected_uav_count(tier.model_copy(update={"lam": 1.0}), radius)
            tiers.append(tier.model_copy(update={"lam": count / unit}))
        return scenario.with_tiers(tiers)

    def __call__(self, betas: Sequence[float]) -> Evaluation:
        key = tuple(float(b) for b in betas)
        if key not in self._cache:
            self._cache[key] = self._evaluate(key)
        return self._cache[key]

    def _evaluate(self, betas: Point) -> Evaluation:
        problem = self.problem
        scenario = self.scenario_at(betas)
        counted = count_constraint(
            scenario.tiers, problem.n_max, scenario.region_radius_m
        )
        if not counted.feasible:
            return Evaluation(betas, math.nan, counted.count, COUNT_CAP)
        if problem.floor is not None:
            floor = floor_constraint(
                scenario,
                problem.gamma2,
                problem.floor,
                self.z_grid,
                local=self.local,
            )
            if not floor.feasible:
                logger.debug("betas %s violate the floor at z=%g", betas, floor.worst_z)
                return Evaluation(betas, math.nan, counted.count, FLOOR_VIOLATION)
        value = float(self.objective(scenario))
        logger.debug("betas %s: objective %.6f", betas, value)
        return Evaluation(betas, value, counted.count, "")


def _analytic_objective(scenario, gamma, method, nodes, spec) -> float:
    return overall_coverage(
        scenario, gamma, method, nodes=nodes, spec=spec, threads=1
    )


def _analytic_local(scenario, z, gamma, spec) -> float:
    return local_coverage(scenario, z, gamma, "approx", spec=spec)


def _grid_point(betas: Point, evaluator: Evaluator) -> Evaluation:
    return evaluator(betas)


def beta_dims(n_tiers: int) -> List[str]:
    return [f"beta_{k + 1}" for k in range(n_tiers)]


def grid_search(
    problem: OptProblem,
    *,
    objective: Optional[ObjectiveFn] = None,
    local: Optional[LocalFn] = None,
    threads: Optional[int] = None,
) -> OptResult:
    """Exhaustive search over ``problem.beta_grid``.

    Every grid point is evaluated (in parallel); the result carries the full
    objective/count/reason map. Ties go to the lexicographically smallest β.

    Raises
    ------
    InfeasibleError
        If no grid point satisfies both constraints.
    """
    if problem.beta_grid is None:
        raise ValueError("grid search needs 'beta_grid'")
    axes = [sorted(float(b) for b in axis) for axis in problem.beta_grid]
    points = list(itertools.product(*axes))
    evaluator = Evaluator(problem, objective, local)
    work = partial(_grid_point, evaluator=evaluator)
    tracked = parallel_map(
        partial(call_tracked, work), points, threads, desc="grid search"
    )
    results = []
    for ev, log in tracked:
        absorb(log)
        results.append(ev)

    coords = dict(zip(beta_dims(len(axes)), axes))
    values = labelled_grid(coords, attrs={"gamma1": problem.gamma1})
    counts = labelled_grid(coords)
    reasons = labelled_grid(coords, fill="", dtype=object)
    best: Optional[Evaluation] = None
    for ev in results:
        idx = tuple(axis.index(b) for axis, b in zip(axes, ev.betas))
        values.values[idx] = ev.value
        counts.values[idx] = ev.count
        reasons.values[idx] = ev.reason
        if ev.feasible and (best is None or ev.value > best.value):
            best = ev
    if best is None:
        raise InfeasibleError(
            f"none of the {len(points)} grid points satisfies the constraints"
        )
    feasibility = xr.Dataset({"objective": values, "count": counts, "reason": reasons})
    logger.info(
        "grid search: best %.6f at betas %s (%d feasible of %d)",
        best.value,
        best.betas,
        sum(ev.feasible for ev in results),
        len(results),
    )
    return OptResult(
        best_betas=best.betas,
        best_value=best.value,
        feasibility=feasibility,
        history=[(best.betas, best.value)],
        evaluations=len(results),
    )


def _clip(problem: OptProblem, beta: float) -> Optional[float]:
    if problem.beta_min <= beta <= problem.beta_max:
        return beta
    return None


def default_start(problem: OptProblem) -> Point:
    """Starting β for :func:`alternate_maximization`.

    With fixed densities, tiers after the first start as concentrated as
    allowed and the first tier takes whatever count the cap leaves.
    """
    scenario = problem.scenario
    if problem.lambda_mode == "rescale":
        lo, hi = problem.beta_min, problem.beta_max
        return tuple(min(max(t.beta, lo), hi) for t in scenario.tiers)
    region = scenario.region_radius_m
    radius = math.inf if region is None else region
    rest = [t.model_copy(update={"beta": problem.beta_max}) for t in scenario.tiers[1:]]
    left = problem.n_max - sum(expected_uav_count(t, radius) for t in rest)
    if left <= 0:
        raise InfeasibleError("the UAV cap is exhausted by the tiers after the first")
    try:
        first = beta_for_count(scenario.tiers[0], left, region)
    except ValueError:
        first = problem.beta_min
    first = min(max(first, problem.beta_min), problem.beta_max)
    return (first,) + (problem.beta_max,) * len(rest)


def _line_search(problem, evaluate, current: Evaluation, k: int) -> Evaluation:
    # move beta_k geometrically in whichever direction keeps improving
    for factor in (problem.step_factor, 1 / problem.step_factor):
        moved = False
        for _ in range(problem.max_steps):
            beta = _clip(problem, current.betas[k] * factor)
            if beta is None:
                break
            trial = evaluate(current.betas[:k] + (beta,) + current.betas[k + 1 :])
            if not trial.feasible or trial.value <= current.value:
                break
            current, moved = trial, True
        if moved:
            break
    return current


def _compensated_steps(problem, evaluator, current: Evaluation, k: int) -> Evaluation:
    # shrink beta_k and re-balance one earlier tier so the expected count holds
    scenario = problem.scenario
    region = scenario.region_radius_m
    radius = math.inf if region is None else region
    for _ in range(problem.max_steps):
        beta_k = _clip(problem, current.betas[k] * problem.step_factor)
        if beta_k is None:
            break
        tiers = evaluator.scenario_at(current.betas).tiers
        grown = tiers[k].model_copy(update={"beta": beta_k})
        delta = expected_uav_count(grown, radius) - expected_uav_count(tiers[k], radius)
        best: Optional[Evaluation] = None
        for i in range(k):
            remaining = expected_uav_count(tiers[i], radius) - delta
            if remaining <= 0:
                continue
            try:
                beta_i = _clip(problem, beta_for_count(tiers[i], remaining, region))
            except ValueError:
                continue
            if beta_i is None:
                continue
            betas = list(current.betas)
            betas[i], betas[k] = beta_i, beta_k
            trial = evaluator(betas)
            if trial.feasible and (best is None or trial.value > best.value):
                best = trial
        if best is None or best.value <= current.value:
            break
        current = best
    return current


def alternate_maximization(
    problem: OptProblem,
    max_rounds: int = 10,
    start: Optional[Sequence[float]] = None,
    *,
    objective: Optional[ObjectiveFn] = None,
    local: Optional[LocalFn] = None,
) -> OptResult:
    """Coordinate-wise improvement of the β vector, tier by tier.

    The first tier (every tier in ``rescale`` mode) is line-searched
    geometrically. Each later tier is stepped down by ``step_factor``, up to
    ``max_steps`` times, while one earlier tier is made sparser so the
    expected UAV count stays fixed. Steps are accepted only if they strictly
    improve the objective, so the result is never worse than ``start``.

    Raises
    ------
    InfeasibleError
        If the starting point violates a constraint.
    """
    evaluator = Evaluator(problem, objective, local)
    if start is None:
        point = default_start(problem)
    else:
        point = tuple(float(b) for b in start)
    if len(point) != problem.scenario.n_tiers:
        raise ValueError(
            f"start has {len(point)} betas for {problem.scenario.n_tiers} tiers"
        )
    current = evaluator(point)
    if not current.feasible:
        raise InfeasibleError(f"start {point} is infeasible ({current.reason})")
    history = [(current.betas, current.value)]
    rescale = problem.lambda_mode == "rescale"
    for round_ in range(max_rounds):
        before = current.value
        for k in range(problem.scenario.n_tiers):
            if k == 0 or rescale:
                current = _line_search(problem, evaluator, current, k)
            else:
                current = _compensated_steps(problem, evaluator, current, k)
            if current.value > history[-1][1]:
                history.append((current.betas, current.value))
        logger.info(
            "round %d: objective %.6f at %s", round_ + 1, current.value, current.betas
        )
        if current.value <= before:
            break
    return OptResult(
        best_betas=current.betas,
        best_value=current.value,
        history=history,
        evaluations=evaluator.evaluations,
    )
