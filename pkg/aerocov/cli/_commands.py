"""Command implementations; each returns a table and its provenance."""
from __future__ import annotations

import itertools
import logging
import math
from pathlib import Path
from functools import cached_property
from typing import Any, Dict, List, Optional, Tuple, TypeVar

import numpy as np
import pandas as pd
from pydantic import BaseModel

from ..analytic import (
    association_frequency,
    coverage_curve,
    interference_laplace,
    local_coverage,
    mu_threshold,
    overall_coverage,
    tagged_cdf,
)
from ..fixtures import Fixture, available, load_fixture
from ..models import LinkClass, QuadSpec, Scenario
from ..optimize import OptResult, alternate_maximization, grid_search
from ..quad import track_convergence
from ..simulate import (
    association_frequencies,
    empirical_cdf,
    empirical_interference_laplace,
    empirical_tagged_distance,
    estimate_local_coverage,
    estimate_overall_coverage,
)
from ._config import ConfigError, ExperimentConfig

logger = logging.getLogger(__name__)

Outcome = Tuple[pd.DataFrame, Dict[str, Any]]
M = TypeVar("M", bound=BaseModel)

# Kolmogorov-Smirnov critical value at 95%, scaled by 1/sqrt(n)
_KS95 = 1.36


def _override(model: M, **changes: Any) -> M:
    # model_copy skips validation
    return type(model).model_validate({**model.model_dump(), **changes})


class RunContext:
    """Command-line overrides shared by every command."""

    def __init__(
        self,
        config: ExperimentConfig,
        base_dir: Path = Path("."),
        seed: Optional[int] = None,
        threads: Optional[int] = None,
        method: Optional[str] = None,
        tolerance: Optional[float] = None,
    ):
        self.config = config
        self.base_dir = base_dir
        self.threads = threads
        self.method = method
        self.sim = config.sim
        if seed is not None:
            self.sim = _override(self.sim, seed=seed)
        self.quad = config.quad
        if tolerance is not None:
            self.quad = _override(self.quad or QuadSpec(), rel_tol=tolerance)

    @cached_property
    def scenario(self) -> Scenario:
        return self.config.resolve_scenario(self.base_dir)

    def method_for(self, block_method: str) -> str:
        return self.method or block_method

    def analytic_provenance(self) -> Dict[str, Any]:
        spec = self.quad or QuadSpec()
        return {"engine": "analytic", "quad": spec.model_dump()}

    def mc_provenance(self) -> Dict[str, Any]:
        return {"engine": "monte_carlo", "sim": self.sim.model_dump()}


def _gamma_label(gamma) -> Any:
    return gamma if np.ndim(gamma) == 0 else ";".join(f"{g:.10g}" for g in gamma)


def cmd_local_curve(ctx: RunContext) -> Outcome:
    block = ctx.config.block("local_curve")
    scenario = ctx.scenario
    z_points = block.z_points()
    gammas = [t.resolve(scenario) for t in block.thresholds]
    method = ctx.method_for(block.method)
    rows: List[Dict[str, Any]] = []
    if method == "mc":
        for gamma in gammas:
            for z in z_points:
                est = estimate_local_coverage(
                    scenario, ctx.sim, z, gamma, threads=ctx.threads
                )
                rows.append(
                    {
                        "z_u": z,
                        "gamma": _gamma_label(gamma),
                        "coverage": est.mean,
                        "method": "monte_carlo",
                        "converged": True,
                        "half_width": est.half_width_95,
                    }
                )
        return pd.DataFrame(rows), ctx.mc_provenance()

    points = coverage_curve(
        scenario, z_points, gammas, method, spec=ctx.quad, threads=ctx.threads
    )
    sim = _override(ctx.sim, trials=block.mc_trials or 1)
    for p in points:
        row = {
            "z_u": p.z_u,
            "gamma": _gamma_label(p.gamma),
            "coverage": p.value,
            "method": p.method,
            "converged": p.converged,
        }
        if block.mc_trials:
            est = estimate_local_coverage(
                scenario, sim, p.z_u, p.gamma, threads=ctx.threads
            )
            row.update(mc=est.mean, mc_half_width=est.half_width_95)
        rows.append(row)
    unconverged = sum(not p.converged for p in points)
    if unconverged:
        logger.warning("%d of %d points did not converge", unconverged, len(points))
    provenance = ctx.analytic_provenance()
    if block.mc_trials:
        provenance["overlay"] = sim.model_dump()
    return pd.DataFrame(rows), provenance


def cmd_overall(ctx: RunContext) -> Outcome:
    block = ctx.config.block("overall")
    scenario = ctx.scenario
    gamma = block.threshold.resolve(scenario)
    method = ctx.method_for(block.method)
    if method == "mc":
        est = estimate_overall_coverage(scenario, ctx.sim, gamma, threads=ctx.threads)
        row = {
            "gamma": _gamma_label(gamma),
            "coverage": est.mean,
            "method": "monte_carlo",
            "converged": True,
            "half_width": est.half_width_95,
        }
        return pd.DataFrame([row]), ctx.mc_provenance()
    with track_convergence() as log:
        value = overall_coverage(
            scenario,
            gamma,
            method,
            nodes=block.nodes,
            spec=ctx.quad,
            threads=ctx.threads,
        )
    row = {
        "gamma": _gamma_label(gamma),
        "coverage": value,
        "method": method,
        "converged": log.converged,
    }
    logger.info("overall %s coverage: %.6f", method, value)
    return pd.DataFrame([row]), ctx.analytic_provenance()


def _check(quantity: str, z_u: float, analytic: float, mc, tolerance: float) -> Dict:
    gap = abs(analytic - mc.mean)
    return {
        "quantity": quantity,
        "z_u": z_u,
        "analytic": analytic,
        "mc": mc.mean,
        "half_width": mc.half_width_95,
        "gap": gap,
        "tolerance": tolerance,
        "pass": bool(gap <= tolerance + mc.half_width_95),
    }


def _distance_checks(ctx, scenario, z, tolerance, n_points) -> List[Dict]:
    rows = []
    for (k, tier), link in itertools.product(enumerate(scenario.tiers), LinkClass):
        if tier.lam == 0:
            continue
        samples = empirical_tagged_distance(
            scenario, ctx.sim, k, link, z, threads=ctx.threads
        )
        finite = samples[np.isfinite(samples)]
        top = np.quantile(finite, 0.99) if finite.size else 4 * tier.altitude_m
        radii = np.linspace(tier.altitude_m, max(top, 2 * tier.altitude_m), n_points)
        model = np.array([tagged_cdf(scenario, k, link, r, z, ctx.quad) for r in radii])
        sup = float(np.max(np.abs(model - empirical_cdf(samples, radii))))
        band = _KS95 / math.sqrt(samples.size)
        rows.append(
            {
                "quantity": f"tagged_distance[tier={k + 1},{link}]",
                "z_u": z,
                "analytic": float(model[-1]),
                "mc": float(empirical_cdf(samples, radii[-1])),
                "half_width": band,
                "gap": sup,
                "tolerance": tolerance,
                "pass": bool(sup <= tolerance + band),
            }
        )
    return rows


def cmd_validate(ctx: RunContext) -> Outcome:
    """Analytic-versus-simulation checks; a row fails beyond its widened band."""
    block = ctx.config.block("validate")
    scenario = ctx.scenario
    gamma = block.threshold.resolve(scenario)
    tol = block.tolerance
    rows: List[Dict[str, Any]] = []
    for z in block.z_points:
        logger.info("validating at z_u=%g", z)
        value = local_coverage(scenario, z, gamma, spec=ctx.quad)
        est = estimate_local_coverage(scenario, ctx.sim, z, gamma, threads=ctx.threads)
        rows.append(_check("local_coverage", z, value, est, tol))

        freqs = association_frequencies(scenario, ctx.sim, z, threads=ctx.threads)
        for (k, link), est in freqs.items():
            value = association_frequency(scenario, k, link, z, ctx.quad)
            rows.append(_check(f"association[tier={k + 1},{link}]", z, value, est, tol))

        rows.extend(_distance_checks(ctx, scenario, z, tol, block.distance_points))

        # interference seen through the nearest tier-1 LoS UAV at 1.5 altitudes
        tier = scenario.tiers[0]
        r = 1.5 * tier.altitude_m
        gamma_1 = gamma if np.ndim(gamma) == 0 else gamma[0]
        s = mu_threshold(scenario.channel, tier, LinkClass.LOS, r, gamma_1)
        (est,) = empirical_interference_laplace(
            scenario, ctx.sim, 0, LinkClass.LOS, r, z, [s], threads=ctx.threads
        )
        value = interference_laplace(scenario, 0, LinkClass.LOS, s, r, z, ctx.quad)
        rows.append(_check("interference_laplace[tier=1,los]", z, value, est, tol))

    frame = pd.DataFrame(rows)
    failed = int((~frame["pass"]).sum())
    logger.info("validation: %d of %d checks passed", len(frame) - failed, len(frame))
    provenance = {**ctx.analytic_provenance(), **ctx.mc_provenance()}
    provenance["engine"] = "analytic+monte_carlo"
    provenance["failed"] = failed
    return frame, provenance


def cmd_optimize(ctx: RunContext) -> Outcome:
    block = ctx.config.block("optimize")
    problem = block.to_problem(ctx.scenario, ctx.quad)
    result: Optional[OptResult] = None
    frame = pd.DataFrame()
    with track_convergence() as log:
        if "grid" in block.search:
            result = grid_search(problem, threads=ctx.threads)
            frame = result.to_frame()
        if "alternate" in block.search:
            start = result.best_betas if result is not None else block.start
            refined = alternate_maximization(problem, block.max_rounds, start)
            if result is None:
                frame = refined.to_frame()
            result = refined
    assert result is not None
    provenance = ctx.analytic_provenance()
    provenance.update(
        search=block.search,
        best_betas=list(result.best_betas),
        best_value=result.best_value,
        evaluations=result.evaluations,
        converged=log.converged,
    )
    logger.info("best %.6f at betas %s", result.best_value, result.best_betas)
    return frame, provenance


def _search_fixture(ctx: RunContext, fixture: Fixture) -> Outcome:
    setup = fixture.problem
    if setup is None:
        raise ConfigError(f"fixture {fixture.name!r} stores no optimization setup")
    if setup.scenario is not None:
        targets = [("optimum", setup.scenario, setup.expected)]
    else:
        wanted = ctx.config.table.rows or tuple(r.name for r in fixture.rows)
        targets = [
            (name, fixture.row(name).scenario, fixture.row(name).expected)
            for name in wanted
        ]
    rows = []
    for name, scenario, expected in targets:
        problem = setup.to_problem(fixture.gamma, scenario)
        with track_convergence() as log:
            if problem.beta_grid is not None:
                result = grid_search(problem, threads=ctx.threads)
            else:
                result = alternate_maximization(problem, setup.max_rounds)
        logger.info("%s: %.6f at betas %s", name, result.best_value, result.best_betas)
        gap = math.nan if expected is None else abs(result.best_value - expected)
        row = {
            "fixture": fixture.name,
            "row": name,
            "expected": expected,
            "computed": result.best_value,
            "gap": gap,
            "pass": expected is None or bool(gap <= fixture.tolerance),
            "converged": log.converged,
        }
        row.update((f"beta_{k + 1}", b) for k, b in enumerate(result.best_betas))
        rows.append(row)
    provenance = ctx.analytic_provenance()
    provenance.update(fixture=fixture.name, search="optimize")
    return pd.DataFrame(rows), provenance


def cmd_fixtures(ctx: RunContext) -> Outcome:
    """List the shipped fixtures, or regress one against its published values."""
    table = ctx.config.table
    if table is None:
        rows = [
            {"fixture": name, "row": row.name, "expected": row.expected}
            for name in available()
            for row in load_fixture(name).rows
        ]
        return pd.DataFrame(rows), {"engine": "none"}
    fixture = load_fixture(table.fixture)
    if table.optimize:
        return _search_fixture(ctx, fixture)
    wanted = table.rows or tuple(r.name for r in fixture.rows)
    rows = []
    for name in wanted:
        row = fixture.row(name)
        with track_convergence() as log:
            value = overall_coverage(
                row.scenario,
                fixture.gamma,
                ctx.method_for(table.method),
                nodes=table.nodes,
                spec=ctx.quad,
                threads=ctx.threads,
            )
        gap = abs(value - row.expected)
        rows.append(
            {
                "fixture": fixture.name,
                "row": name,
                "expected": row.expected,
                "computed": value,
                "gap": gap,
                "pass": bool(gap <= fixture.tolerance),
                "converged": log.converged,
            }
        )
    provenance = ctx.analytic_provenance()
    provenance["fixture"] = fixture.name
    return pd.DataFrame(rows), provenance


COMMANDS = {
    "local-curve": cmd_local_curve,
    "overall": cmd_overall,
    "validate": cmd_validate,
    "optimize": cmd_optimize,
    "fixtures": cmd_fixtures,
}
