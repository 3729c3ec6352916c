from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, Optional, Tuple, Union

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator
from typing_extensions import Literal

from ..analytic import energy_efficiency_thresholds, rate_threshold
from ..fixtures import fixture_scenario
from ..models import OptProblem, QuadSpec, Scenario, SimConfig
from ..util import db_to_linear

FIXTURE_PREFIX = "fixture:"


class ConfigError(ValueError):
    """The experiment file is valid JSON but cannot drive the requested command."""


class _Block(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")


class ThresholdSpec(_Block):
    """An SINR threshold given directly or through a rate/efficiency target.

    Exactly one of ``gamma_db``, ``gamma``, ``rate_bps`` or ``bits_per_joule``
    must be set; the last two also need ``bandwidth_hz``.
    """

    gamma_db: Optional[float] = None
    gamma: Optional[float] = Field(None, ge=0, description="linear threshold")
    rate_bps: Optional[float] = Field(None, ge=0)
    bits_per_joule: Optional[float] = Field(None, ge=0)
    bandwidth_hz: Optional[float] = Field(None, gt=0)

    @model_validator(mode="after")
    def _one_kind(self) -> ThresholdSpec:
        given = [
            k
            for k in ("gamma_db", "gamma", "rate_bps", "bits_per_joule")
            if getattr(self, k) is not None
        ]
        if len(given) != 1:
            raise ValueError(
                "set exactly one of gamma_db, gamma, rate_bps, bits_per_joule "
                f"(got {given or 'none'})"
            )
        needs_band = given[0] in ("rate_bps", "bits_per_joule")
        if needs_band and self.bandwidth_hz is None:
            raise ValueError(f"{given[0]} needs bandwidth_hz")
        return self

    def resolve(self, scenario: Scenario) -> Union[float, Tuple[float, ...]]:
        if self.gamma is not None:
            return self.gamma
        if self.gamma_db is not None:
            return float(db_to_linear(self.gamma_db))
        if self.rate_bps is not None:
            return rate_threshold(self.rate_bps, self.bandwidth_hz)  # type: ignore
        return energy_efficiency_thresholds(
            scenario, self.bits_per_joule, self.bandwidth_hz  # type: ignore
        )


DEFAULT_THRESHOLD = ThresholdSpec(gamma_db=-15.0)


class LocalCurveBlock(_Block):
    z_values: Optional[Tuple[float, ...]] = Field(
        None, description="user offsets in m; default 0..z_max step z_step"
    )
    z_max: float = Field(2500.0, ge=0)
    z_step: float = Field(250.0, gt=0)
    thresholds: Tuple[ThresholdSpec, ...] = (DEFAULT_THRESHOLD,)
    method: Literal["approx", "exact", "mc"] = "approx"
    mc_trials: int = Field(0, ge=0, description="Monte-Carlo overlay; 0 disables")

    @field_validator("z_values")
    @classmethod
    def _nonempty(cls, v):
        if v is not None:
            if not v:
                raise ValueError("z_values must not be empty")
            if min(v) < 0:
                raise ValueError("user offsets must be nonnegative")
        return v

    def z_points(self) -> Tuple[float, ...]:
        if self.z_values is not None:
            return self.z_values
        n = int(np.floor(self.z_max / self.z_step + 1e-9)) + 1
        return tuple(float(z) for z in np.arange(n) * self.z_step)


class OverallBlock(_Block):
    threshold: ThresholdSpec = DEFAULT_THRESHOLD
    method: Literal["approx", "exact", "mc"] = "approx"
    nodes: Optional[int] = Field(16, ge=2, description="None selects adaptive")


class ValidateBlock(_Block):
    z_points: Tuple[float, ...] = (0.0, 1000.0)
    threshold: ThresholdSpec = DEFAULT_THRESHOLD
    tolerance: float = Field(0.03, gt=0, description="allowed analytic-MC gap")
    distance_points: int = Field(
        24, ge=2, description="radii of the tagged-distance sup-gap check"
    )


class OptimizeBlock(_Block):
    gamma1_db: float = -8.0
    gamma2_db: float = -20.0
    floor: Optional[float] = Field(0.95, gt=0, lt=1)
    n_max: float = Field(1000.0, gt=0)
    z_grid: Optional[Tuple[float, ...]] = None
    beta_grid: Optional[Tuple[Tuple[float, ...], ...]] = None
    fix: Dict[int, float] = Field(
        default_factory=dict,
        description="1-based tier -> beta held fixed (single-value grid axis)",
    )
    lambda_mode: Literal["fixed", "rescale"] = "fixed"
    search: Literal["grid", "alternate", "grid+alternate"] = "grid"
    max_rounds: int = Field(10, ge=1)
    start: Optional[Tuple[float, ...]] = None
    method: Literal["approx", "exact"] = "approx"
    nodes: int = Field(16, ge=2)
    step_factor: float = Field(0.85, gt=0, lt=1)
    max_steps: int = Field(20, ge=1)
    beta_min: float = Field(1e-5, gt=0)
    beta_max: float = Field(0.1, gt=0)

    def to_problem(self, scenario: Scenario, quad: Optional[QuadSpec]) -> OptProblem:
        grid = self.beta_grid
        if self.fix:
            bad = [k for k in self.fix if not 1 <= k <= scenario.n_tiers]
            if bad:
                raise ConfigError(
                    f"fix names tiers {bad} outside 1..{scenario.n_tiers}"
                )
            if grid is None:
                raise ConfigError("'fix' needs a beta_grid for the free tiers")
            grid = tuple(
                (self.fix[k + 1],) if k + 1 in self.fix else axis
                for k, axis in enumerate(grid)
            )
        fields = dict(
            scenario=scenario,
            gamma1=float(db_to_linear(self.gamma1_db)),
            gamma2=float(db_to_linear(self.gamma2_db)),
            floor=self.floor,
            n_max=self.n_max,
            z_grid=self.z_grid,
            beta_grid=grid,
            lambda_mode=self.lambda_mode,
            method=self.method,
            nodes=self.nodes,
            step_factor=self.step_factor,
            max_steps=self.max_steps,
            beta_min=self.beta_min,
            beta_max=self.beta_max,
        )
        if quad is not None:
            fields["quad"] = quad
        return OptProblem(**fields)


class TableBlock(_Block):
    fixture: Literal["table2", "table3", "fig3"]
    rows: Optional[Tuple[str, ...]] = None
    method: Literal["approx", "exact"] = "approx"
    nodes: int = Field(16, ge=2)
    optimize: bool = Field(
        False, description="search the decay rates with the stored setup"
    )


class ExperimentConfig(_Block):
    """One experiment file: a scenario and the blocks of the commands to run.

    ``scenario`` is inline, a path to a scenario JSON file (relative to the
    experiment file), or ``"fixture:<name>/<row>"``.
    """

    scenario: Optional[Union[Scenario, str]] = None
    quad: Optional[QuadSpec] = None
    sim: SimConfig = SimConfig()
    local_curve: Optional[LocalCurveBlock] = None
    overall: Optional[OverallBlock] = None
    validate_: Optional[ValidateBlock] = Field(None, alias="validate")
    optimize: Optional[OptimizeBlock] = None
    table: Optional[TableBlock] = None

    model_config = ConfigDict(frozen=True, extra="forbid", populate_by_name=True)

    def resolve_scenario(self, base_dir: Path = Path(".")) -> Scenario:
        if self.scenario is None:
            raise ConfigError("this command needs a 'scenario'")
        if isinstance(self.scenario, Scenario):
            return self.scenario
        if self.scenario.startswith(FIXTURE_PREFIX):
            try:
                return fixture_scenario(self.scenario[len(FIXTURE_PREFIX) :])
            except (KeyError, ValueError) as e:
                raise ConfigError(e.args[0]) from None
        path = Path(self.scenario)
        if not path.is_absolute():
            path = base_dir / path
        with open(path) as fh:
            return Scenario.model_validate(json.load(fh))

    def block(self, name: str):
        """The named command block, defaulted when the file omits it."""
        value = getattr(self, "validate_" if name == "validate" else name)
        if value is not None:
            return value
        if name not in _DEFAULT_BLOCKS:
            raise ConfigError(f"config has no {name!r} block")
        return _DEFAULT_BLOCKS[name]()


_DEFAULT_BLOCKS = {
    "local_curve": LocalCurveBlock,
    "overall": OverallBlock,
    "validate": ValidateBlock,
    "optimize": OptimizeBlock,
}
