"""Reference scenarios with published overall-coverage values."""
from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path
from typing import List, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field

from ..models import OptProblem, Scenario
from ..util import db_to_linear

FIXTURE_DIR = Path(__file__).parent


class FixtureRow(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    expected: float = Field(..., ge=0, le=1)
    scenario: Scenario


class FixtureProblem(BaseModel):
    """Optimization setup stored with a fixture.

    With a ``scenario`` the setup is one search whose best value is
    ``expected``. Without one, each fixture row is searched from its own
    scenario and compared with the row's value.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    scenario: Optional[Scenario] = None
    gamma2_db: float = -20.0
    floor: Optional[float] = Field(0.95, gt=0, lt=1)
    n_max: float = Field(..., gt=0)
    beta_grid: Optional[Tuple[Tuple[float, ...], ...]] = None
    slice_beta_2: Optional[float] = Field(
        None, description="beta_2 of the one-dimensional sweep over beta_1"
    )
    expected: Optional[float] = None
    max_rounds: int = Field(5, ge=1)

    def to_problem(
        self, gamma1: float, scenario: Optional[Scenario] = None, *, sliced=False
    ) -> OptProblem:
        scenario = scenario or self.scenario
        if scenario is None:
            raise ValueError("this setup takes its scenario from a fixture row")
        grid = self.beta_grid
        if sliced:
            if grid is None or self.slice_beta_2 is None:
                raise ValueError("this setup has no beta_1 sweep")
            grid = (grid[0], (self.slice_beta_2,))
        return OptProblem(
            scenario=scenario,
            gamma1=gamma1,
            gamma2=float(db_to_linear(self.gamma2_db)),
            floor=self.floor,
            n_max=self.n_max,
            beta_grid=grid,
        )


class Fixture(BaseModel):
    model_config = ConfigDict(frozen=True, extra="forbid")

    name: str
    description: str = ""
    gamma_db: float
    tolerance: float = Field(0.05, gt=0)
    problem: Optional[FixtureProblem] = None
    rows: Tuple[FixtureRow, ...]

    @property
    def gamma(self) -> float:
        return float(db_to_linear(self.gamma_db))

    def row(self, name: str) -> FixtureRow:
        for row in self.rows:
            if row.name == name:
                return row
        names = ", ".join(r.name for r in self.rows)
        raise KeyError(f"fixture {self.name!r} has no row {name!r} (have: {names})")


def available() -> List[str]:
    return sorted(p.stem for p in FIXTURE_DIR.glob("*.json"))


@lru_cache(maxsize=None)
def load_fixture(name: str) -> Fixture:
    path = FIXTURE_DIR / f"{name}.json"
    if not path.exists():
        raise KeyError(f"unknown fixture {name!r} (have: {', '.join(available())})")
    with open(path) as fh:
        return Fixture.model_validate(json.load(fh))


def fixture_scenario(ref: str) -> Scenario:
    """Resolve ``"<fixture>/<row>"`` to that row's scenario."""
    name, sep, row = ref.partition("/")
    if not sep:
        raise ValueError(
            f"fixture reference must look like 'table2/three_tier': {ref!r}"
        )
    return load_fixture(name).row(row).scenario


__all__ = [
    "Fixture",
    "FixtureProblem",
    "FixtureRow",
    "available",
    "fixture_scenario",
    "load_fixture",
]
