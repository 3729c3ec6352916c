import numpy as np
import pytest

from aerocov.analytic import overall_coverage
from aerocov.fixtures import available, fixture_scenario, load_fixture
from aerocov.optimize import alternate_maximization, grid_search
from aerocov.simulate import estimate_overall_coverage
from aerocov.models import SimConfig


def test_fixtures_load():
    assert available() == ["fig3", "table2", "table3"]
    for name in available():
        fixture = load_fixture(name)
        assert fixture.rows
        assert 0 < fixture.gamma < 1


def test_fixture_scenario():
    scenario = fixture_scenario("table3/k5")
    assert [t.altitude_m for t in scenario.tiers] == [50, 75, 100, 125, 150]
    uniform = fixture_scenario("table2/uniform")
    assert uniform.region_radius_m is not None
    with pytest.raises(KeyError):
        fixture_scenario("table2/k9")
    with pytest.raises(ValueError):
        fixture_scenario("table2")


def test_stored_problems():
    fig3 = load_fixture("fig3")
    problem = fig3.problem.to_problem(fig3.gamma)
    assert len(problem.beta_grid[0]) == len(problem.beta_grid[1]) == 8
    sliced = fig3.problem.to_problem(fig3.gamma, sliced=True)
    assert sliced.beta_grid[1] == (1e-2,)
    assert sliced.beta_grid[0] == problem.beta_grid[0]

    table3 = load_fixture("table3")
    with pytest.raises(ValueError, match="fixture row"):
        table3.problem.to_problem(table3.gamma)
    problem = table3.problem.to_problem(table3.gamma, table3.row("k3").scenario)
    assert problem.floor is None and problem.beta_grid is None
    assert problem.n_max == 25
    with pytest.raises(ValueError, match="sweep"):
        table3.problem.to_problem(table3.gamma, problem.scenario, sliced=True)


@pytest.mark.slow
@pytest.mark.parametrize("name", ["table2", "table3", "fig3"])
def test_published_overall_coverage(name):
    fixture = load_fixture(name)
    values = {}
    for row in fixture.rows:
        values[row.name] = overall_coverage(row.scenario, fixture.gamma, threads=4)
        assert abs(values[row.name] - row.expected) <= fixture.tolerance, row.name
    if name == "table2":
        order = ["uniform", "one_tier_50", "one_tier_100", "one_tier_150"]
        ranked = [values[r] for r in order + ["three_tier"]]
        assert all(a < b for a, b in zip(ranked, ranked[1:])), values


@pytest.mark.slow
def test_more_tiers_do_not_hurt():
    fixture = load_fixture("table3")
    values = [
        overall_coverage(r.scenario, fixture.gamma, threads=4) for r in fixture.rows
    ]
    assert all(b >= a - 0.01 for a, b in zip(values, values[1:]))


@pytest.mark.slow
def test_alternate_maximization_reproduces_tuned_tiers():
    fixture = load_fixture("table3")
    setup = fixture.problem
    values = []
    for row in fixture.rows:
        problem = setup.to_problem(fixture.gamma, row.scenario)
        result = alternate_maximization(problem, setup.max_rounds)
        printed = np.array([t.beta for t in row.scenario.tiers])
        np.testing.assert_allclose(result.best_betas, printed, rtol=0.5)
        values.append(result.best_value)
        if row.name == "k3":
            assert abs(result.best_value - row.expected) <= 0.03
    assert all(b >= a - 1e-3 for a, b in zip(values, values[1:])), values


@pytest.mark.slow
def test_uniform_baseline_by_simulation():
    fixture = load_fixture("table2")
    row = fixture.row("uniform")
    sim = SimConfig(seed=21, trials=20_000)
    est = estimate_overall_coverage(row.scenario, sim, fixture.gamma, threads=4)
    assert abs(est.mean - row.expected) <= fixture.tolerance


@pytest.mark.slow
def test_two_tier_grid_beats_uniform():
    fixture = load_fixture("fig3")
    setup = fixture.problem
    uniform = overall_coverage(fixture.row("uniform").scenario, fixture.gamma)
    result = grid_search(setup.to_problem(fixture.gamma), threads=4)
    assert result.best_value > uniform
    assert abs(result.best_value - setup.expected) <= 0.07
    reason = result.feasibility["reason"]
    low, high = min(setup.beta_grid[0]), max(setup.beta_grid[0])
    assert reason.sel(beta_1=low, beta_2=low).item() == "count_cap"
    assert reason.sel(beta_1=high, beta_2=high).item() == "floor_violation"
    best = np.array(result.best_betas)
    assert np.all((best > low) & (best < high))


@pytest.mark.slow
def test_beta_1_sweep_rises_then_falls():
    fixture = load_fixture("fig3")
    problem = fixture.problem.to_problem(fixture.gamma, sliced=True)
    result = grid_search(problem, threads=4)
    curve = result.feasibility["objective"].squeeze("beta_2", drop=True)
    feasible = curve.dropna("beta_1").values
    assert feasible.size >= 3
    peak = int(np.argmax(feasible))
    assert 0 < peak < feasible.size - 1
    assert feasible[0] < feasible[peak] > feasible[-1]
