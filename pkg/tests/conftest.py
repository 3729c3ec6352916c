import pytest

from aerocov.models import ChannelParams, Scenario, SimConfig, TierConfig, UserDensity


def pytest_addoption(parser):
    parser.addoption(
        "--runslow", action="store_true", default=False, help="run slow tests"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def one_tier() -> Scenario:
    tier = TierConfig(altitude_m=100, lam=4e-5, beta=3.2e-3, power_dbm=7)
    return Scenario(tiers=(tier,))


@pytest.fixture
def three_tier() -> Scenario:
    tiers = (
        TierConfig(altitude_m=50, lam=4e-5, beta=4.5e-3, power_dbm=2),
        TierConfig(altitude_m=100, lam=4e-5, beta=5.8e-3, power_dbm=7),
        TierConfig(altitude_m=150, lam=4e-5, beta=7.6e-3, power_dbm=12),
    )
    return Scenario(users=UserDensity(lambda_u=1e-3, beta_u=5e-3), tiers=tiers)


@pytest.fixture
def always_los() -> ChannelParams:
    return ChannelParams(fixed_los_probability=1.0)


@pytest.fixture
def small_sim() -> SimConfig:
    return SimConfig(seed=7, trials=400, chunk_size=100)
