import numpy as np
import pytest

from aerocov.analytic import (
    energy_efficiency_threshold,
    energy_efficiency_thresholds,
    rate_threshold,
)


def test_rate_threshold():
    assert rate_threshold(1e6, 1e6) == pytest.approx(1.0)
    assert rate_threshold(0, 1e6) == 0
    assert rate_threshold(3e6, 1e6) == pytest.approx(7.0)
    with pytest.raises(ValueError):
        rate_threshold(1e6, 0)
    with pytest.raises(ValueError):
        rate_threshold(-1, 1e6)


def test_energy_efficiency_threshold():
    assert energy_efficiency_threshold(0, 0.01, 1e6) == 0
    assert energy_efficiency_threshold(1e8, 0.01, 1e6) == pytest.approx(1.0)
    assert energy_efficiency_threshold(2e8, 0.01, 1e6) == pytest.approx(3.0)
    with pytest.raises(ValueError):
        energy_efficiency_threshold(1e8, 0, 1e6)


def test_energy_efficiency_per_tier(three_tier):
    gammas = energy_efficiency_thresholds(three_tier, 1e8, 1e6)
    assert len(gammas) == 3
    # the stronger transmitter must clear a higher SINR for the same bits per joule
    assert np.all(np.diff(gammas) > 0)
