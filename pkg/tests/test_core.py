import math

import numpy as np
import pytest

from aerocov.core import (
    dbm_to_watts,
    db_to_linear,
    exclusion_distance,
    expected_uav_count,
    gamma_gain_laplace,
    half_angle,
    horizontal_exclusion,
    linear_to_db,
    los_probability,
    mass_radius,
    uav_density,
    user_density,
    user_to_uav_distance,
)
from aerocov.models import ChannelParams, LinkClass, TierConfig, UserDensity

LOS, NLOS = LinkClass.LOS, LinkClass.NLOS


def _tier(h=100.0, lam=4e-5, beta=3.2e-3, power_w=1e-3):
    return TierConfig(altitude_m=h, lam=lam, beta=beta, power_w=power_w)


def test_user_density():
    users = UserDensity(lambda_u=1e-3, beta_u=5e-3)
    assert user_density(users, 0) == 1e-3
    np.testing.assert_allclose(user_density(users, 1000), 6.7379e-6, rtol=1e-4)
    flat = UserDensity(lambda_u=1e-3, beta_u=0)
    assert user_density(flat, 1e4) == 1e-3
    with pytest.raises(ValueError):
        user_density(users, -1)


def test_uav_density():
    assert uav_density(_tier(beta=0), 999) == 4e-5
    assert uav_density(_tier(), 0) == 4e-5
    np.testing.assert_allclose(uav_density(_tier(), 1000), 1.6304e-6, rtol=1e-4)


def test_expected_uav_count():
    np.testing.assert_allclose(expected_uav_count(_tier()), 24.54, rtol=1e-3)
    assert expected_uav_count(_tier(), 0.0) == 0.0
    uniform = _tier(lam=1e-6, beta=0)
    np.testing.assert_allclose(expected_uav_count(uniform, 2820.9), 25.0, rtol=1e-3)
    with pytest.raises(ValueError, match="diverges"):
        expected_uav_count(uniform)


def test_expected_count_truncated_matches_quadrature():
    from scipy import integrate

    tier = _tier()
    direct, _ = integrate.quad(
        lambda z: 2 * math.pi * z * 4e-5 * math.exp(-3.2e-3 * z), 0, 800
    )
    np.testing.assert_allclose(expected_uav_count(tier, 800), direct, rtol=1e-9)


def test_mass_radius():
    r = mass_radius(3.2e-3, 0.5)
    half = expected_uav_count(_tier(), r) / expected_uav_count(_tier())
    np.testing.assert_allclose(half, 0.5)
    with pytest.raises(ValueError):
        mass_radius(0, 0.5)


def test_los_probability():
    channel = ChannelParams()
    assert abs(los_probability(channel, 100, 0) - 1) < 1e-15
    np.testing.assert_allclose(los_probability(channel, 100, 1000), 0.2264, atol=1e-4)
    fixed = ChannelParams(fixed_los_probability=0.3)
    np.testing.assert_allclose(los_probability(fixed, 100, [0, 500]), [0.3, 0.3])


def test_los_probability_decreases_with_distance():
    p = los_probability(ChannelParams(), 100, np.linspace(0, 5000, 50))
    assert np.all(np.diff(p) < 0)


def test_user_to_uav_distance():
    assert user_to_uav_distance(0, 0, 1.3, 100) == 100
    np.testing.assert_allclose(user_to_uav_distance(300, 300, 0, 50), 50)
    np.testing.assert_allclose(
        user_to_uav_distance(100, 200, math.pi / 2, 100), 244.949, rtol=1e-5
    )
    with pytest.raises(ValueError):
        user_to_uav_distance(-1, 0, 0, 100)


def test_half_angle():
    # whole circle inside the disc around a centred user
    assert half_angle(0, 50, 100) == math.pi
    assert half_angle(0, 150, 100) == 0
    # circle of radius l through the user's disc edge
    np.testing.assert_allclose(half_angle(100, 100, 100), math.pi / 3)
    assert half_angle(500, 100, 100) == 0
    assert half_angle(50, 20, 100) == math.pi


def test_exclusion_distance():
    channel = ChannelParams()
    same = _tier()
    assert exclusion_distance(channel, LOS, LOS, same, same, 500) == 500
    np.testing.assert_allclose(
        exclusion_distance(channel, LOS, NLOS, same, same, 1000), 100
    )
    j = _tier(h=50, power_w=1e-3)
    k = _tier(h=50, power_w=8e-3)
    np.testing.assert_allclose(exclusion_distance(channel, NLOS, NLOS, j, k, 200), 400)
    with pytest.raises(ValueError):
        exclusion_distance(channel, LOS, LOS, same, same, 50)


def test_horizontal_exclusion():
    channel = ChannelParams()
    tier = _tier()
    assert horizontal_exclusion(channel, LOS, LOS, tier, tier, 100) == 0
    np.testing.assert_allclose(
        horizontal_exclusion(channel, LOS, LOS, tier, tier, 500), 489.898, rtol=1e-6
    )


def test_gamma_gain_laplace():
    assert gamma_gain_laplace(1, 1) == 0.5
    assert gamma_gain_laplace(3, 0) == 1
    np.testing.assert_allclose(gamma_gain_laplace(2, 2), 0.25)
    with pytest.raises(ValueError):
        gamma_gain_laplace(0, 1)


def test_unit_conversions():
    np.testing.assert_allclose(dbm_to_watts(0), 1e-3)
    np.testing.assert_allclose(dbm_to_watts(12), 0.015849, rtol=1e-4)
    assert db_to_linear(0) == 1.0
    np.testing.assert_allclose(linear_to_db(db_to_linear(-15)), -15)
