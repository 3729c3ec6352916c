import math

import numpy as np
import pytest

from aerocov.analytic import (
    exp_derivatives,
    interference_laplace,
    laplace_derivatives,
    mu_threshold,
    signal_laplace,
    w_derivatives,
)
from aerocov.models import LinkClass, QuadSpec
from aerocov.quad import MAX_ORDER, nth_derivative

LOS, NLOS = LinkClass.LOS, LinkClass.NLOS


@pytest.mark.parametrize("s0", [1e5, 2e6])
def test_w_derivatives_match_numeric(s0):
    c = np.array([1e-6, 3e-7])
    out = w_derivatives(2, c, np.array([s0]), MAX_ORDER)
    assert out.shape == (2, 1, MAX_ORDER + 1)
    for i, ci in enumerate(c):

        def w(s, ci=ci):
            return -np.expm1(-2 * np.log1p(s * ci / 2))

        np.testing.assert_allclose(out[i, 0, 0], w(s0))
        for n in range(1, MAX_ORDER + 1):
            np.testing.assert_allclose(
                out[i, 0, n], nth_derivative(w, s0, n), rtol=1e-5
            )


def test_w_at_zero_is_zero():
    out = w_derivatives(3, np.array([1e-3]), np.array([0.0]), 1)
    assert out[0, 0, 0] == 0
    np.testing.assert_allclose(out[0, 0, 1], 1e-3)


def test_exp_derivatives():
    # exp(-2s) at s = 0
    derivs = exp_derivatives(np.array([0.0, -2, 0, 0]))
    np.testing.assert_allclose(derivs, [1, -2, 4, -8])
    # exp(s²) at s = 0: 1, 0, 2, 0, 12
    np.testing.assert_allclose(
        exp_derivatives(np.array([0.0, 0, 2, 0, 0])), [1, 0, 2, 0, 12]
    )


def test_interference_laplace_at_zero(three_tier):
    assert interference_laplace(three_tier, 0, LOS, 0.0, 150.0) == 1.0
    with pytest.raises(ValueError):
        interference_laplace(three_tier, 0, LOS, -1.0, 150.0)


def test_interference_laplace_decreases(three_tier):
    spec = QuadSpec(rel_tol=1e-5)
    values = [
        interference_laplace(three_tier, 0, LOS, s, 150.0, 0.0, spec)
        for s in (1e5, 1e6, 1e7)
    ]
    assert all(0 < v <= 1 for v in values)
    assert values[0] > values[1] > values[2]


def test_signal_laplace_includes_noise(one_tier):
    s = 1e6
    lap = interference_laplace(one_tier, 0, NLOS, s, 300.0, 200.0)
    sig = signal_laplace(one_tier, 0, NLOS, s, 300.0, 200.0)
    np.testing.assert_allclose(sig, lap * math.exp(-one_tier.channel.noise_w * s))


def test_laplace_derivatives_match_numeric(one_tier):
    spec = QuadSpec(rel_tol=1e-9, abs_tol=1e-14)
    r, z_u = 200.0, 300.0
    mu = mu_threshold(one_tier.channel, one_tier.tiers[0], LOS, r, 10**-1.5)
    analytic = laplace_derivatives(one_tier, 0, LOS, mu, r, z_u, 1, spec)

    def lap(s):
        return signal_laplace(one_tier, 0, LOS, s, r, z_u, spec)

    np.testing.assert_allclose(analytic[0], lap(mu))
    np.testing.assert_allclose(analytic[1], nth_derivative(lap, mu, 1), rtol=1e-4)
    assert analytic[1] < 0
