import math

import numpy as np
import pytest
from scipy import special, stats

from aerocov.analytic import (
    association_frequency,
    interference_laplace,
    local_coverage,
    mu_threshold,
    tagged_cdf,
)
from aerocov.core import expected_uav_count
from aerocov.models import ChannelParams, LinkClass, Scenario, SimConfig, TierConfig
from aerocov.simulate import (
    Association,
    Deployment,
    McEstimate,
    associate,
    association_frequencies,
    classify_links,
    deploy,
    empirical_cdf,
    empirical_interference_laplace,
    empirical_tagged_distance,
    estimate_local_coverage,
    estimate_overall_coverage,
    realize_sinr,
    resolve_sim_radius,
    sample_gain,
    sample_tier,
    sample_users,
)
from aerocov.util import db_to_linear

LOS, NLOS = LinkClass.LOS, LinkClass.NLOS
GAMMA = float(db_to_linear(-15))


def _deployment(l, tier, los, altitude=100.0, power=1e-3):
    n = len(l)
    return Deployment(
        tier=np.asarray(tier),
        l=np.asarray(l, dtype=float),
        theta=np.zeros(n),
        altitude=np.full(n, altitude),
        power=np.full(n, power),
        los=np.asarray(los, dtype=bool),
    )


def test_sample_tier_mean_count():
    tier = TierConfig(altitude_m=100, lam=4e-5, beta=3.2e-3, power_dbm=7)
    rng = np.random.default_rng(1)
    counts = [len(sample_tier(tier, 5000.0, rng)) for _ in range(4000)]
    np.testing.assert_allclose(np.mean(counts), 24.54, atol=0.5)


def test_sample_tier_uniform_count():
    tier = TierConfig(altitude_m=100, lam=1e-6, power_dbm=7)
    rng = np.random.default_rng(2)
    counts = [len(sample_tier(tier, 2820.9, rng, "thinning")) for _ in range(4000)]
    np.testing.assert_allclose(np.mean(counts), 25.0, atol=0.5)


def test_sample_tier_empty_and_bounds():
    rng = np.random.default_rng(3)
    empty = TierConfig(altitude_m=100, lam=0, power_dbm=7)
    assert sample_tier(empty, 1000.0, rng).shape == (0, 2)
    tier = TierConfig(altitude_m=100, lam=4e-5, beta=3.2e-3, power_dbm=7)
    points = sample_tier(tier, 800.0, rng)
    assert np.all(points[:, 0] <= 800.0)
    assert np.all((points[:, 1] >= 0) & (points[:, 1] < 2 * math.pi))
    with pytest.raises(ValueError):
        sample_tier(tier, 800.0, rng, "rejection")


@pytest.mark.parametrize("sampler", ["inverse_cdf", "thinning"])
def test_annulus_intensity(sampler):
    tier = TierConfig(altitude_m=100, lam=4e-5, beta=3.2e-3, power_dbm=7)
    radius, draws = 1500.0, 3000
    edges = np.linspace(0, radius, 6)
    rng = np.random.default_rng(4)
    hist = np.zeros(5)
    for _ in range(draws):
        hist += np.histogram(sample_tier(tier, radius, rng, sampler)[:, 0], edges)[0]
    cumulative = np.array([expected_uav_count(tier, r) for r in edges])
    np.testing.assert_allclose(hist / draws, np.diff(cumulative), rtol=0.05)


def test_samplers_agree():
    tier = TierConfig(altitude_m=100, lam=4e-5, beta=3.2e-3, power_dbm=7)
    edges = np.linspace(0, 1500.0, 11)
    rng = np.random.default_rng(5)
    hists = []
    for sampler in ("inverse_cdf", "thinning"):
        h = np.zeros(10)
        for _ in range(2000):
            h += np.histogram(sample_tier(tier, 1500.0, rng, sampler)[:, 0], edges)[0]
        hists.append(h)
    _, p, _, _ = stats.chi2_contingency(np.array(hists))
    assert p > 0.001


def test_sim_radius():
    tier = TierConfig(altitude_m=100, lam=4e-5, beta=3.2e-3, power_dbm=7)
    scenario = Scenario(tiers=(tier,))
    radius = resolve_sim_radius(scenario, SimConfig(tail_mass_tol=1e-4))
    np.testing.assert_allclose(special.gammaincc(2, 3.2e-3 * radius), 1e-4)
    with pytest.raises(ValueError, match="outside"):
        resolve_sim_radius(scenario, SimConfig(sim_radius_m=500.0))
    bounded = scenario.model_copy(update={"region_radius_m": 2000.0})
    assert resolve_sim_radius(bounded, SimConfig()) == 2000.0


def test_sim_radius_cap():
    tier = TierConfig(altitude_m=100, lam=1e-9, beta=1e-5, power_dbm=7)
    scenario = Scenario(tiers=(tier,))
    assert resolve_sim_radius(scenario, SimConfig()) == 50_000.0


def test_homogeneous_sim_needs_region():
    tier = TierConfig(altitude_m=100, lam=1e-6, power_dbm=7)
    with pytest.raises(ValueError, match="homogeneous"):
        resolve_sim_radius(Scenario(tiers=(tier,)), SimConfig())


def test_deploy_flattens_tiers(three_tier):
    d = deploy(three_tier, SimConfig(), np.random.default_rng(6))
    assert d.size == len(d.tier) == len(d.altitude)
    assert set(np.unique(d.tier)) <= {0, 1, 2}
    np.testing.assert_array_equal(d.altitude, np.array([50, 100, 150])[d.tier])
    assert d.los is None


def test_classify_links():
    rng = np.random.default_rng(7)
    overhead = _deployment(np.zeros(10_000), np.zeros(10_000, int), np.zeros(10_000))
    assert classify_links(overhead, 0.0, ChannelParams(), rng).los.mean() > 0.999
    far = _deployment(np.full(10_000, 1000.0), np.zeros(10_000, int), np.zeros(10_000))
    freq = classify_links(far, 0.0, ChannelParams(), rng).los.mean()
    np.testing.assert_allclose(freq, 0.2264, atol=0.015)
    forced = classify_links(far, 0.0, ChannelParams(fixed_los_probability=1.0), rng)
    assert forced.los.all()


def test_sample_gain_moments():
    rng = np.random.default_rng(8)
    channel = ChannelParams()
    rayleigh = sample_gain(NLOS, channel, rng, 100_000)
    np.testing.assert_allclose(rayleigh.mean(), 1.0, atol=0.01)
    nakagami = sample_gain(LOS, channel, rng, 100_000)
    np.testing.assert_allclose(nakagami.var(), 0.5, atol=0.015)


def test_sample_users():
    rng = np.random.default_rng(9)
    from aerocov.models import UserDensity

    users = UserDensity(beta_u=5e-3)
    z = sample_users(users, 50_000, rng)
    np.testing.assert_allclose(z.mean(), 2 / 5e-3, rtol=0.02)
    bounded = sample_users(users, 1000, rng, region=300.0)
    assert bounded.max() <= 300.0
    flat = sample_users(UserDensity(beta_u=0), 1000, rng, region=300.0)
    assert flat.max() <= 300.0
    with pytest.raises(ValueError):
        sample_users(UserDensity(beta_u=0), 10, rng)


def test_associate_rules():
    channel = ChannelParams()
    assert associate(_deployment([], [], []), 0.0, channel) is None
    single = _deployment([300.0], [0], [False])
    chosen = associate(single, 0.0, channel)
    assert isinstance(chosen, Association)
    assert chosen[:3] == (0, 0, NLOS)
    np.testing.assert_allclose(chosen.distance, math.hypot(300, 100))
    nearer = _deployment([500.0, 200.0], [0, 0], [True, True])
    assert associate(nearer, 0.0, channel).index == 1
    # equal mean power at unit distance: LoS first, then the lower tier
    tie = _deployment([0.0, 0.0, 0.0], [2, 1, 0], [False, True, True], altitude=1.0)
    tie = tie._replace(power=np.array([1.0, 0.01, 0.01]))
    chosen = associate(tie, 0.0, channel)
    assert chosen.link is LOS and chosen.tier == 0


def test_realize_sinr():
    channel = ChannelParams(noise_w=1e-7)
    d = _deployment([0.0], [0], [True])
    assoc = associate(d, 0.0, channel)
    rng = np.random.default_rng(0)
    sinr = realize_sinr(d, assoc, 0.0, channel, rng, gains=np.ones(1))
    np.testing.assert_allclose(sinr, 1e-3 * 100.0**-2 / 1e-7)
    assert realize_sinr(d, None, 0.0, channel, rng) == 0.0
    noisy = ChannelParams(noise_w=1e6)
    assert 0 < realize_sinr(d, assoc, 0.0, noisy, rng) < 1e-9


def test_mc_estimate():
    est = McEstimate.from_bernoulli(90, 100, seed=1)
    assert est.mean == 0.9
    np.testing.assert_allclose(est.half_width_95, 1.96 * math.sqrt(0.09 / 100))
    lo, hi = est.interval
    assert lo < 0.9 < hi
    flat = McEstimate.from_samples([0.5, 0.5, 0.5], seed=1)
    assert flat.mean == 0.5 and flat.half_width_95 == 0


def test_empirical_cdf():
    samples = np.array([1.0, 2.0, math.inf, 3.0])
    assert empirical_cdf(samples, 0.5) == 0
    assert empirical_cdf(samples, 2.0) == 0.5
    np.testing.assert_array_equal(empirical_cdf(samples, [3.0, 1e9]), [0.75, 0.75])


def test_estimates_are_reproducible(one_tier, small_sim):
    a = estimate_local_coverage(one_tier, small_sim, 300.0, GAMMA)
    b = estimate_local_coverage(one_tier, small_sim, 300.0, GAMMA)
    assert a == b
    rechunked = small_sim.model_copy(update={"chunk_size": 37})
    c = estimate_local_coverage(one_tier, rechunked, 300.0, GAMMA)
    assert c.mean == a.mean


def test_estimates_do_not_depend_on_workers(one_tier, small_sim):
    serial = estimate_local_coverage(one_tier, small_sim, 0.0, GAMMA, threads=1)
    parallel = estimate_local_coverage(one_tier, small_sim, 0.0, GAMMA, threads=2)
    assert serial.mean == parallel.mean


def test_empty_network_is_never_covered(small_sim):
    tier = TierConfig(altitude_m=100, lam=1e-15, beta=1e-3, power_dbm=7)
    est = estimate_local_coverage(Scenario(tiers=(tier,)), small_sim, 0.0, GAMMA)
    assert est.mean == 0


def test_tiny_threshold_means_served(one_tier, small_sim):
    est = estimate_local_coverage(one_tier, small_sim, 0.0, 1e-12)
    assert est.mean == 1.0


def test_overall_with_constant_local(one_tier, small_sim):
    est = estimate_overall_coverage(one_tier, small_sim, GAMMA, local=_constant)
    assert est.mean == pytest.approx(0.42)
    assert est.half_width_95 == pytest.approx(0.0, abs=1e-12)


def _constant(z):
    return 0.42


def test_tagged_distance_below_altitude(one_tier, small_sim):
    samples = empirical_tagged_distance(one_tier, small_sim, 0, LOS)
    assert samples.shape == (small_sim.trials,)
    assert empirical_cdf(samples, 99.0) == 0


@pytest.mark.slow
def test_tagged_distance_against_analytic(three_tier):
    sim = SimConfig(seed=11, trials=100_000)
    samples = empirical_tagged_distance(three_tier, sim, 0, LOS, 0.0, threads=4)
    radii = np.linspace(60, 1500, 30)
    model = [tagged_cdf(three_tier, 0, LOS, r) for r in radii]
    assert np.max(np.abs(model - empirical_cdf(samples, radii))) < 0.01


@pytest.mark.slow
@pytest.mark.parametrize("z_u", [0.0, 1000.0])
def test_association_frequencies_against_analytic(three_tier, z_u):
    sim = SimConfig(seed=12, trials=50_000)
    freqs = association_frequencies(three_tier, sim, z_u, threads=4)
    for (k, link), est in freqs.items():
        model = association_frequency(three_tier, k, link, z_u)
        assert abs(model - est.mean) < 0.02


@pytest.mark.slow
def test_interference_laplace_against_analytic(three_tier):
    sim = SimConfig(seed=13, trials=20_000)
    r = 150.0
    mu = mu_threshold(three_tier.channel, three_tier.tiers[0], LOS, r, 10**-1.5)
    s_values = [mu / 10, mu, 10 * mu]
    ests = empirical_interference_laplace(
        three_tier, sim, 0, LOS, r, 0.0, s_values, threads=4
    )
    for s, est in zip(s_values, ests):
        assert abs(interference_laplace(three_tier, 0, LOS, s, r) - est.mean) < 0.02


@pytest.mark.slow
@pytest.mark.parametrize("z_u", [0.0, 500.0, 1000.0, 2000.0])
def test_local_coverage_against_analytic(three_tier, z_u):
    sim = SimConfig(seed=14, trials=20_000)
    est = estimate_local_coverage(three_tier, sim, z_u, GAMMA, threads=4)
    assert est.half_width_95 <= 0.007
    for method in ("approx", "exact"):
        assert abs(local_coverage(three_tier, z_u, GAMMA, method) - est.mean) < 0.03
