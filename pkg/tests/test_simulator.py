import math
from dataclasses import replace

import numpy as np
import pytest
from scipy import stats

from multicov.coverage import NetworkModel, k_coverage_probability, propagation_constant
from multicov.simulator import (
    Estimate,
    NetworkRealization,
    ScenarioConfig,
    ShadowingSpec,
    TrialTable,
    coverage_count,
    estimate_expected_coverage,
    estimate_k_coverage,
    estimate_pmf,
    estimate_symmetric_sum,
    moment_matched,
    neglected_interference,
    run_trials,
    s_moment_of,
    sample_planar,
    sample_projected,
    trial_rng,
)


def small_cfg(**kw):
    model = NetworkModel(lam=1.0, K=1.0, beta=4.0, W=0.0, s_moment=1.0)
    args = dict(trials=2000, seed=11)
    args.update(kw)
    return ScenarioConfig(model, **args)


def test_lognormal_moment_matches_published_value():
    assert s_moment_of(ShadowingSpec.lognormal(10), 3.8) == pytest.approx(0.516, abs=5e-4)


@pytest.mark.parametrize("spec", [ShadowingSpec.lognormal(10), ShadowingSpec.exponential(), ShadowingSpec.deterministic()])
def test_shadowing_unit_mean(spec):
    x = spec.sample(np.random.default_rng(0), 400_000)
    assert spec.moment(1.0) == pytest.approx(1.0, rel=1e-14)
    # sample mean of the 2/beta moment against the closed form
    p = 2 / 3.8
    assert np.mean(x**p) == pytest.approx(spec.moment(p), rel=1e-2)


def test_shadowing_validation():
    with pytest.raises(ValueError):
        ShadowingSpec("rician")
    with pytest.raises(ValueError):
        ShadowingSpec("lognormal")
    with pytest.raises(ValueError):
        ShadowingSpec("exponential", 3.0)


def test_config_window_bias_bound():
    cfg = small_cfg()
    assert neglected_interference(cfg) == pytest.approx(cfg.bias_tol, rel=1e-9)
    planar = small_cfg(mode="planar")
    assert neglected_interference(planar) == pytest.approx(planar.bias_tol, rel=1e-9)
    with pytest.raises(ValueError):
        small_cfg(mode="planar", window_radius=planar.window_radius / 2)
    with pytest.raises(ValueError):
        small_cfg(trials=10)
    with pytest.raises(ValueError):
        small_cfg(mode="spherical")


def test_realization_invariants():
    with pytest.raises(ValueError):
        NetworkRealization([2.0, 1.0])
    with pytest.raises(ValueError):
        NetworkRealization([0.0, 1.0])
    with pytest.raises(ValueError):
        NetworkRealization([1.0, 2.0], fading_marks=[1.0])


def test_planar_path_loss_evaluation():
    # K=1, beta=4, station at r=2 with unit shadowing
    m = NetworkModel(1.0, 1.0, 4.0)
    assert (m.K * 2.0) ** m.beta == 16.0
    r = NetworkRealization([16.0])
    assert coverage_count(r, 1.0 / (1e-3 * 16.0) * 0.99, W=1e-3) == 1


def test_coverage_count_single_station():
    L, W = 10.0, 0.01
    r = NetworkRealization([L])
    assert coverage_count(r, 1 / (W * L) - 1e-9, W) == 1
    assert coverage_count(r, 1 / (W * L) + 1e-9, W) == 0


def test_coverage_count_two_equal_stations():
    r = NetworkRealization([5.0, 5.0])
    assert coverage_count(r, 0.9, 0.0) == 2
    assert coverage_count(r, 1.0, 0.0) == 0


def test_coverage_count_fading_tests_serving_station_only():
    r = NetworkRealization([1.0, 1.1, 50.0], fading_marks=[0.01, 5.0, 1.0])
    # the faded second station is now far stronger but is never tested
    assert coverage_count(r, 0.001, 0.0, use_fading_for_sinr=True) == 1
    assert coverage_count(r, 0.01, 0.0, use_fading_for_sinr=True) == 0
    assert coverage_count(NetworkRealization([]), 0.1, 0.0) == 0


def test_count_at_most_one_above_unit_threshold():
    cfg = small_cfg()
    for t in range(300):
        assert coverage_count(sample_projected(cfg, t), 1.0, 0.0) <= 1


def test_sampling_is_deterministic():
    cfg = small_cfg(fading=True)
    a, b = sample_projected(cfg, 17), sample_projected(cfg, 17)
    assert np.array_equal(a.losses, b.losses) and np.array_equal(a.fading_marks, b.fading_marks)
    c = sample_projected(cfg, 18)
    assert not np.array_equal(a.losses[:5], c.losses[:5])
    assert trial_rng(1, 2).random() == trial_rng(1, 2).random()


def test_run_trials_independent_of_worker_split():
    cfg = small_cfg(trials=400, seed=5)
    serial = run_trials.__wrapped__(cfg, 1)
    split = run_trials.__wrapped__(cfg, 2)
    assert np.array_equal(serial.sinr, split.sinr)


def test_planar_point_count_mean():
    cfg = small_cfg(mode="planar", trials=10_000)
    counts = np.array([sample_planar(cfg, t).losses.size for t in range(3000)])
    mean = cfg.expected_points
    assert abs(counts.mean() - mean) < 3 * math.sqrt(mean / counts.size)


def test_projected_point_count_and_first_loss():
    cfg = small_cfg()
    a = propagation_constant(cfg.model)
    draws = [sample_projected(cfg, t) for t in range(4000)]
    counts = np.array([d.losses.size for d in draws])
    assert abs(counts.mean() - cfg.expected_points) < 3 * math.sqrt(cfg.expected_points / counts.size)
    y1 = np.array([d.losses[0] for d in draws])
    # P{Y1 > s} = exp(-a s^(2/beta))
    ks = stats.kstest(y1, lambda s: 1 - np.exp(-a * s ** (2 / cfg.model.beta)))
    assert ks.pvalue > 1e-3


def test_projected_matches_planar_losses():
    proj = small_cfg()
    planar = small_cfg(mode="planar", shadowing=ShadowingSpec.exponential(), y_max=None)
    planar = moment_matched(planar, ShadowingSpec.exponential(), mode="planar")
    a = [sample_projected(proj, t).losses[:3] for t in range(2000)]
    b = [sample_planar(planar, t).losses[:3] for t in range(2000)]
    for i in range(3):
        assert stats.ks_2samp([x[i] for x in a], [x[i] for x in b]).pvalue > 1e-3


def test_estimate_standard_error():
    est = Estimate.from_samples([0, 1, 1, 0, 1])
    assert est.mean == 0.6
    assert est.std_error == pytest.approx(np.std([0, 1, 1, 0, 1], ddof=1) / math.sqrt(5))
    assert est.trials == 5


def test_table_rejects_unresolvable_threshold():
    table = TrialTable(np.zeros((3, 4)), None, np.zeros(3, int))
    with pytest.raises(ValueError):
        table.counts(0.2)


def test_estimates_above_unit_threshold(urban_table):
    est = estimate_k_coverage(urban_table, 1.0, 2)
    assert est.mean == 0.0 and est.std_error == 0.0
    pmf = estimate_pmf(urban_table, 0.3)
    assert sum(e.mean for e in pmf) == pytest.approx(1.0, abs=1e-12)


def test_expected_count_is_first_symmetric_sum(urban_table):
    for T in (0.1, 0.5, 2.0):
        a = estimate_expected_coverage(urban_table, T)
        b = estimate_symmetric_sum(urban_table, T, 1)
        assert a == b


def test_planar_projected_agree():
    model = NetworkModel(lam=1.0, K=1.0, beta=3.8, W=0.05, s_moment=1.0)
    proj = ScenarioConfig(model, trials=20_000, seed=3)
    plan = ScenarioConfig(model, ShadowingSpec.deterministic(), mode="planar", trials=20_000, seed=4)
    for T in (0.2, 1.0, 5.0):
        a, b = estimate_k_coverage(proj, T, 1), estimate_k_coverage(plan, T, 1)
        assert abs(a.mean - b.mean) <= 3 * math.hypot(a.std_error, b.std_error)
        exact = k_coverage_probability(1, T, model)
        assert abs(a.mean - exact) <= 3 * a.std_error
