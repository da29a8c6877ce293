"""Exact and simulated SINR multi-coverage statistics for Poisson cellular networks."""
from .coverage import (
    CoverageCurve,
    NetworkModel,
    calc_integral_i,
    calc_integral_j,
    coverage_curve,
    coverage_pgf,
    coverage_pmf,
    expected_coverage,
    fading_coverage_probability,
    k_coverage_probability,
    noise_argument,
    propagation_constant,
    symmetric_sum,
    threshold_transform,
)
from .numerics import ConvergenceError, QuadratureConfig, c_prime, gamma_fn, hyp2f1_a1
from .scenarios import ScenarioError, load_preset, load_scenario, parse_scenario, serialize_scenario
from .simulator import (
    Estimate,
    NetworkRealization,
    ScenarioConfig,
    ShadowingSpec,
    coverage_count,
    estimate_expected_coverage,
    estimate_fading_coverage,
    estimate_k_coverage,
    estimate_pmf,
    estimate_symmetric_sum,
    run_trials,
    sample_planar,
    sample_projected,
)

__version__ = "0.1.0"
