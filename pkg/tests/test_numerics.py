import math

import numpy as np
import pytest
import scipy.special as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from multicov.numerics import (
    ConvergenceError,
    QuadratureConfig,
    _hyp2f1_a1_series,
    c_prime,
    gamma_fn,
    hyp2f1_a1,
    integrate_semi_infinite,
    integrate_unit_hypercube,
)


@pytest.mark.parametrize("x, expected", [(1, 1.0), (5, 24.0), (0.5, math.sqrt(math.pi))])
def test_gamma_values(x, expected):
    assert gamma_fn(x) == pytest.approx(expected, rel=1e-12)


@pytest.mark.parametrize("x", [0, -1, -0.5])
def test_gamma_domain(x):
    with pytest.raises(ValueError):
        gamma_fn(x)


def test_c_prime_known_values():
    assert c_prime(4) == pytest.approx(math.pi / 2, rel=1e-14)
    # both forms evaluated at 30 digits with mpmath
    assert c_prime(3.8) == pytest.approx(1.65913661037446260418, rel=1e-13)
    assert c_prime(1e6) == pytest.approx(1.0, rel=1e-9)


def test_c_prime_domain():
    for beta in (2, 1.5, -3):
        with pytest.raises(ValueError):
            c_prime(beta)


@pytest.mark.parametrize("beta", np.linspace(2.05, 6, 40))
def test_c_prime_gamma_identity(beta):
    d = 2 / beta
    assert c_prime(beta) == pytest.approx(gamma_fn(1 - d) * gamma_fn(1 + d), rel=1e-12)


def test_hyp2f1_examples():
    assert hyp2f1_a1(1.5, 3, 0) == 1.0
    assert hyp2f1_a1(1, 2, -1) == pytest.approx(math.log(2), rel=1e-12)
    b = 1 - 2 / 3.8
    # mpmath.hyp2f1 at 30 digits
    assert hyp2f1_a1(b, b + 1, -1) == pytest.approx(0.79241986600465043829, rel=1e-10)
    assert _hyp2f1_a1_series(b, b + 1, -1) == pytest.approx(0.79241986600465043829, rel=1e-12)


@pytest.mark.parametrize("b, c, z", [(0, 1, -1), (-1, 1, -1), (1, 1, -1), (2, 1.5, -1), (1, 2, 0.5)])
def test_hyp2f1_domain(b, c, z):
    with pytest.raises(ValueError):
        hyp2f1_a1(b, c, z)


betas = st.floats(2.05, 8.0)


@settings(max_examples=60, deadline=None)
@given(beta=betas, z=st.floats(-5.0, 0.0), family=st.sampled_from(["fading", "j2"]))
def test_hyp2f1_matches_series(beta, z, family):
    d = 2 / beta
    b, c = (1 - d, 2 - d) if family == "fading" else (d + 1, 2 * (d + 1))
    assert hyp2f1_a1(b, c, z) == pytest.approx(_hyp2f1_a1_series(b, c, z), rel=1e-8)


@settings(max_examples=30, deadline=None)
@given(b=st.floats(0.05, 5), gap=st.floats(0.05, 5))
def test_hyp2f1_at_zero(b, gap):
    assert hyp2f1_a1(b, b + gap, 0.0) == 1.0


def test_hyp2f1_against_scipy():
    for z in (-0.1, -1.0, -10.0, -100.0):
        assert hyp2f1_a1(0.3, 1.3, z) == pytest.approx(sp.hyp2f1(1, 0.3, 1.3, z), rel=1e-9)


def test_semi_infinite_examples():
    assert integrate_semi_infinite(lambda u: u * math.exp(-u * u), tail_degree=1) == pytest.approx(0.5, rel=1e-9)
    assert integrate_semi_infinite(lambda u: u**5 * math.exp(-u * u), tail_degree=5) == pytest.approx(1.0, rel=1e-9)
    assert integrate_semi_infinite(lambda u: math.exp(-u * u)) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-9)


@pytest.mark.parametrize("n", range(1, 9))
def test_semi_infinite_gamma_moments(n):
    val = integrate_semi_infinite(lambda u: u ** (2 * n - 1) * math.exp(-u * u), tail_degree=2 * n - 1)
    assert val == pytest.approx(math.factorial(n - 1) / 2, rel=1e-9)


def test_semi_infinite_reports_failure():
    cfg = QuadratureConfig(max_subdivisions=1, rel_tol=1e-12, abs_tol=0)
    with pytest.raises(ConvergenceError):
        integrate_semi_infinite(lambda u: math.exp(-u * u) * abs(math.sin(50 * u)), cfg)


@pytest.mark.parametrize("d", [1, 3, 6])
def test_hypercube_volume(d):
    assert integrate_unit_hypercube(lambda v: np.ones(len(v)), d).value == pytest.approx(1.0, rel=1e-9)


def test_hypercube_examples():
    assert integrate_unit_hypercube(lambda v: v.prod(axis=1), 2).value == pytest.approx(0.25, rel=1e-9)
    res = integrate_unit_hypercube(lambda v: np.sqrt(v.prod(axis=1)), 3)
    assert res.value == pytest.approx((2 / 3) ** 3, rel=1e-9)
    assert res.method == "gauss-jacobi"


def test_hypercube_weight_exponents():
    # f = 1 with weight v^0.5 is the same integral as f = sqrt(v)
    res = integrate_unit_hypercube(lambda v: np.ones(len(v)), 3, exponents=[(0.5, 0.0)] * 3)
    assert res.value == pytest.approx((2 / 3) ** 3, rel=1e-12)
    res = integrate_unit_hypercube(lambda v: np.ones(len(v)), 6, exponents=[(0.5, 1.0)] * 6)
    assert res.value == pytest.approx(sp.beta(1.5, 2.0) ** 6, rel=1e-12)


def test_hypercube_qmc_error_estimate():
    res = integrate_unit_hypercube(lambda v: np.sqrt(v.prod(axis=1)), 6)
    assert res.method == "sobol"
    assert res.error > 0
    assert abs(res.value - (2 / 3) ** 6) < 5 * res.error + 1e-12


def test_hypercube_qmc_deterministic():
    f = lambda v: np.exp(-v.sum(axis=1))
    cfg = QuadratureConfig(qmc_seed=7)
    a = integrate_unit_hypercube(f, 7, cfg)
    b = integrate_unit_hypercube(f, 7, cfg)
    assert a.value == b.value and a.error == b.error
    c = integrate_unit_hypercube(f, 7, QuadratureConfig(qmc_seed=8))
    assert c.value != a.value
    assert c.value == pytest.approx((1 - math.exp(-1)) ** 7, rel=1e-3)


def test_tensor_switch_is_configurable():
    f = lambda v: v.prod(axis=1)
    res = integrate_unit_hypercube(f, 3, QuadratureConfig(tensor_max_dim=2))
    assert res.method == "sobol"
    assert res.value == pytest.approx(0.125, rel=1e-3)


def test_config_validation():
    with pytest.raises(ValueError):
        QuadratureConfig(rel_tol=0)
    with pytest.raises(ValueError):
        QuadratureConfig(hypercube_samples=999)
    with pytest.raises(ValueError):
        QuadratureConfig(abs_tol=-1)
