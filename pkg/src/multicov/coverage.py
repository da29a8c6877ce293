"""Exact-formula multi-coverage statistics for a Poisson cellular network.

The network enters every formula only through the path-loss exponent, the
noise power and the propagation constant ``a = lambda pi E[S^(2/beta)] / K^2``.
All thresholds ``T`` are linear-scale SINR values.
"""
import logging
import math
import warnings
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import List, Optional, Sequence

import numpy as np

from .numerics import (
    DEFAULT_CONFIG,
    QuadratureConfig,
    c_prime,
    gamma_fn,
    hyp2f1_a1,
    integrate_semi_infinite,
    integrate_unit_hypercube,
)

log = logging.getLogger(__name__)

#: Slack allowed on probabilities before clamping to [0, 1].
PROB_EPS = 1e-6
SMALL_J_ARGUMENT = 1e-6


@dataclass(frozen=True)
class NetworkModel:
    """Physical parameters of one single-tier network scenario.

    Parameters
    ----------
    lam : float
        Base-station density (km^-2).
    K : float
        Path-loss constant (km^-1); path loss is ``(K r)^beta``.
    beta : float
        Path-loss exponent, strictly greater than 2.
    W : float
        Noise power normalized by the transmit power.
    s_moment : float
        Shadowing moment ``E[S^(2/beta)]``.
    """

    lam: float
    K: float
    beta: float
    W: float = 0.0
    s_moment: float = 1.0

    def __post_init__(self):
        if not self.beta > 2:
            raise ValueError(f"beta must be > 2, got {self.beta!r}")
        for name in ("lam", "K", "s_moment"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be > 0, got {getattr(self, name)!r}")
        if not self.W >= 0:
            raise ValueError(f"W must be >= 0, got {self.W!r}")

    def with_noise(self, W: float) -> "NetworkModel":
        return replace(self, W=W)


def propagation_constant(m: NetworkModel) -> float:
    """Scale ``a`` of the propagation-loss intensity measure ``a t^(2/beta)``."""
    return m.lam * math.pi * m.s_moment / m.K**2


def noise_argument(m: NetworkModel) -> float:
    """Noise expressed in propagation units, ``W a^(-beta/2)``."""
    if m.W == 0:
        return 0.0
    # log space: a^(-beta/2) overflows for sparse networks with large K
    return math.exp(math.log(m.W) - 0.5 * m.beta * math.log(propagation_constant(m)))


def threshold_transform(T: float, n: int) -> Optional[float]:
    """``T / (1 - (n-1) T)``, or ``None`` when ``T >= 1/(n-1)``.

    ``None`` marks thresholds at which n stations can never be covered
    simultaneously.
    """
    if not T > 0:
        raise ValueError(f"T must be > 0, got {T!r}")
    if n < 1:
        raise ValueError("n must be >= 1")
    denom = 1.0 - (n - 1) * T
    if denom <= 0:
        return None
    return T / denom


def max_coverage(T: float) -> int:
    """Largest possible coverage number at threshold ``T``, ``ceil(1/T)``."""
    if not T > 0:
        raise ValueError(f"T must be > 0, got {T!r}")
    return math.ceil(1.0 / T)


@lru_cache(maxsize=4096)
def calc_integral_i(n: int, beta: float, x: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Semi-infinite integral family carrying the noise dependence.

    ``2^n int_0^inf u^(2n-1) exp(-u^2 - u^beta x Gamma(1-2/beta)^(-beta/2)) du``
    divided by ``beta^(n-1) C'(beta)^n (n-1)!``.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if x < 0:
        raise ValueError("x must be >= 0")
    scale = x * gamma_fn(1.0 - 2.0 / beta) ** (-beta / 2.0)
    log_norm = (
        n * math.log(2.0) - (n - 1) * math.log(beta) - n * math.log(c_prime(beta)) - math.lgamma(n)
    )

    def integrand(u):
        return u ** (2 * n - 1) * math.exp(-u * u - scale * u**beta)

    return math.exp(log_norm) * integrate_semi_infinite(integrand, cfg, tail_degree=2 * n - 1)


def calc_integral_i_at_zero(n: int, beta: float) -> float:
    """Closed form of the I-family at zero noise."""
    return 2.0 ** (n - 1) / (beta ** (n - 1) * c_prime(beta) ** n)


def _j_exponents(n: int, beta: float):
    d = 2.0 / beta
    return [(i * (d + 1.0) - 1.0, d) for i in range(1, n)]


def _j_integrand(n: int, x: float):
    def f(v):
        # eta_i = (1 - v_i) prod_{k>i} v_k, built right to left
        dim = n - 1
        out = np.ones(v.shape[0])
        tail = np.ones(v.shape[0])
        for i in range(dim - 1, -1, -1):
            out /= x + (1.0 - v[:, i]) * tail
            tail = tail * v[:, i]
        return out

    return f


def calc_integral_j_closed(beta: float, x: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Two-station hypercube integral via the Beta/2F1 closed form."""
    b = 2.0 / beta + 1.0
    log_beta = 2.0 * math.lgamma(b) - math.lgamma(2.0 * b)
    return math.exp(log_beta) * hyp2f1_a1(b, 2.0 * b, -1.0 / x, cfg) / x


@lru_cache(maxsize=4096)
def calc_integral_j(n: int, beta: float, x: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Hypercube integral family over ``[0,1]^(n-1)``.

    The endpoint weight ``v_i^(i(2/beta+1)-1) (1-v_i)^(2/beta)`` is absorbed
    by the integrator, leaving ``1 / prod_i (x + eta_i)`` as the integrand.
    ``n = 1`` is the empty integral (exactly 1) and ``n = 2`` uses the
    closed form.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not x > 0:
        raise ValueError(f"x must be > 0, got {x!r}")
    if n == 1:
        return 1.0
    if x < SMALL_J_ARGUMENT:
        warnings.warn(f"hypercube integral at x={x:g} is close to its singular limit; accuracy not guaranteed")
    if n == 2:
        return calc_integral_j_closed(beta, x, cfg)
    res = integrate_unit_hypercube(_j_integrand(n, x), n - 1, cfg, exponents=_j_exponents(n, beta))
    return res.value


def symmetric_sum(n: int, T: float, m: NetworkModel, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Expected number of n-subsets of stations all covering the user at level ``T``.

    Equals ``E[C(N(T), n)]``; zero whenever ``T >= 1/(n-1)``.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if not T > 0:
        raise ValueError(f"T must be > 0, got {T!r}")
    if n == 0:
        return 1.0
    Tn = threshold_transform(T, n)
    if Tn is None:
        return 0.0
    i_val = calc_integral_i(n, m.beta, noise_argument(m), cfg)
    j_val = calc_integral_j(n, m.beta, Tn, cfg)
    return Tn ** (-2.0 * n / m.beta) * i_val * j_val


def symmetric_sums(T: float, m: NetworkModel, cfg: QuadratureConfig = DEFAULT_CONFIG) -> List[float]:
    """``[S_0, S_1, ..., S_ceil(1/T)]`` with ``S_0 = 1``."""
    return [symmetric_sum(n, T, m, cfg) for n in range(max_coverage(T) + 1)]


def _clamp(raw: float, what: str) -> float:
    if raw < -PROB_EPS or raw > 1 + PROB_EPS:
        log.warning("%s = %.3e lies outside [0, 1] beyond numerical slack", what, raw)
    if raw < 0 or raw > 1:
        log.debug("clamping %s raw value %.17g", what, raw)
    return min(max(raw, 0.0), 1.0)


def _k_coverage_from_sums(k: int, sums: Sequence[float]) -> float:
    return sum(
        (-1) ** (n - k) * math.comb(n - 1, k - 1) * sums[n] for n in range(k, len(sums))
    )


def _pmf_from_sums(k: int, sums: Sequence[float]) -> float:
    return sum((-1) ** (n - k) * math.comb(n, k) * sums[n] for n in range(k, len(sums)))


def k_coverage_probability(k: int, T: float, m: NetworkModel, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Probability that at least ``k`` stations offer SINR above ``T``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if k > max_coverage(T):
        return 0.0
    raw = _k_coverage_from_sums(k, symmetric_sums(T, m, cfg))
    return _clamp(raw, f"P_c^({k})({T:g})")


def coverage_pmf(k: int, T: float, m: NetworkModel, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Probability that exactly ``k`` stations offer SINR above ``T``."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if k > max_coverage(T):
        return 0.0
    sums = symmetric_sums(T, m, cfg)
    if k == 0:
        return _clamp(1.0 - _k_coverage_from_sums(1, sums), f"P(N({T:g})=0)")
    return _clamp(_pmf_from_sums(k, sums), f"P(N({T:g})={k})")


def coverage_pgf(z: float, T: float, m: NetworkModel, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Probability-generating function ``E[z^N(T)]`` for ``z`` in [0, 1]."""
    if not 0 <= z <= 1:
        raise ValueError(f"z must lie in [0, 1], got {z!r}")
    if z == 1:
        return 1.0
    sums = symmetric_sums(T, m, cfg)
    raw = sum((z - 1.0) ** n * s for n, s in enumerate(sums))
    return _clamp(raw, f"G({z:g})")


def expected_coverage(T: float, m: NetworkModel, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Mean coverage number ``E[N(T)]``, i.e. the first symmetric sum."""
    return symmetric_sum(1, T, m, cfg)


def _fading_slope(T: float, beta: float, cfg: QuadratureConfig) -> float:
    # (2/beta) T 2F1(1, 1-2/beta; 2-2/beta; -T) / (1 - 2/beta)
    d = 2.0 / beta
    return d * T * hyp2f1_a1(1.0 - d, 2.0 - d, -T, cfg) / (1.0 - d)


def fading_coverage_closed(T: float, beta: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Noise-free Rayleigh-fading coverage probability in closed form."""
    return 1.0 / (1.0 + _fading_slope(T, beta, cfg))


def fading_coverage_integral(T: float, beta: float, x: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Rayleigh-fading coverage probability by quadrature, noise argument ``x``.

    The integral over ``t`` is evaluated after substituting ``t = u^beta``,
    which turns the stretched-exponential tail into a Gaussian one.
    """
    if not T > 0:
        raise ValueError(f"T must be > 0, got {T!r}")
    rate = 1.0 + _fading_slope(T, beta, cfg)
    noise = T * x

    def integrand(u):
        return 2.0 * u * math.exp(-rate * u * u - noise * u**beta)

    return integrate_semi_infinite(integrand, cfg, tail_degree=1)


def fading_coverage_probability(T: float, m: NetworkModel, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Coverage probability of the strongest (fading-averaged) station under Rayleigh fading."""
    if not T > 0:
        raise ValueError(f"T must be > 0, got {T!r}")
    if m.W == 0:
        return fading_coverage_closed(T, m.beta, cfg)
    return _clamp(fading_coverage_integral(T, m.beta, noise_argument(m), cfg), f"fading P_c({T:g})")


KINDS = ("k_coverage", "pmf", "fading", "expected_count")


@dataclass
class CoverageCurve:
    """Analytic values over a grid of thresholds.

    ``kind`` is one of ``k_coverage``, ``pmf``, ``fading`` or
    ``expected_count``; ``k`` is meaningful for the first two.
    """

    thresholds: np.ndarray
    values: np.ndarray
    kind: str
    k: Optional[int] = None
    errors: List[Optional[str]] = field(default_factory=list)

    def __post_init__(self):
        self.thresholds = np.asarray(self.thresholds, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.thresholds.shape != self.values.shape:
            raise ValueError("thresholds and values must have the same length")
        if self.kind not in KINDS:
            raise ValueError(f"unknown curve kind {self.kind!r}")
        if not self.errors:
            self.errors = [None] * len(self.thresholds)

    @property
    def label(self) -> str:
        return f"{self.kind}(k={self.k})" if self.k is not None else self.kind


def coverage_curve(
    kind: str,
    thresholds: Sequence[float],
    m: NetworkModel,
    k: Optional[int] = None,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
) -> CoverageCurve:
    """Evaluate one quantity over a threshold grid.

    A failing grid point gets ``nan`` and its message in ``errors``; the
    remaining points are still evaluated.
    """
    if kind in ("k_coverage", "pmf") and k is None:
        k = 1
    funcs = {
        "k_coverage": lambda T: k_coverage_probability(k, T, m, cfg),
        "pmf": lambda T: coverage_pmf(k, T, m, cfg),
        "fading": lambda T: fading_coverage_probability(T, m, cfg),
        "expected_count": lambda T: expected_coverage(T, m, cfg),
    }
    if kind not in funcs:
        raise ValueError(f"unknown curve kind {kind!r}")
    values, errors = [], []
    for T in thresholds:
        try:
            values.append(funcs[kind](float(T)))
            errors.append(None)
        except (ArithmeticError, RuntimeError, ValueError) as exc:
            values.append(float("nan"))
            errors.append(f"{type(exc).__name__}: {exc}")
    return CoverageCurve(np.asarray(thresholds, float), np.asarray(values), kind,
                         k if kind in ("k_coverage", "pmf") else None, errors)
