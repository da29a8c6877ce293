"""Special functions and integration engines.

Everything here is a pure function of its arguments. The integrators follow
the scipy convention of raising on failure rather than returning a flagged
value, see :class:`ConvergenceError`.
"""
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, NamedTuple, Optional, Sequence, Tuple

import numpy as np
from scipy import integrate, special
from scipy.stats import qmc


class ConvergenceError(RuntimeError):
    """Raised when a quadrature routine cannot reach the requested tolerance."""


@dataclass(frozen=True)
class QuadratureConfig:
    """Tolerances and budgets shared by every numeric integral.

    Parameters
    ----------
    abs_tol, rel_tol : float
        Target error ``max(abs_tol, rel_tol * |result|)``.
    max_subdivisions : int
        Interval budget of the adaptive 1-D rule.
    hypercube_samples : int
        Total number of quasi-Monte Carlo points for high-dimensional cubes,
        split across randomized replicates.
    qmc_seed : int
        Scrambling seed; fixes the quasi-MC output bit for bit.
    tensor_max_dim : int
        Largest dimension handled by the tensor-product Gauss rule. Above it
        the scrambled Sobol' estimator is used.
    qmc_replicates : int
        Number of independently scrambled point sets.
    """

    abs_tol: float = 1e-12
    rel_tol: float = 1e-9
    max_subdivisions: int = 200
    hypercube_samples: int = 2**16
    qmc_seed: int = 0
    tensor_max_dim: int = 4
    qmc_replicates: int = 8

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be > 0")
        if self.abs_tol < 0:
            raise ValueError("abs_tol must be >= 0")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be a positive integer")
        if self.hypercube_samples < 1000:
            raise ValueError("hypercube_samples must be >= 1000")
        if self.tensor_max_dim < 1:
            raise ValueError("tensor_max_dim must be >= 1")
        if self.qmc_replicates < 2:
            raise ValueError("qmc_replicates must be >= 2")


DEFAULT_CONFIG = QuadratureConfig()


class HypercubeResult(NamedTuple):
    value: float
    error: float
    evaluations: int
    method: str


def gamma_fn(x: float) -> float:
    """Gamma function for positive real arguments."""
    if not x > 0:
        raise ValueError(f"gamma_fn requires x > 0, got {x!r}")
    return math.gamma(x)


def c_prime(beta: float) -> float:
    """Interference constant ``2 pi / (beta sin(2 pi / beta))``.

    Equal to ``Gamma(1 - 2/beta) Gamma(1 + 2/beta)``; diverges as beta -> 2.
    """
    if not beta > 2:
        raise ValueError(f"c_prime requires beta > 2, got {beta!r}")
    return 2.0 * math.pi / (beta * math.sin(2.0 * math.pi / beta))


def hyp2f1_a1(b: float, c: float, z: float, cfg: QuadratureConfig = DEFAULT_CONFIG) -> float:
    """Gauss hypergeometric function 2F1(1, b; c; z) for z <= 0.

    Uses the Euler integral

        Gamma(c) / (Gamma(b) Gamma(c - b)) * int_0^1 t^(b-1) (1-t)^(c-b-1) / (1 - z t) dt,

    with the algebraic endpoint factors handled by QUADPACK's weighted rule.
    """
    if not b > 0:
        raise ValueError(f"need b > 0, got {b!r}")
    if not c > b:
        raise ValueError(f"need c > b, got b={b!r}, c={c!r}")
    if z > 0:
        raise ValueError(f"need z <= 0, got {z!r}")
    if z == 0:
        return 1.0
    out = integrate.quad(
        lambda t: 1.0 / (1.0 - z * t), 0.0, 1.0,
        weight="alg", wvar=(b - 1.0, c - b - 1.0),
        epsabs=0.0, epsrel=cfg.rel_tol, limit=cfg.max_subdivisions,
        full_output=True,
    )
    if len(out) > 3:
        raise ConvergenceError(f"2F1 Euler integral failed for b={b}, c={c}, z={z}: {out[3]}")
    val = out[0]
    log_norm = math.lgamma(c) - math.lgamma(b) - math.lgamma(c - b)
    return math.exp(log_norm) * val


def _hyp2f1_a1_series(b: float, c: float, z: float, max_terms: int = 100_000) -> float:
    # Pfaff: 2F1(1,b;c;z) = (1-z)^-1 2F1(1,c-b;c;z/(z-1)); argument lands in [0, 1).
    w = z / (z - 1.0)
    term = 1.0
    total = 1.0
    for k in range(max_terms):
        term *= (c - b + k) / (c + k) * w
        total += term
        if abs(term) < 1e-17 * abs(total):
            break
    else:
        raise ConvergenceError("2F1 series did not converge")
    return total / (1.0 - z)


def _gaussian_tail_cutoff(degree: float, abs_tol: float) -> float:
    # Smallest u_max with u_max^max(degree-1,0) * exp(-u_max^2) < abs_tol / 10.
    target = math.log(max(abs_tol, 1e-300) / 10.0)
    u = max(1.0, math.sqrt(max(degree, 0.0)))
    while max(degree - 1.0, 0.0) * math.log(u) - u * u >= target:
        u += 0.25
    return u


def integrate_semi_infinite(
    f: Callable[[float], float],
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    tail_degree: float = 0.0,
) -> float:
    """Integrate ``f`` over ``[0, inf)``.

    ``f`` must be bounded by ``poly(u) exp(-u^2)`` with polynomial degree
    ``tail_degree``; the range is cut where that Gaussian tail bound drops
    below ``abs_tol / 10`` and the rest goes to adaptive Gauss-Kronrod.
    """
    u_max = _gaussian_tail_cutoff(tail_degree, cfg.abs_tol)
    out = integrate.quad(
        f, 0.0, u_max,
        epsabs=cfg.abs_tol, epsrel=cfg.rel_tol, limit=cfg.max_subdivisions,
        full_output=True,
    )
    if len(out) > 3:
        raise ConvergenceError(f"semi-infinite quadrature failed: {out[3]}")
    return out[0]


def _jacobi_rule(n: int, a: float, b: float) -> Tuple[np.ndarray, np.ndarray]:
    # Nodes/weights on [0,1] for weight v^a (1-v)^b.
    x, w = special.roots_jacobi(n, b, a)
    return 0.5 * (x + 1.0), w * 0.5 ** (a + b + 1.0)


def _smoothed_legendre_rule(n: int) -> Tuple[np.ndarray, np.ndarray]:
    # Legendre nodes pushed through v = t^2 (3 - 2t); the Jacobian 6t(1-t)
    # damps algebraic endpoint singularities of the flat-weight case.
    t, w = _jacobi_rule(n, 0.0, 0.0)
    return t * t * (3.0 - 2.0 * t), w * 6.0 * t * (1.0 - t)


def _tensor_rule(f, d, exponents, n):
    rules = [
        _smoothed_legendre_rule(n) if a == 0.0 and b == 0.0 else _jacobi_rule(n, a, b)
        for a, b in exponents
    ]
    if d == 1:
        v, w = rules[0]
        return float(np.dot(w, f(v[:, None])))
    rest_v = np.stack(np.meshgrid(*[r[0] for r in rules[1:]], indexing="ij"), -1).reshape(-1, d - 1)
    rest_w = np.prod(np.stack(np.meshgrid(*[r[1] for r in rules[1:]], indexing="ij"), -1).reshape(-1, d - 1), axis=1)
    total = 0.0
    v0, w0 = rules[0]
    pts = np.empty((rest_v.shape[0], d))
    pts[:, 1:] = rest_v
    for node, weight in zip(v0, w0):
        pts[:, 0] = node
        total += weight * float(np.dot(rest_w, f(pts)))
    return total


def integrate_unit_hypercube(
    f: Callable[[np.ndarray], np.ndarray],
    d: int,
    cfg: QuadratureConfig = DEFAULT_CONFIG,
    exponents: Optional[Sequence[Tuple[float, float]]] = None,
) -> HypercubeResult:
    """Integrate ``f(v) * prod_i v_i^a_i (1 - v_i)^b_i`` over ``[0, 1]^d``.

    Parameters
    ----------
    f : callable
        Vectorized integrand taking an ``(m, d)`` array and returning ``(m,)``.
    d : int
        Dimension.
    exponents : sequence of (a, b), optional
        Endpoint exponents of a product weight, each ``> -1``. They are
        absorbed exactly by Gauss-Jacobi nodes (low ``d``) or by sampling
        from the matching Beta law (high ``d``). Default is the flat weight.

    Returns
    -------
    HypercubeResult
        For ``d <= cfg.tensor_max_dim`` the error is the difference between
        the last two tensor refinements; above it, the standard error over
        scrambled Sobol' replicates.
    """
    if d < 1:
        raise ValueError("dimension must be >= 1")
    if exponents is None:
        exponents = [(0.0, 0.0)] * d
    exponents = [(float(a), float(b)) for a, b in exponents]
    if len(exponents) != d:
        raise ValueError("need one (a, b) pair per dimension")
    if any(a <= -1 or b <= -1 for a, b in exponents):
        raise ValueError("weight exponents must be > -1")

    if d <= cfg.tensor_max_dim:
        return _integrate_tensor(f, d, cfg, exponents)
    return _integrate_qmc(f, d, cfg, exponents)


_MAX_TENSOR_POINTS = 2**25


def _integrate_tensor(f, d, cfg, exponents):
    n = 8
    prev = _tensor_rule(f, d, exponents, n)
    evals = n**d
    while True:
        n *= 2
        if n**d > _MAX_TENSOR_POINTS:
            raise ConvergenceError(
                f"tensor rule did not converge in dimension {d} (last estimate {prev!r})"
            )
        cur = _tensor_rule(f, d, exponents, n)
        evals += n**d
        err = abs(cur - prev)
        if err <= max(cfg.abs_tol, cfg.rel_tol * abs(cur)):
            return HypercubeResult(float(cur), float(err), evals, "gauss-jacobi")
        prev = cur


@lru_cache(maxsize=16)
def _qmc_point_sets(d, exponents, m, reps, seed):
    # Scrambled Sobol' sets mapped to the Beta product law; reused across integrands.
    a = np.array([e[0] for e in exponents]) + 1.0
    b = np.array([e[1] for e in exponents]) + 1.0
    flat = np.all(a == 1.0) and np.all(b == 1.0)
    sets = []
    for child in np.random.SeedSequence(seed).spawn(reps):
        u = qmc.Sobol(d, scramble=True, seed=np.random.default_rng(child)).random_base2(m)
        v = u if flat else special.betaincinv(a, b, u)
        v.setflags(write=False)
        sets.append(v)
    return tuple(sets), float(np.sum(special.betaln(a, b)))


def _integrate_qmc(f, d, cfg, exponents):
    reps = cfg.qmc_replicates
    m = max(int(math.log2(cfg.hypercube_samples // reps)), 1)
    sets, log_mass = _qmc_point_sets(d, tuple(exponents), m, reps, cfg.qmc_seed)
    estimates = np.array([np.mean(f(v)) for v in sets])
    scale = math.exp(log_mass)
    value = scale * float(np.mean(estimates))
    error = scale * float(np.std(estimates, ddof=1)) / math.sqrt(reps)
    return HypercubeResult(value, error, reps * 2**m, "sobol")
