"""Monte-Carlo oracle for the coverage statistics.

Two sampling modes are available:

* ``planar``: stations of a homogeneous Poisson process in a disc, each with
  its own shadowing mark, path loss ``(K r)^beta``.
* ``projected``: the propagation losses ``l(|x|)/S_x`` drawn directly as a
  Poisson process on the half-line with intensity measure ``a t^(2/beta)``.

Each trial owns a counter-based Philox stream keyed by ``(seed, trial)``, so
results do not depend on how trials are split across workers.
"""
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import List, Optional

import numpy as np

from .coverage import NetworkModel, propagation_constant

LN10_OVER_10 = math.log(10.0) / 10.0
SHADOWING_KINDS = ("lognormal", "exponential", "deterministic")
MODES = ("projected", "planar")


@dataclass(frozen=True)
class ShadowingSpec:
    """Unit-mean shadowing law; ``sigma_db`` only applies to ``lognormal``."""

    kind: str = "deterministic"
    sigma_db: Optional[float] = None

    def __post_init__(self):
        if self.kind not in SHADOWING_KINDS:
            raise ValueError(f"unknown shadowing kind {self.kind!r}")
        if self.kind == "lognormal":
            if self.sigma_db is None or not self.sigma_db > 0:
                raise ValueError("lognormal shadowing needs sigma_db > 0")
        elif self.sigma_db is not None:
            raise ValueError(f"sigma_db is meaningless for {self.kind} shadowing")

    @classmethod
    def lognormal(cls, sigma_db: float) -> "ShadowingSpec":
        return cls("lognormal", float(sigma_db))

    @classmethod
    def exponential(cls) -> "ShadowingSpec":
        return cls("exponential")

    @classmethod
    def deterministic(cls) -> "ShadowingSpec":
        return cls("deterministic")

    @property
    def sigma(self) -> float:
        """Natural-log standard deviation of a lognormal law."""
        return self.sigma_db * LN10_OVER_10

    def moment(self, p: float) -> float:
        """``E[S^p]``."""
        if self.kind == "deterministic":
            return 1.0
        if self.kind == "exponential":
            return math.gamma(1.0 + p)
        s2 = self.sigma**2
        return math.exp(0.5 * s2 * (p * p - p))

    def sample(self, rng: np.random.Generator, size: int) -> np.ndarray:
        if self.kind == "deterministic":
            return np.ones(size)
        if self.kind == "exponential":
            return rng.standard_exponential(size)
        return rng.lognormal(-0.5 * self.sigma**2, self.sigma, size)


def s_moment_of(spec: ShadowingSpec, beta: float) -> float:
    """Shadowing moment ``E[S^(2/beta)]`` that enters the analytic formulas."""
    return spec.moment(2.0 / beta)


def _reference_power(a: float, beta: float) -> float:
    # Median received power from the strongest station, 1 / median(Y_1).
    return (a / math.log(2.0)) ** (beta / 2.0)


def projected_cutoff(model: NetworkModel, bias_tol: float) -> float:
    """Loss cutoff whose neglected mean interference is ``bias_tol`` of the reference power."""
    a = propagation_constant(model)
    d = 2.0 / model.beta
    # a d/(1-d) y^(d-1) = bias_tol * ref
    log_y = (math.log(bias_tol * _reference_power(a, model.beta)) - math.log(a * d / (1.0 - d))) / (d - 1.0)
    return math.exp(log_y)


def planar_radius(model: NetworkModel, bias_tol: float) -> float:
    """Disc radius whose neglected mean interference is ``bias_tol`` of the reference power."""
    a = propagation_constant(model)
    b = model.beta
    # 2 pi lam K^-b R^(2-b) / (b-2) = bias_tol * ref
    coef = 2.0 * math.pi * model.lam * model.K ** (-b) / (b - 2.0)
    return (bias_tol * _reference_power(a, b) / coef) ** (1.0 / (2.0 - b))


def neglected_interference(cfg: "ScenarioConfig") -> float:
    """Mean interference beyond the simulation window, relative to the reference power."""
    m = cfg.model
    a = propagation_constant(m)
    ref = _reference_power(a, m.beta)
    if cfg.mode == "projected":
        d = 2.0 / m.beta
        return a * d / (1.0 - d) * cfg.y_max ** (d - 1.0) / ref
    b = m.beta
    return 2.0 * math.pi * m.lam * m.K ** (-b) * cfg.window_radius ** (2.0 - b) / (b - 2.0) / ref


@dataclass(frozen=True)
class ScenarioConfig:
    """Everything needed to run one simulation.

    ``window_radius`` (planar) or ``y_max`` (projected) default to the
    smallest window meeting ``bias_tol``; an explicit window that misses the
    bound is rejected.
    """

    model: NetworkModel
    shadowing: ShadowingSpec = field(default_factory=ShadowingSpec)
    fading: bool = False
    mode: str = "projected"
    window_radius: Optional[float] = None
    y_max: Optional[float] = None
    trials: int = 100_000
    seed: int = 0
    bias_tol: float = 1e-3
    max_rank: int = 32
    name: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.trials < 100:
            raise ValueError("trials must be >= 100")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.max_rank < 2:
            raise ValueError("max_rank must be >= 2")
        if self.mode == "projected":
            if self.y_max is None:
                object.__setattr__(self, "y_max", projected_cutoff(self.model, self.bias_tol))
        elif self.window_radius is None:
            object.__setattr__(self, "window_radius", planar_radius(self.model, self.bias_tol))
        if self.mode == "planar" and not self.window_radius > 0:
            raise ValueError("window_radius must be > 0")
        if self.mode == "projected" and not self.y_max > 0:
            raise ValueError("y_max must be > 0")
        bias = neglected_interference(self)
        if bias > self.bias_tol * (1 + 1e-9):
            raise ValueError(
                f"simulation window too small: neglected interference {bias:.2e} exceeds {self.bias_tol:.2e}"
            )

    @property
    def expected_points(self) -> float:
        if self.mode == "projected":
            return propagation_constant(self.model) * self.y_max ** (2.0 / self.model.beta)
        return self.model.lam * math.pi * self.window_radius**2


@dataclass
class NetworkRealization:
    """Ascending propagation losses of one draw, with optional fading marks."""

    losses: np.ndarray
    fading_marks: Optional[np.ndarray] = None

    def __post_init__(self):
        self.losses = np.asarray(self.losses, dtype=float)
        if np.any(self.losses <= 0):
            raise ValueError("losses must be strictly positive")
        if np.any(np.diff(self.losses) < 0):
            raise ValueError("losses must be sorted ascending")
        if self.fading_marks is not None:
            self.fading_marks = np.asarray(self.fading_marks, dtype=float)
            if self.fading_marks.shape != self.losses.shape:
                raise ValueError("fading_marks must align with losses")


@dataclass(frozen=True)
class Estimate:
    mean: float
    std_error: float
    trials: int

    @classmethod
    def from_samples(cls, x) -> "Estimate":
        x = np.asarray(x, dtype=float)
        n = x.size
        return cls(float(x.mean()), float(x.std(ddof=1) / math.sqrt(n)) if n > 1 else 0.0, n)


def trial_rng(seed: int, trial_index: int) -> np.random.Generator:
    """Philox stream owned by a single trial."""
    return np.random.Generator(np.random.Philox(key=(int(seed) << 64) | int(trial_index)))


def _finish(losses: np.ndarray, rng: np.random.Generator, fading: bool) -> NetworkRealization:
    order = np.argsort(losses)
    losses = losses[order]
    marks = rng.standard_exponential(losses.size) if fading else None
    return NetworkRealization(losses, marks)


def sample_planar(cfg: ScenarioConfig, trial_index: int) -> NetworkRealization:
    """Poisson stations in a disc, shadowed, mapped to sorted propagation losses."""
    if cfg.mode != "planar":
        raise ValueError("sample_planar needs a planar-mode config")
    rng = trial_rng(cfg.seed, trial_index)
    m = cfg.model
    R = cfg.window_radius
    count = rng.poisson(m.lam * math.pi * R * R)
    r = R * np.sqrt(rng.random(count))
    shadow = cfg.shadowing.sample(rng, count)
    return _finish((m.K * r) ** m.beta / shadow, rng, cfg.fading)


def sample_projected(cfg: ScenarioConfig, trial_index: int) -> NetworkRealization:
    """Propagation losses drawn straight from the half-line Poisson process."""
    if cfg.mode != "projected":
        raise ValueError("sample_projected needs a projected-mode config")
    rng = trial_rng(cfg.seed, trial_index)
    a = propagation_constant(cfg.model)
    mass = a * cfg.y_max ** (2.0 / cfg.model.beta)
    count = rng.poisson(mass)
    v = rng.uniform(0.0, mass, count)
    return _finish((v / a) ** (cfg.model.beta / 2.0), rng, cfg.fading)


def sample(cfg: ScenarioConfig, trial_index: int) -> NetworkRealization:
    if cfg.mode == "planar":
        return sample_planar(cfg, trial_index)
    return sample_projected(cfg, trial_index)


def sinr_values(r: NetworkRealization, W: float, use_fading: bool = False) -> np.ndarray:
    """SINR of every station in rank order; interference includes the served station."""
    power = 1.0 / r.losses
    if use_fading:
        if r.fading_marks is None:
            raise ValueError("realization carries no fading marks")
        power = power * r.fading_marks
    total = W + power.sum()
    return power / (total - power)


def coverage_count(r: NetworkRealization, T: float, W: float, use_fading_for_sinr: bool = False) -> int:
    """Coverage number of one realization.

    Without fading, counts stations whose SINR exceeds ``T``. With
    ``use_fading_for_sinr`` only the station of smallest fading-free loss is
    tested, with faded powers in both signal and interference, so the result
    is 0 or 1.
    """
    if r.losses.size == 0:
        return 0
    sinr = sinr_values(r, W, use_fading_for_sinr)
    if use_fading_for_sinr:
        return int(sinr[0] > T)
    return int(np.count_nonzero(sinr > T))


@dataclass
class TrialTable:
    """Per-trial SINR summaries, enough to evaluate any threshold ``T >= 1/(max_rank-1)``.

    ``sinr[t, i]`` is the SINR of the (i+1)-th strongest station in trial t
    (0 where absent); ``fading_sinr[t]`` the faded SINR of the strongest one.
    """

    sinr: np.ndarray
    fading_sinr: Optional[np.ndarray]
    points: np.ndarray

    @property
    def trials(self) -> int:
        return self.sinr.shape[0]

    def counts(self, T: float) -> np.ndarray:
        max_rank = self.sinr.shape[1]
        if T < 1.0 / (max_rank - 1):
            raise ValueError(f"T={T:g} below the resolvable range 1/(max_rank-1)")
        return np.count_nonzero(self.sinr > T, axis=1)


def _run_chunk(cfg: ScenarioConfig, start: int, stop: int):
    M = cfg.max_rank
    W = cfg.model.W
    sinr = np.zeros((stop - start, M))
    fad = np.zeros(stop - start) if cfg.fading else None
    points = np.zeros(stop - start, dtype=np.int64)
    for row, t in enumerate(range(start, stop)):
        r = sample(cfg, t)
        points[row] = r.losses.size
        if r.losses.size == 0:
            continue
        s = sinr_values(r, W)
        sinr[row, : min(M, s.size)] = s[:M]
        if fad is not None:
            fad[row] = sinr_values(r, W, use_fading=True)[0]
    return sinr, fad, points


def worker_count() -> int:
    cap = os.environ.get("MULTICOV_THREADS")
    n = os.cpu_count() or 1
    if cap:
        n = min(n, max(int(cap), 1))
    return n


@lru_cache(maxsize=8)
def run_trials(cfg: ScenarioConfig, workers: Optional[int] = None) -> TrialTable:
    """Simulate every trial of ``cfg`` once and keep the SINR summaries."""
    workers = worker_count() if workers is None else workers
    if workers <= 1:
        sinr, fad, points = _run_chunk(cfg, 0, cfg.trials)
        return TrialTable(sinr, fad, points)
    bounds = np.linspace(0, cfg.trials, workers * 4 + 1).astype(int)
    with ProcessPoolExecutor(workers) as pool:
        parts = list(pool.map(_run_chunk, [cfg] * (len(bounds) - 1), bounds[:-1], bounds[1:]))
    sinr = np.concatenate([p[0] for p in parts])
    fad = np.concatenate([p[1] for p in parts]) if cfg.fading else None
    points = np.concatenate([p[2] for p in parts])
    return TrialTable(sinr, fad, points)


def _table(cfg_or_table) -> TrialTable:
    return cfg_or_table if isinstance(cfg_or_table, TrialTable) else run_trials(cfg_or_table)


def estimate_k_coverage(cfg, T: float, k: int) -> Estimate:
    """MC estimate of ``P{N(T) >= k}``; ``cfg`` may also be a precomputed :class:`TrialTable`."""
    return Estimate.from_samples(_table(cfg).counts(T) >= k)


def estimate_pmf(cfg, T: float) -> List[Estimate]:
    """MC estimates of ``P{N(T) = k}`` for ``k = 0 .. ceil(1/T)``."""
    counts = _table(cfg).counts(T)
    return [Estimate.from_samples(counts == k) for k in range(math.ceil(1.0 / T) + 1)]


def estimate_fading_coverage(cfg, T: float) -> Estimate:
    table = _table(cfg)
    if table.fading_sinr is None:
        raise ValueError("scenario was simulated without fading")
    return Estimate.from_samples(table.fading_sinr > T)


def estimate_symmetric_sum(cfg, T: float, n: int) -> Estimate:
    """MC estimate of ``E[C(N(T), n)]``, the number of covering n-subsets."""
    counts = _table(cfg).counts(T)
    return Estimate.from_samples([math.comb(int(c), n) for c in counts])


def estimate_expected_coverage(cfg, T: float) -> Estimate:
    return Estimate.from_samples(_table(cfg).counts(T))


def estimate_pgf(cfg, T: float, z: float) -> Estimate:
    return Estimate.from_samples(float(z) ** _table(cfg).counts(T))


def moment_matched(cfg: ScenarioConfig, shadowing: ShadowingSpec, **changes) -> ScenarioConfig:
    """Same propagation constant under a different shadowing law.

    Density is rescaled by the ratio of ``E[S^(2/beta)]`` moments so that the
    propagation-loss process, hence every coverage statistic, is unchanged.
    """
    beta = cfg.model.beta
    old = cfg.model.s_moment
    new = s_moment_of(shadowing, beta)
    model = replace(cfg.model, lam=cfg.model.lam * old / new, s_moment=new)
    changes.setdefault("window_radius", None)
    changes.setdefault("y_max", None)
    return replace(cfg, model=model, shadowing=shadowing, **changes)
