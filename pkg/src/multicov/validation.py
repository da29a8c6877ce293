"""Analytic-versus-simulation comparison over a dB threshold grid."""
import math
from dataclasses import dataclass, field, replace
from typing import List, Optional

import numpy as np

from .coverage import NetworkModel, fading_coverage_probability, k_coverage_probability
from .numerics import DEFAULT_CONFIG, QuadratureConfig
from .simulator import ScenarioConfig, estimate_fading_coverage, estimate_k_coverage, run_trials

Z_LIMIT = 3.0
PASS_FRACTION = 0.99
LOW_POWER_TRIALS = 10_000


def db_grid(tmin_db: float, tmax_db: float, step_db: float) -> np.ndarray:
    """Inclusive dB grid, built by index so the endpoints are exact."""
    if not tmin_db < tmax_db:
        raise ValueError("tmin_db must be smaller than tmax_db")
    if not step_db > 0:
        raise ValueError("step_db must be > 0")
    n = int(math.floor((tmax_db - tmin_db) / step_db + 1e-9))
    return tmin_db + step_db * np.arange(n + 1)


def db_to_linear(t_db):
    return 10.0 ** (np.asarray(t_db, dtype=float) / 10.0)


@dataclass
class ValidationPoint:
    T_dB: float
    T: float
    analytic: float
    mc: float
    std_error: float
    z: float

    @property
    def ok(self) -> bool:
        return abs(self.z) <= Z_LIMIT


@dataclass
class ValidationReport:
    quantity: str
    trials: int
    points: List[ValidationPoint] = field(default_factory=list)

    @property
    def fraction_within(self) -> float:
        return sum(p.ok for p in self.points) / len(self.points)

    @property
    def passed(self) -> bool:
        return self.fraction_within >= PASS_FRACTION

    @property
    def low_power(self) -> bool:
        return self.trials < LOW_POWER_TRIALS

    def summary_line(self) -> str:
        return (
            f"SUMMARY status={'PASS' if self.passed else 'FAIL'} quantity={self.quantity} "
            f"points={len(self.points)} within_{Z_LIMIT:g}se={sum(p.ok for p in self.points)} "
            f"fraction={self.fraction_within:.4f} max_abs_z={max(abs(p.z) for p in self.points):.3f} "
            f"trials={self.trials} low_power={str(self.low_power).lower()}"
        )

    def to_text(self) -> str:
        lines = [f"# validation of {self.quantity}: analytic versus Monte-Carlo",
                 "T_dB,T_linear,analytic,mc,std_error,z,ok"]
        for p in self.points:
            lines.append(f"{p.T_dB:.6g},{p.T:.12g},{p.analytic:.12g},{p.mc:.12g},"
                         f"{p.std_error:.6g},{p.z:.4f},{int(p.ok)}")
        if self.low_power:
            lines.append(f"# WARNING: low power, fewer than {LOW_POWER_TRIALS} trials")
        lines.append(self.summary_line())
        return "\n".join(lines) + "\n"


def validate_curve(
    cfg: ScenarioConfig,
    grid_db,
    quantity: str = "k_coverage",
    k: int = 1,
    analytic_model: Optional[NetworkModel] = None,
    qcfg: QuadratureConfig = DEFAULT_CONFIG,
) -> ValidationReport:
    """Compare analytic coverage (``k_coverage`` or ``fading``) with simulation.

    ``analytic_model`` overrides the model fed to the formulas, e.g. to check
    that a wrong propagation constant is caught. The standard error is floored
    at ``1/trials`` so that all-hit or all-miss samples still yield a finite z.
    """
    if quantity not in ("k_coverage", "fading"):
        raise ValueError(f"unsupported quantity {quantity!r}")
    if quantity == "fading" and not cfg.fading:
        cfg = replace(cfg, fading=True)
    model = analytic_model or cfg.model
    table = run_trials(cfg)
    label = f"k_coverage(k={k})" if quantity == "k_coverage" else "fading"
    report = ValidationReport(label, cfg.trials)
    for t_db in grid_db:
        T = float(db_to_linear(t_db))
        if quantity == "k_coverage":
            exact = k_coverage_probability(k, T, model, qcfg)
            est = estimate_k_coverage(table, T, k)
        else:
            exact = fading_coverage_probability(T, model, qcfg)
            est = estimate_fading_coverage(table, T)
        se = max(est.std_error, 1.0 / est.trials)
        report.points.append(ValidationPoint(float(t_db), T, exact, est.mean, se, (exact - est.mean) / se))
    return report
