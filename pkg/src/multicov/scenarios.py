"""JSON scenario files.

Schema (all keys except ``model`` optional)::

    {
      "name": "urban",
      "model": {"lambda": 4.619, "K": 6910.0, "beta": 3.8,
                "W": 1.5e-16, "s_moment": 0.516},
      "shadowing": {"kind": "lognormal", "sigma_db": 10.0},
      "simulation": {"mode": "projected", "fading": true, "trials": 100000,
                     "seed": 2013, "bias_tol": 0.001, "window_radius": null,
                     "y_max": null, "max_rank": 32}
    }

``lambda`` is in km^-2, ``K`` in km^-1, ``W`` is noise over transmit power.
When ``s_moment`` is omitted it is computed from the shadowing law.
"""
import json
from importlib import resources
from pathlib import Path
from typing import Union

from .coverage import NetworkModel
from .simulator import MODES, SHADOWING_KINDS, ScenarioConfig, ShadowingSpec, s_moment_of

PRESETS = ("urban", "suburban")


class ScenarioError(ValueError):
    """Invalid scenario document; the message names the offending field."""


def _number(section, key, where, required=True, default=None, integer=False):
    if key not in section or section[key] is None:
        if required:
            raise ScenarioError(f"{where}.{key}: required field missing")
        return default
    val = section[key]
    if isinstance(val, bool) or not isinstance(val, (int, float)):
        raise ScenarioError(f"{where}.{key}: expected a number, got {val!r}")
    if integer:
        if int(val) != val:
            raise ScenarioError(f"{where}.{key}: expected an integer, got {val!r}")
        return int(val)
    return float(val)


def _section(doc, key):
    sec = doc.get(key, {})
    if not isinstance(sec, dict):
        raise ScenarioError(f"{key}: expected an object")
    return sec


def _check_keys(sec, allowed, where):
    extra = set(sec) - set(allowed)
    if extra:
        raise ScenarioError(f"{where}: unknown field(s) {', '.join(sorted(extra))}")


def parse_scenario(text: str) -> ScenarioConfig:
    """Build a validated :class:`ScenarioConfig` from JSON text."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ScenarioError("top level must be an object")
    _check_keys(doc, ("name", "model", "shadowing", "simulation"), "scenario")
    if "model" not in doc:
        raise ScenarioError("model: required section missing")

    sh = _section(doc, "shadowing")
    _check_keys(sh, ("kind", "sigma_db"), "shadowing")
    kind = sh.get("kind", "deterministic")
    if kind not in SHADOWING_KINDS:
        raise ScenarioError(f"shadowing.kind: must be one of {SHADOWING_KINDS}, got {kind!r}")
    try:
        shadowing = ShadowingSpec(kind, _number(sh, "sigma_db", "shadowing", required=False))
    except ValueError as exc:
        raise ScenarioError(f"shadowing: {exc}") from None

    md = _section(doc, "model")
    _check_keys(md, ("lambda", "K", "beta", "W", "s_moment"), "model")
    beta = _number(md, "beta", "model")
    lam = _number(md, "lambda", "model")
    K = _number(md, "K", "model")
    W = _number(md, "W", "model", required=False, default=0.0)
    s_moment = _number(md, "s_moment", "model", required=False)
    if beta <= 2:
        raise ScenarioError(f"model.beta: must be > 2, got {beta!r}")
    if s_moment is None:
        s_moment = s_moment_of(shadowing, beta)
    try:
        model = NetworkModel(lam, K, beta, W, s_moment)
    except ValueError as exc:
        raise ScenarioError(f"model: {exc}") from None

    sim = _section(doc, "simulation")
    _check_keys(sim, ("mode", "fading", "trials", "seed", "bias_tol", "window_radius", "y_max", "max_rank"),
                "simulation")
    mode = sim.get("mode", "projected")
    if mode not in MODES:
        raise ScenarioError(f"simulation.mode: must be one of {MODES}, got {mode!r}")
    fading = sim.get("fading", False)
    if not isinstance(fading, bool):
        raise ScenarioError("simulation.fading: expected true/false")
    name = doc.get("name", "")
    if not isinstance(name, str):
        raise ScenarioError("name: expected a string")
    kwargs = dict(
        trials=_number(sim, "trials", "simulation", False, 100_000, integer=True),
        seed=_number(sim, "seed", "simulation", False, 0, integer=True),
        bias_tol=_number(sim, "bias_tol", "simulation", False, 1e-3),
        window_radius=_number(sim, "window_radius", "simulation", False),
        y_max=_number(sim, "y_max", "simulation", False),
        max_rank=_number(sim, "max_rank", "simulation", False, 32, integer=True),
    )
    try:
        return ScenarioConfig(model, shadowing, fading, mode, name=name, **kwargs)
    except ValueError as exc:
        raise ScenarioError(f"simulation: {exc}") from None


def serialize_scenario(cfg: ScenarioConfig) -> str:
    m = cfg.model
    shadowing = {"kind": cfg.shadowing.kind}
    if cfg.shadowing.sigma_db is not None:
        shadowing["sigma_db"] = cfg.shadowing.sigma_db
    doc = {
        "name": cfg.name,
        "model": {"lambda": m.lam, "K": m.K, "beta": m.beta, "W": m.W, "s_moment": m.s_moment},
        "shadowing": shadowing,
        "simulation": {
            "mode": cfg.mode, "fading": cfg.fading, "trials": cfg.trials, "seed": cfg.seed,
            "bias_tol": cfg.bias_tol, "window_radius": cfg.window_radius, "y_max": cfg.y_max,
            "max_rank": cfg.max_rank,
        },
    }
    return json.dumps(doc, indent=2) + "\n"


def preset_text(name: str) -> str:
    if name not in PRESETS:
        raise ScenarioError(f"unknown preset {name!r}; available: {', '.join(PRESETS)}")
    return resources.files("multicov").joinpath("scenarios", f"{name}.json").read_text()


def load_preset(name: str) -> ScenarioConfig:
    """Bundled urban/suburban scenario."""
    return parse_scenario(preset_text(name))


def load_scenario(source: Union[str, Path]) -> ScenarioConfig:
    """Read a scenario file; a bare preset name is also accepted."""
    path = Path(source)
    if path.is_file():
        return parse_scenario(path.read_text())
    if str(source) in PRESETS:
        return load_preset(str(source))
    raise ScenarioError(f"scenario file not found: {source}")
