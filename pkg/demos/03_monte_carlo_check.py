"""Analytic curves against the built-in simulator.

Runs 20 000 projected-process trials of the suburban scenario and prints
z-scores of the analytic coverage probability with and without fading.
The same check at full scale is ``multicov validate``.

    python demos/03_monte_carlo_check.py
"""
from dataclasses import replace

from multicov import load_preset
from multicov.validation import db_grid, validate_curve

cfg = replace(load_preset("suburban"), trials=20_000, seed=7)
grid = db_grid(-10, 20, 5)
for quantity in ("k_coverage", "fading"):
    report = validate_curve(cfg, grid, quantity)
    print(report.to_text())
