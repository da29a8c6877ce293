"""Distribution of the SINR from the strongest station, urban and suburban.

Prints 1 - P_c(T) with and without Rayleigh fading, plus the noise-free
(SIR) curve. In the dense urban network SINR and SIR coincide; in the
sparse suburban one the noise shifts the curve.

    python demos/01_sinr_distribution.py
"""
import numpy as np

from multicov import fading_coverage_probability, k_coverage_probability, load_preset

grid_db = np.arange(-10, 20.1, 3.0)

for name in ("urban", "suburban"):
    model = load_preset(name).model
    sir_model = model.with_noise(0.0)
    print(f"\n{name}: lambda = {model.lam} /km^2")
    print(f"{'T [dB]':>7} {'SINR cdf':>9} {'SIR cdf':>9} {'fading':>9}")
    for t_db in grid_db:
        T = 10 ** (t_db / 10)
        sinr = 1 - k_coverage_probability(1, T, model)
        sir = 1 - k_coverage_probability(1, T, sir_model)
        fad = 1 - fading_coverage_probability(T, model)
        print(f"{t_db:7.1f} {sinr:9.4f} {sir:9.4f} {fad:9.4f}")
