"""Multiple coverage below 0 dB.

For T < 1 a user may be covered by several stations at once. This script
prints the coverage-number distribution, the k-coverage probabilities and
the mean coverage number for a few thresholds in the urban scenario.

    python demos/02_multiple_coverage.py
"""
import math

from multicov import coverage_pgf, coverage_pmf, expected_coverage, k_coverage_probability, load_preset
from multicov.coverage import symmetric_sums

model = load_preset("urban").model

for T in (0.1, 0.25, 0.5):
    kmax = math.ceil(1 / T)
    sums = symmetric_sums(T, model)
    print(f"\nT = {T}  ({10 * math.log10(T):.1f} dB), at most {kmax} covering stations")
    print("  symmetric sums S_n:", ", ".join(f"{s:.3g}" for s in sums[1:]))
    for k in range(kmax + 1):
        tail = k_coverage_probability(k, T, model) if k else 1.0
        print(f"  k={k:2d}  P(N=k)={coverage_pmf(k, T, model):.5f}  P(N>=k)={tail:.5f}")
    print(f"  E[N] = {expected_coverage(T, model):.4f},  E[0.5^N] = {coverage_pgf(0.5, T, model):.4f}")
