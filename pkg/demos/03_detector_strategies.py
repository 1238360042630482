"""Which detector goes where: four assignments of CPC and SPC to D1 and D2.

Strategy a: D1 = CPC, D2 = SPC
Strategy b: D1 = CPC, D2 = CPC
Strategy c: D1 = SPC, D2 = SPC
Strategy d: D1 = SPC, D2 = CPC
D3 is a CPC in every case. Efficiency is 0.7 throughout; CPCs have 100 dark
counts/s and SPCs 1e4.

Run with ``python demos/03_detector_strategies.py``.
"""

import math

from qscissors import run_strategy

print("|alpha|^2   " + "   ".join(f"F_{s}    rate_{s}" for s in "abcd"))
for alpha2 in (0.2, 0.6, 1.0, 2.0):
    cells = []
    for strategy in "abcd":
        result = run_strategy(strategy, alpha=math.sqrt(alpha2))
        cells.append(f"{result.fidelity_to_desired:.3f} {result.rate_per_second:8.0f}")
    print(f"  {alpha2:<8} " + "  ".join(cells))

# The heralding detector dominates: its dark counts announce photons that are
# not there, and the output then carries the coherent-state part only. The
# quiet CPC on D1 (strategies a and b) therefore beats the noisy SPC.
