"""Realistic scissors: down-conversion source and imperfect photon counters.

The single photon now comes from a heralded down-conversion source with pair
probability gamma^2 = 5e-4. All three detectors have finite efficiency eta and
dark counts. Conventional counters (CPC) only tell click from no click.
Single-photon counters (SPC) also separate one click from two or more.

Run with ``python demos/02_realistic_detectors.py``.
"""

import math

from qscissors import DetectorModel, QsdConfig, realistic_truncation

alpha = math.sqrt(1.0)

print("CPC, R_dark = 100/s: efficiency sweep at |alpha|^2 = 1")
print("  eta    F       rate (1/s)")
for eta in (1.0, 0.7, 0.5, 0.3, 0.1, 0.0):
    d = DetectorModel.cpc(eta=eta)
    result = realistic_truncation(QsdConfig(alpha=alpha, d1=d, d2=d, d3=d))
    print(f"  {eta:.1f}   {result.fidelity_to_desired:.4f}  {result.rate_per_second:9.1f}")
# At eta = 0 every click is a dark count and the output is the phase-free
# mixture of |0> and |1>: F = 1/2.

print("\nSPC, eta = 0.7: dark-count sweep")
print("  |alpha|^2  R_dark   F")
for alpha2 in (0.4, 1.0):
    for r_dark in (100.0, 1e3, 1e4):
        d = DetectorModel.spc(eta=0.7, r_dark=r_dark)
        F = realistic_truncation(QsdConfig(alpha=math.sqrt(alpha2), d1=d, d2=d, d3=d)).fidelity_to_desired
        print(f"  {alpha2:<9}  {r_dark:6g}   {F:.4f}")

# With SPC detectors the (one, two-or-more, one) pattern is also usable: its
# state needs no sign correction (D3 did not count more than D2).
spc = DetectorModel.spc()
result = realistic_truncation(QsdConfig(alpha=alpha, d1=spc, d2=spc, d3=spc), pattern=(1, 2, 1))
print(f"\nSPC pattern (1, 2, 1): F = {result.fidelity_to_desired:.3f}, {result.rate_per_second:.0f} heralds/s")

# The Fock cutoff is chosen automatically from the coherent-state tail.
for alpha2 in (0.4, 1.0, 4.0):
    print(f"automatic cutoff at |alpha|^2 = {alpha2}: n_max = {QsdConfig(alpha=math.sqrt(alpha2)).n_max}")
