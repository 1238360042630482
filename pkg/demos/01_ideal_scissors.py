"""Ideal quantum scissors: truncating a coherent state to its first two Fock levels.

A single photon on BS1 and a coherent state on BS2, followed by perfect photon
counting, leave the output mode in a superposition of |0> and |1>. This script
shows which splitter settings give the exact truncation and how often it
succeeds.

Run with ``python demos/01_ideal_scissors.py``.
"""

import numpy as np

from qscissors import (
    BeamSplitterParams,
    desired_state,
    fidelity_to_pure,
    ideal_detection_probability,
    ideal_fidelity,
    ideal_truncated_state,
    sigma_z_correct,
)

T = BeamSplitterParams.from_transmittance
alpha = 1.0

# Balanced splitters: the heralded state is exactly (|0> + alpha|1>)/sqrt(2).
psi = ideal_truncated_state(alpha, T(0.5), T(0.5))
print("output amplitudes:", np.round(psi.amplitudes[:2], 6))
print("fidelity:", ideal_fidelity(alpha, T(0.5), T(0.5)))
print("heralding probability per pulse:", round(ideal_detection_probability(alpha, T(0.5), T(0.5)), 4))

# Fidelity over splitter transmittances: perfect along |t1|^2 = |t2|^2.
grid = np.linspace(0.1, 0.9, 5)
print("\nF(|t1|^2 rows, |t2|^2 columns) at |alpha|^2 = 1")
for T1 in grid:
    print(f"  {T1:.1f}  " + "  ".join(f"{ideal_fidelity(alpha, T(T1), T(T2)):.3f}" for T2 in grid))

# Equal splitters keep F = 1 but trade off success rate.
print("\n|t|^2   P_detection")
for t2 in (0.1, 0.3, 0.5, 0.7, 0.9):
    print(f"  {t2:.1f}   {ideal_detection_probability(alpha, T(t2), T(t2)):.4f}")

# The other single-click outcome flips the sign of the |1> amplitude; a
# sigma_z phase flip on the output restores it.
flipped = ideal_truncated_state(alpha, T(0.5), T(0.5), outcome=(0, 1))
target = desired_state(alpha)
print("\n(0,1) outcome, raw fidelity:", round(fidelity_to_pure(flipped.density(), target), 6))
print("(0,1) outcome, after sigma_z:", round(fidelity_to_pure(sigma_z_correct(flipped).density(), target), 6))
