"""Phase-space portrait of the truncated state and the classical baselines.

Compares the scissors output with two states a classical device could make:
the fully dephased truncation and a coherent state with optimized amplitude.
Then looks at the Wigner function, its marginals and the Wigner phase
distribution.

Run with ``python demos/04_phase_space.py``.
"""

import math

import numpy as np

from qscissors import (
    DetectorModel,
    PhaseSpaceGrid,
    QsdConfig,
    desired_state,
    fidelity_coherent_baseline,
    fidelity_dephased,
    negativity,
    optimal_beta,
    realistic_truncation,
    wigner,
    wigner_marginals,
    wigner_phase_distribution,
)

alpha = math.sqrt(0.8) * 1j

beta = optimal_beta(alpha)
print(f"|alpha|^2 = 0.8: optimal coherent |beta|^2 = {abs(beta) ** 2:.4f}, "
      f"F = {fidelity_coherent_baseline(alpha, beta):.4f}")
print(f"dephased truncation: F = {fidelity_dephased(alpha):.4f}")

grid = PhaseSpaceGrid()
for eta in (1.0, 0.7, 0.3):
    d = DetectorModel.cpc(eta=eta)
    result = realistic_truncation(QsdConfig(alpha=alpha, d1=d, d2=d, d3=d))
    low, volume = negativity(wigner(result.state, grid), grid)
    print(f"CPC eta = {eta}: F = {result.fidelity_to_desired:.4f}, min W = {low:.4f}, negative volume = {volume:.4f}")

# Negativity is the nonclassical signature: no coherent state and no mixture
# of them has a negative Wigner function.
ideal = desired_state(alpha, 3)
x, marginal = wigner_marginals(ideal, "integrate_X")
print(f"\nideal state: P-quadrature marginal peaks at P = {x[np.argmax(marginal)]:.2f}")

# Phase distribution of the ideal truncated state: a cosine on a flat
# background, dipping below zero opposite the coherent phase.
theta, P = wigner_phase_distribution(desired_state(1.0, 3))
print(f"phase distribution at |alpha|^2 = 1: max {P.max():.4f} at theta = {theta[np.argmax(P)]:.2f}, "
      f"min {P.min():.4f} at theta = {theta[np.argmin(P)]:.2f}")
