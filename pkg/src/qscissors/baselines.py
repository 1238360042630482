"""Target state and the two classical comparison states for truncation.

The comparison states are the fully dephased truncation
``N(|0><0| + |alpha|^2 |1><1|)`` and an attenuated coherent state
``|sqrt(xi) alpha>`` sent straight to the output.
"""

import cmath
import math

import numpy as np

from .fock import BasisIndexer, PureState, check_cutoff

__all__ = [
    "desired_state",
    "fidelity_dephased",
    "fidelity_coherent_baseline",
    "optimal_beta",
    "optimal_attenuation",
]


def desired_state(alpha, n_max=2):
    """``(|0> + alpha |1>) / sqrt(1 + |alpha|^2)`` embedded in ``n_max`` levels."""
    n_max = check_cutoff(n_max)
    amps = np.zeros(n_max, dtype=complex)
    amps[0] = 1.0
    amps[1] = alpha
    return PureState(amps / math.sqrt(1.0 + abs(alpha) ** 2), BasisIndexer(1, n_max))


def fidelity_dephased(alpha):
    n = abs(alpha) ** 2
    return (1.0 + n * n) / (1.0 + n) ** 2


def fidelity_coherent_baseline(alpha, beta, delta=None):
    """Fidelity of ``|beta>`` to the desired state.

    ``delta`` is the phase of ``alpha`` relative to ``beta``; by default it is
    taken from the complex arguments of the two amplitudes.
    """
    if delta is None:
        delta = cmath.phase(alpha) - cmath.phase(beta) if alpha and beta else 0.0
    ab = abs(alpha) * abs(beta)
    return math.exp(-abs(beta) ** 2) * (1.0 + 2.0 * ab * math.cos(delta) + ab * ab) / (1.0 + abs(alpha) ** 2)


def optimal_beta(alpha):
    """Coherent amplitude maximizing :func:`fidelity_coherent_baseline`.

    ``|beta|^2 = (1 + 2|alpha|^2 - sqrt(1 + 4|alpha|^2)) / (2|alpha|^2)`` with the
    phase of ``alpha``; tends to ``|alpha|^2`` as ``alpha -> 0``.
    """
    n = abs(alpha) ** 2
    # rationalized form of the closed expression; free of cancellation at small n
    beta2 = 2.0 * n / (1.0 + 2.0 * n + math.sqrt(1.0 + 4.0 * n))
    return math.sqrt(beta2) * cmath.exp(1j * cmath.phase(alpha)) if alpha else 0j


def optimal_attenuation(alpha):
    """Attenuation ``xi = |beta_opt|^2 / |alpha|^2`` (1 in the ``alpha -> 0`` limit)."""
    n = abs(alpha) ** 2
    if n == 0:
        return 1.0
    return abs(optimal_beta(alpha)) ** 2 / n
