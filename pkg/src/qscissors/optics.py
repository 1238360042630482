"""Optical sources and linear elements in the truncated Fock basis.

Beam-splitter convention: with parameters ``(t, r)`` acting on input modes
``(a, b)`` the creation operators map as

    a^dag -> t a'^dag - conj(r) b'^dag
    b^dag -> r a'^dag + conj(t) b'^dag

and the output modes keep the positions of the inputs. The first splitter of
the scissors acts on ``(a1, a2) -> (b1, b2)``; the second on
``(b3, b2) -> (c3, c2)``, i.e. the coherent input is the ``a`` slot.

The coherent-state expansion uses the normalized coefficients
``exp(-|alpha|^2/2) alpha^n / sqrt(n!)``.
"""

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import CutoffTooSmallError, UsageError
from .fock import BasisIndexer, DensityOperator, PureState, check_cutoff

__all__ = [
    "BeamSplitterParams",
    "SpdcParams",
    "SinglePairSource",
    "coherent_state",
    "coherent_tail",
    "required_cutoff",
    "beam_splitter_unitary",
    "apply_beam_splitter",
    "apply_beam_splitter_pure",
    "spdc_pure",
    "spdc_mixed",
    "attenuate",
]

DEFAULT_TAIL_TOL = 1e-10


@dataclass(frozen=True)
class BeamSplitterParams:
    t: complex
    r: complex

    def __post_init__(self):
        t, r = complex(self.t), complex(self.r)
        if abs(abs(t) ** 2 + abs(r) ** 2 - 1.0) > 1e-12:
            raise UsageError(f"|t|^2 + |r|^2 = {abs(t) ** 2 + abs(r) ** 2!r}, expected 1")
        object.__setattr__(self, "t", t)
        object.__setattr__(self, "r", r)

    @classmethod
    def from_transmittance(cls, transmittance):
        """Splitter with real ``t`` and imaginary ``r = i|r|``."""
        if not 0.0 <= transmittance <= 1.0:
            raise UsageError(f"transmittance {transmittance} outside [0, 1]")
        return cls(math.sqrt(transmittance), 1j * math.sqrt(1.0 - transmittance))

    @classmethod
    def balanced(cls):
        return cls.from_transmittance(0.5)

    @property
    def transmittance(self):
        return abs(self.t) ** 2

    def inverse(self):
        return BeamSplitterParams(self.t.conjugate(), -self.r)


@dataclass(frozen=True)
class SpdcParams:
    """Two-mode squeezed vacuum from down-conversion, ``gamma = tanh|kappa tau|``."""

    gamma: float
    pump_phase: float = 0.0
    pair_cutoff: int = 3

    def __post_init__(self):
        if not 0.0 <= self.gamma < 1.0:
            raise UsageError(f"gamma must lie in [0, 1), got {self.gamma}")
        if self.pair_cutoff < 1:
            raise UsageError("pair_cutoff must be >= 1")

    @classmethod
    def from_pair_probability(cls, gamma2, **kwargs):
        return cls(math.sqrt(gamma2), **kwargs)

    @property
    def gamma2(self):
        return self.gamma**2

    @property
    def tail_bound(self):
        """Weight of the discarded pair terms before renormalization."""
        return self.gamma ** (2 * (self.pair_cutoff + 1))

    def pair_weights(self):
        k = np.arange(self.pair_cutoff + 1)
        w = (1.0 - self.gamma2) * self.gamma2**k
        return w / w.sum()


@dataclass(frozen=True)
class SinglePairSource:
    """Ideal heralded source emitting exactly one pair per pulse."""

    pair_cutoff: int = 1

    def pair_weights(self):
        w = np.zeros(self.pair_cutoff + 1)
        w[1] = 1.0
        return w


def coherent_tail(alpha, n_max):
    """Poisson mass of ``|alpha>`` on levels ``>= n_max``."""
    mean = abs(alpha) ** 2
    if mean == 0.0:
        return 0.0
    # summed from the far tail upward to avoid cancellation in 1 - cdf
    n = np.arange(n_max, n_max + 200 + int(10 * mean))
    logp = -mean + n * math.log(mean) - np.array([math.lgamma(k + 1) for k in n])
    return float(np.exp(logp).sum())


def required_cutoff(alpha, tol=DEFAULT_TAIL_TOL):
    n = 2
    while coherent_tail(alpha, n) >= tol:
        n += 1
    return n


def coherent_state(alpha, n_max, tol=DEFAULT_TAIL_TOL):
    n_max = check_cutoff(n_max)
    tail = coherent_tail(alpha, n_max)
    if tail >= tol:
        need = required_cutoff(alpha, tol)
        raise CutoffTooSmallError(
            f"coherent state |alpha|^2={abs(alpha) ** 2:g} loses {tail:.2e} beyond n_max={n_max}; "
            f"n_max={need} required",
            need,
        )
    amps = np.zeros(n_max, dtype=complex)
    if alpha == 0:
        amps[0] = 1.0
    else:
        n = np.arange(n_max)
        log_mag = -0.5 * abs(alpha) ** 2 + n * math.log(abs(alpha)) - 0.5 * np.array([math.lgamma(k + 1) for k in n])
        amps = np.exp(log_mag + 1j * n * np.angle(alpha))
    return PureState(amps, BasisIndexer(1, n_max))


@lru_cache(maxsize=64)
def _unitary_tensor(t, r, n_max):
    # out[p, q, na, nb] = <p, q| U |na, nb>, built block by block from
    # (t x - r* y)^na (r x + t* y)^nb |00> / sqrt(na! nb!)
    lf = [math.lgamma(k + 1) for k in range(2 * n_max)]
    U = np.zeros((n_max,) * 4, dtype=complex)
    for na in range(n_max):
        pa = np.array([math.comb(na, j) * t**j * (-r.conjugate()) ** (na - j) for j in range(na + 1)])
        for nb in range(n_max):
            pb = np.array([math.comb(nb, j) * r**j * t.conjugate() ** (nb - j) for j in range(nb + 1)])
            poly = np.convolve(pa, pb)
            total = na + nb
            for p in range(max(0, total - n_max + 1), min(total, n_max - 1) + 1):
                q = total - p
                scale = math.exp(0.5 * (lf[p] + lf[q] - lf[na] - lf[nb]))
                U[p, q, na, nb] = poly[p] * scale
    U.setflags(write=False)
    return U


def beam_splitter_unitary(params, n_max):
    """Two-mode matrix ``<p q|U|n_a n_b>`` on the ``n_max**2`` box.

    Blocks of fixed total photon number ``< n_max`` are exactly unitary;
    higher blocks are cut by the box and lose norm.
    """
    n_max = check_cutoff(n_max)
    return _unitary_tensor(params.t, params.r, n_max).reshape(n_max**2, n_max**2)


def _check_modes(mode_count, mode_a, mode_b):
    for m in (mode_a, mode_b):
        if not 0 <= m < mode_count:
            raise UsageError(f"mode {m} outside range 0..{mode_count - 1}")
    if mode_a == mode_b:
        raise UsageError("beam splitter needs two distinct modes")


def _apply_to_axes(tensor, U, ax_a, ax_b):
    moved = np.moveaxis(tensor, (ax_a, ax_b), (0, 1))
    out = np.tensordot(U, moved, axes=([2, 3], [0, 1]))
    return np.moveaxis(out, (0, 1), (ax_a, ax_b))


def apply_beam_splitter_pure(psi, mode_a, mode_b, params):
    _check_modes(psi.mode_count, mode_a, mode_b)
    U = _unitary_tensor(params.t, params.r, psi.n_max)
    return PureState.from_tensor(_apply_to_axes(psi.as_tensor(), U, mode_a, mode_b))


def apply_beam_splitter(rho, mode_a, mode_b, params):
    """``U rho U^dag`` with the splitter acting on ``(mode_a, mode_b)``."""
    k = rho.mode_count
    _check_modes(k, mode_a, mode_b)
    U = _unitary_tensor(params.t, params.r, rho.n_max)
    tensor = _apply_to_axes(rho.as_tensor(), U, mode_a, mode_b)
    tensor = _apply_to_axes(tensor, U.conj(), k + mode_a, k + mode_b)
    return DensityOperator.from_tensor(tensor)


def spdc_pure(params, n_max):
    """``sqrt(1-g^2) sum_k (g e^{i theta})^k |k>|k>``, renormalized after ``pair_cutoff``."""
    n_max = check_cutoff(n_max)
    if params.pair_cutoff >= n_max:
        raise UsageError(f"pair_cutoff {params.pair_cutoff} must be below n_max {n_max}")
    amps = np.zeros((n_max, n_max), dtype=complex)
    phase = np.exp(1j * params.pump_phase)
    for k, w in enumerate(params.pair_weights()):
        amps[k, k] = math.sqrt(w) * phase**k
    return PureState.from_tensor(amps)


def spdc_mixed(params, n_max):
    """Pump-phase average of :func:`spdc_pure`: diagonal in pair number."""
    n_max = check_cutoff(n_max)
    if params.pair_cutoff >= n_max:
        raise UsageError(f"pair_cutoff {params.pair_cutoff} must be below n_max {n_max}")
    indexer = BasisIndexer(2, n_max)
    diag = np.zeros(indexer.dim)
    for k, w in enumerate(params.pair_weights()):
        diag[indexer.flat_index((k, k))] = w
    return DensityOperator(np.diag(diag).astype(complex), indexer)


def attenuate(alpha, xi):
    if not 0.0 <= xi <= 1.0:
        raise UsageError(f"attenuation xi must lie in [0, 1], got {xi}")
    return math.sqrt(xi) * complex(alpha)
