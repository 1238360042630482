"""Quantum scissors simulation: the ideal analytic path and the realistic one.

Realistic path: a down-conversion source feeds the idler ``c1`` to the
heralding detector D1 and the signal ``a1`` to BS1 (second input in vacuum).
Output ``b2`` meets the coherent input ``b3`` on BS2, whose outputs ``c2`` and
``c3`` go to D2 and D3. The state left in ``b1`` is conditioned on the click
pattern ``(n1, n2, n3)``.
"""

import dataclasses
import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Union

import numpy as np

from .baselines import desired_state
from .detectors import DEFAULT_REP_RATE, DetectorKind, DetectorModel, normalize_outcome, povm
from .errors import DegenerateConfigurationError, ImpossibleOutcomeError, UsageError
from .fock import (
    BasisIndexer,
    DensityOperator,
    PureState,
    apply_diagonal_povm,
    fidelity_to_pure,
    fock_state,
    partial_trace,
    tensor_product,
    vacuum,
)
from .optics import (
    DEFAULT_TAIL_TOL,
    BeamSplitterParams,
    SinglePairSource,
    SpdcParams,
    apply_beam_splitter,
    apply_beam_splitter_pure,
    coherent_state,
    required_cutoff,
    spdc_mixed,
)

__all__ = [
    "QsdConfig",
    "ClickPattern",
    "TruncationResult",
    "STRATEGIES",
    "ideal_truncated_state",
    "ideal_fidelity",
    "ideal_detection_probability",
    "sigma_z_correct",
    "needs_correction",
    "realistic_truncation",
    "detection_rate",
    "strategy_detectors",
    "run_strategy",
]

IMPOSSIBLE_PROBABILITY = 1e-300

# detector kinds for (D1, D2); D3 only enters through its no-click weight
STRATEGIES = {
    "a": (DetectorKind.CPC, DetectorKind.SPC),
    "b": (DetectorKind.CPC, DetectorKind.CPC),
    "c": (DetectorKind.SPC, DetectorKind.SPC),
    "d": (DetectorKind.SPC, DetectorKind.CPC),
}


@dataclass(frozen=True)
class QsdConfig:
    alpha: complex
    bs1: BeamSplitterParams = field(default_factory=BeamSplitterParams.balanced)
    bs2: BeamSplitterParams = field(default_factory=BeamSplitterParams.balanced)
    source: Union[SpdcParams, SinglePairSource] = field(
        default_factory=lambda: SpdcParams.from_pair_probability(5e-4)
    )
    d1: DetectorModel = field(default_factory=DetectorModel.cpc)
    d2: DetectorModel = field(default_factory=DetectorModel.cpc)
    d3: DetectorModel = field(default_factory=DetectorModel.cpc)
    cutoff: Optional[int] = None
    rep_rate: float = DEFAULT_REP_RATE
    tail_tol: float = DEFAULT_TAIL_TOL

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        if self.rep_rate <= 0:
            raise UsageError("rep_rate must be positive")
        if self.cutoff is not None and self.cutoff <= self.source.pair_cutoff:
            raise UsageError(f"cutoff {self.cutoff} must exceed pair_cutoff {self.source.pair_cutoff}")

    @property
    def n_max(self):
        """Working cutoff; chosen automatically unless ``cutoff`` is set.

        The automatic value keeps the coherent tail below ``tail_tol`` even after
        the splitter adds up to ``pair_cutoff`` photons to the same block.
        """
        if self.cutoff is not None:
            return self.cutoff
        return max(required_cutoff(self.alpha, self.tail_tol), 2) + self.source.pair_cutoff

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


class ClickPattern(NamedTuple):
    n1: int
    n2: int
    n3: int

    @classmethod
    def for_config(cls, config, labels):
        n1, n2, n3 = labels
        return cls(
            normalize_outcome(config.d1.kind, n1),
            normalize_outcome(config.d2.kind, n2),
            normalize_outcome(config.d3.kind, n3),
        )


@dataclass(frozen=True)
class TruncationResult:
    state: DensityOperator
    probability_per_pulse: float
    rate_per_second: float
    fidelity_to_desired: float
    corrected: bool
    pattern: ClickPattern


def _desired_amplitudes(alpha, bs1, bs2, outcome):
    t1, r1, t2, r2 = bs1.t, bs1.r, bs2.t, bs2.r
    if tuple(outcome) == (1, 0):
        return (r1 * t2).conjugate(), r2.conjugate() * t1 * alpha
    if tuple(outcome) == (0, 1):
        return r1.conjugate() * r2, -t1 * t2 * alpha
    raise UsageError(f"ideal outcome must be (1, 0) or (0, 1), got {outcome}")


def ideal_truncated_state(alpha, bs1, bs2, outcome=(1, 0), n_max=2):
    """Output of a perfect scissors after ``outcome`` = (D2 count, D3 count)."""
    c0, c1 = _desired_amplitudes(complex(alpha), bs1, bs2, outcome)
    norm = math.sqrt(abs(c0) ** 2 + abs(c1) ** 2)
    if norm < 1e-300:
        raise DegenerateConfigurationError(f"outcome {outcome} cannot occur for these splitters")
    amps = np.zeros(n_max, dtype=complex)
    amps[:2] = c0 / norm, c1 / norm
    return PureState(amps, BasisIndexer(1, n_max))


def ideal_fidelity(alpha, bs1, bs2):
    """Closed-form fidelity of the (1, 0) output to the desired state."""
    alpha = complex(alpha)
    n = abs(alpha) ** 2
    a = abs(bs1.r * bs2.t) ** 2
    b = abs(bs1.t * bs2.r) ** 2
    if a + n * b == 0.0:
        raise DegenerateConfigurationError("outcome (1, 0) cannot occur for these splitters")
    r1, t1, r2, t2 = bs1.r, bs1.t, bs2.r, bs2.t
    cross = (r1.conjugate() * r2 * t1.conjugate() * t2.conjugate() + r1 * r2.conjugate() * t1 * t2).real
    return (a + n * cross + n * n * b) / ((a + n * b) * (1.0 + n))


def ideal_detection_probability(alpha, bs1, bs2, outcome=(1, 0)):
    c0, c1 = _desired_amplitudes(complex(alpha), bs1, bs2, outcome)
    return (abs(c0) ** 2 + abs(c1) ** 2) * math.exp(-abs(alpha) ** 2)


def sigma_z_correct(state):
    """Flip the sign of odd Fock levels of a single-mode state."""
    if state.mode_count != 1:
        raise UsageError("sigma_z correction acts on a single mode")
    parity = (-1.0) ** np.arange(state.n_max)
    if isinstance(state, PureState):
        return PureState(state.amplitudes * parity, state.indexer)
    return DensityOperator(state.matrix * np.outer(parity, parity), state.indexer)


def needs_correction(pattern):
    """True when D3 registered more than D2 (relative sign of the output flipped)."""
    return pattern.n3 > pattern.n2


def _conditioned_output_ensemble(config, weights, e1, e2, e3, n):
    coherent = coherent_state(config.alpha, n, config.tail_tol)
    rho = np.zeros((n, n), dtype=complex)
    for k, pk in enumerate(weights):
        w = pk * e1[k]
        if w == 0.0:
            continue
        after_bs1 = apply_beam_splitter_pure(fock_state((k, 0), n), 0, 1, config.bs1)
        out = apply_beam_splitter_pure(after_bs1 @ coherent, 2, 1, config.bs2).as_tensor()
        rho += w * np.einsum("ijk,ljk,j,k->il", out, out.conj(), e2, e3)
    return DensityOperator(rho, BasisIndexer(1, n))


def _conditioned_output_dense(config, e1, e2, e3, n):
    # modes (a1, c1, a2) -> BS1 -> (b1, c1, b2); D1 on c1
    rho = tensor_product(spdc_mixed(config.source, n), vacuum(n).density())
    rho = apply_beam_splitter(rho, 0, 2, config.bs1)
    rho, _ = apply_diagonal_povm(rho, 1, e1)
    rho = partial_trace(rho, {0, 2})
    # modes (b1, b2, b3) -> BS2 -> (b1, c2, c3)
    rho = tensor_product(rho, coherent_state(config.alpha, n, config.tail_tol).density())
    rho = apply_beam_splitter(rho, 2, 1, config.bs2)
    rho, _ = apply_diagonal_povm(rho, 1, e2)
    rho, _ = apply_diagonal_povm(rho, 2, e3)
    return partial_trace(rho, {0})


def realistic_truncation(config, pattern=(1, 1, 0), apply_correction=None, engine="ensemble"):
    """Conditional output state, heralding probability and fidelity.

    ``engine="ensemble"`` propagates each pair-number branch of the
    phase-averaged source as a pure state, which is exact because the source
    and all detector elements are Fock-diagonal. ``engine="dense"`` runs the
    same steps on full density operators and is only practical for small
    cutoffs. ``apply_correction=None`` applies the sigma_z fix exactly when
    :func:`needs_correction` says so.
    """
    pattern = ClickPattern.for_config(config, pattern)
    n = config.n_max
    e1, e2, e3 = (povm(d, label, n).diagonal for d, label in zip((config.d1, config.d2, config.d3), pattern))
    if engine == "ensemble":
        unnormalized = _conditioned_output_ensemble(config, config.source.pair_weights(), e1, e2, e3, n)
    elif engine == "dense":
        unnormalized = _conditioned_output_dense(config, e1, e2, e3, n)
    else:
        raise UsageError(f"unknown engine {engine!r}")
    probability = unnormalized.trace()
    if not probability > IMPOSSIBLE_PROBABILITY:
        raise ImpossibleOutcomeError(f"click pattern {tuple(pattern)} has probability {probability:.3e}")
    state = unnormalized.normalize()
    corrected = needs_correction(pattern) if apply_correction is None else bool(apply_correction)
    if corrected:
        state = sigma_z_correct(state)
    fidelity = fidelity_to_pure(state, desired_state(config.alpha, n))
    return TruncationResult(
        state=state,
        probability_per_pulse=probability,
        rate_per_second=probability * config.rep_rate,
        fidelity_to_desired=fidelity,
        corrected=corrected,
        pattern=pattern,
    )


def detection_rate(result, config):
    """Heralded output states per second."""
    return result.probability_per_pulse * config.rep_rate


def strategy_detectors(strategy, eta=0.7, cpc_dark=100.0, spc_dark=1e4, d3_kind=DetectorKind.CPC):
    if strategy not in STRATEGIES:
        raise UsageError(f"unknown strategy {strategy!r}; choose from {sorted(STRATEGIES)}")

    def make(kind):
        dark = cpc_dark if DetectorKind(kind) is DetectorKind.CPC else spc_dark
        return DetectorModel(kind, eta, dark)

    k1, k2 = STRATEGIES[strategy]
    return make(k1), make(k2), make(d3_kind)


def run_strategy(strategy, config=None, *, eta=0.7, cpc_dark=100.0, spc_dark=1e4, d3_kind=DetectorKind.CPC, **overrides):
    """Realistic truncation with the detector assignment of ``strategy`` (a-d).

    ``config`` supplies everything except the detectors; keyword ``overrides``
    replace individual :class:`QsdConfig` fields.
    """
    d1, d2, d3 = strategy_detectors(strategy, eta, cpc_dark, spc_dark, d3_kind)
    base = config if config is not None else QsdConfig(alpha=overrides.pop("alpha", 1.0))
    config = base.replace(d1=d1, d2=d2, d3=d3, **overrides)
    return realistic_truncation(config, (1, 1, 0))
