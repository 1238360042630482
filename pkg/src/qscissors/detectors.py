"""Photon-counting detector POVMs with finite efficiency and dark counts.

All three detector models are diagonal in the Fock basis, so a POVM element
is stored as its vector of weights on levels ``0 .. n_max-1``. Dead time is
not simulated: its effect is folded into the efficiency ``eta``.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import UsageError
from .fock import check_cutoff

__all__ = [
    "DetectorKind",
    "DetectorModel",
    "PovmElement",
    "povm_pndc",
    "povm_cpc",
    "povm_spc",
    "povm",
    "outcome_labels",
    "normalize_outcome",
    "pndc_click_limit",
]

DEFAULT_TAU_RES = 10e-9
DEFAULT_REP_RATE = 100e6


class DetectorKind(str, enum.Enum):
    PNDC = "PNDC"  # resolves the click number
    CPC = "CPC"  # click / no click
    SPC = "SPC"  # zero / one / two or more

    def __str__(self):
        return self.value


_NAMED_OUTCOMES = {
    DetectorKind.CPC: {"no_click": 0, "click": 1},
    DetectorKind.SPC: {"zero": 0, "one": 1, "two_or_more": 2},
}


@dataclass(frozen=True)
class DetectorModel:
    kind: DetectorKind
    eta: float
    r_dark: float = 0.0
    tau_res: float = DEFAULT_TAU_RES

    def __post_init__(self):
        object.__setattr__(self, "kind", DetectorKind(str(self.kind).upper()))
        if not 0.0 <= self.eta <= 1.0:
            raise UsageError(f"efficiency eta must lie in [0, 1], got {self.eta}")
        if self.r_dark < 0 or self.tau_res < 0:
            raise UsageError("dark-count rate and resolution time must be non-negative")

    @property
    def nu(self):
        """Mean number of dark counts per resolution window."""
        return self.tau_res * self.r_dark

    @classmethod
    def cpc(cls, eta=0.7, r_dark=100.0, tau_res=DEFAULT_TAU_RES):
        return cls(DetectorKind.CPC, eta, r_dark, tau_res)

    @classmethod
    def spc(cls, eta=0.7, r_dark=1e4, tau_res=DEFAULT_TAU_RES):
        return cls(DetectorKind.SPC, eta, r_dark, tau_res)

    @classmethod
    def pndc(cls, eta=1.0, r_dark=0.0, tau_res=DEFAULT_TAU_RES):
        return cls(DetectorKind.PNDC, eta, r_dark, tau_res)

    def replace(self, **changes):
        fields = dict(kind=self.kind, eta=self.eta, r_dark=self.r_dark, tau_res=self.tau_res)
        fields.update(changes)
        return DetectorModel(**fields)


@dataclass(frozen=True, eq=False)
class PovmElement:
    diagonal: np.ndarray
    outcome_label: object

    def __post_init__(self):
        diag = np.array(self.diagonal, dtype=float)
        diag.setflags(write=False)
        object.__setattr__(self, "diagonal", diag)

    @property
    def n_max(self):
        return self.diagonal.size


def normalize_outcome(kind, label):
    """Map a click label (int or name such as ``"click"``) to its integer class."""
    kind = DetectorKind(str(kind).upper())
    if isinstance(label, str):
        key = label.strip().lower()
        named = _NAMED_OUTCOMES.get(kind, {})
        if key in named:
            return named[key]
        if key.isdigit():
            label = int(key)
        else:
            raise UsageError(f"unknown outcome {label!r} for {kind} detector")
    label = int(label)
    top = {DetectorKind.CPC: 1, DetectorKind.SPC: 2}.get(kind)
    if label < 0 or (top is not None and label > top):
        raise UsageError(f"outcome {label} not available on a {kind} detector")
    return label


def _expect(model, kind):
    if model.kind is not kind:
        raise UsageError(f"expected a {kind} detector, got {model.kind}")


def _no_click(model, n_max):
    m = np.arange(n_max)
    return math.exp(-model.nu) * (1.0 - model.eta) ** m


def povm_pndc(clicks, model, n_max):
    """Element for exactly ``clicks`` counts: real photons thinned binomially, dark counts Poissonian."""
    _expect(model, DetectorKind.PNDC)
    n_max = check_cutoff(n_max)
    clicks = normalize_outcome(DetectorKind.PNDC, clicks)
    eta, nu = model.eta, model.nu
    diag = np.zeros(n_max)
    for m in range(n_max):
        total = 0.0
        for n in range(min(clicks, m) + 1):
            dark = math.exp(-nu) * nu ** (clicks - n) / math.factorial(clicks - n)
            total += dark * math.comb(m, n) * eta**n * (1.0 - eta) ** (m - n)
        diag[m] = total
    return PovmElement(diag, clicks)


def povm_cpc(outcome, model, n_max):
    _expect(model, DetectorKind.CPC)
    n_max = check_cutoff(n_max)
    outcome = normalize_outcome(DetectorKind.CPC, outcome)
    none = _no_click(model, n_max)
    return PovmElement(none if outcome == 0 else 1.0 - none, outcome)


def povm_spc(outcome, model, n_max):
    """Zero / one / two-or-more classes.

    The one-click weight at level ``m`` is
    ``e^-nu [nu (1-eta)^m + eta m (1-eta)^(m-1)]``.
    """
    _expect(model, DetectorKind.SPC)
    n_max = check_cutoff(n_max)
    outcome = normalize_outcome(DetectorKind.SPC, outcome)
    m = np.arange(n_max)
    eta, nu = model.eta, model.nu
    none = _no_click(model, n_max)
    lower = np.where(m >= 1, (1.0 - eta) ** np.maximum(m - 1, 0), 0.0)
    one = math.exp(-nu) * (nu * (1.0 - eta) ** m + eta * m * lower)
    diag = (none, one, 1.0 - none - one)[outcome]
    return PovmElement(diag, outcome)


def povm(model, outcome, n_max):
    builder = {
        DetectorKind.PNDC: povm_pndc,
        DetectorKind.CPC: povm_cpc,
        DetectorKind.SPC: povm_spc,
    }[model.kind]
    return builder(outcome, model, n_max)


def pndc_click_limit(model, n_max):
    """Largest click count kept when a PNDC outcome set must be complete."""
    return n_max + math.ceil(10 * model.nu) + 10


def outcome_labels(model, n_max):
    """Integer labels of a complete outcome set for ``model``."""
    if model.kind is DetectorKind.CPC:
        return [0, 1]
    if model.kind is DetectorKind.SPC:
        return [0, 1, 2]
    return list(range(pndc_click_limit(model, n_max) + 1))
