"""Sweep definitions that regenerate the data behind each published figure.

Every preset is a list of sweep files (as text). Each one becomes its own CSV
and ``.meta`` sidecar. Figures mixing the realistic scheme with reference
curves use several sweeps.
"""

from .errors import UsageError
from .sweep import parse_config

ALPHA2_AXIS = "0:4:0.1"

_FIG2A = """
description = Ideal scissors: fidelity surface over |t1|^2, |t2|^2 at |alpha|^2 = 1. Axes: bs1.t2, bs2.t2 -> fidelity.
model = ideal
alpha2 = 1.0
on_degenerate = nan
sweep.bs1.t2 = 0:1:0.05
sweep.bs2.t2 = 0:1:0.05
observables = fidelity
output = fig2a.csv
"""

_FIG2B = """
description = Ideal scissors with identical splitters: detection probability vs |t|^2, one curve per |alpha|^2 = 0.1, 0.5, 1.0, 1.5, 2.0.
model = ideal
sweep.alpha2 = 0.1, 0.5, 1.0, 1.5, 2.0
sweep.bs.t2 = 0:1:0.02
observables = probability
output = fig2b.csv
"""

_FIG4_LEFT = """
description = PNDC detectors, eta = 0.5, R_dark = 1000/s, gamma^2 = 5e-4: fidelity vs |alpha|^2 for (D2, D3) = (1,0), (2,1), (3,2).
detectors.kind = PNDC
detectors.eta = 0.5
detectors.r_dark = 1000
sweep.pattern = (1, 1, 0), (1, 2, 1), (1, 3, 2)
sweep.alpha2 = 0:4:0.1
observables = fidelity, rate
output = fig4_alpha.csv
"""

_FIG4_RIGHT = """
description = PNDC detectors at |alpha|^2 = 0.4, gamma^2 = 5e-4: fidelity vs eta for R_dark = 100/s (solid) and 1e4/s (dotted), per (D2, D3) pattern.
detectors.kind = PNDC
alpha2 = 0.4
sweep.detectors.r_dark = 100.0, 10000.0
sweep.pattern = (1, 1, 0), (1, 2, 1), (1, 3, 2)
sweep.detectors.eta = 0:1:0.05
observables = fidelity
output = fig4_eta.csv
"""

_FIG5 = """
description = CPC detectors, R_dark = 100/s, gamma^2 = 5e-4: fidelity and C-AC rate vs |alpha|^2 for eta = 1.0, 0.7, 0.5, 0.3, 0.1, 0.0.
detectors.kind = CPC
detectors.r_dark = 100
sweep.detectors.eta = 1.0, 0.7, 0.5, 0.3, 0.1, 0.0
sweep.alpha2 = {alpha}
observables = fidelity, probability, rate
output = fig5.csv
"""

_FIG6 = """
description = SPC detectors, R_dark = 1e4/s, gamma^2 = 5e-4: fidelity and C-AC rate vs |alpha|^2 for eta = 1.0, 0.7, 0.5, 0.3, 0.1, 0.0.
detectors.kind = SPC
detectors.r_dark = 10000
sweep.detectors.eta = 1.0, 0.7, 0.5, 0.3, 0.1, 0.0
sweep.alpha2 = {alpha}
observables = fidelity, probability, rate
output = fig6.csv
"""

_FIG7 = """
description = Detector strategies a-d (D1/D2 = CPC/SPC, CPC/CPC, SPC/SPC, SPC/CPC; D3 = CPC), eta = 0.7, gamma^2 = 5e-4: fidelity and rate vs |alpha|^2.
detectors.eta = 0.7
sweep.strategy = a, b, c, d
sweep.alpha2 = {alpha}
observables = fidelity, probability, rate
output = fig7.csv
"""

_FIG8_SCHEME = """
description = CPC scheme (R_dark = 100/s, gamma^2 = 5e-4) with eta = 1 (curve a) and eta = 0.5 (curve b): fidelity vs |alpha|^2.
detectors.kind = CPC
sweep.detectors.eta = 1.0, 0.5
sweep.alpha2 = {alpha}
observables = fidelity
output = fig8_scheme.csv
"""

_FIG8_REF = """
description = Reference states: dephased truncation (curve c) and unattenuated coherent state beta = alpha (curve d): fidelity vs |alpha|^2.
baseline.xi = 1.0
sweep.alpha2 = {alpha}
observables = fidelity_dephased, fidelity_coherent
output = fig8_reference.csv
"""

_FIG9_SCHEME = """
description = CPC scheme (R_dark = 100/s, gamma^2 = 5e-4) with eta = 1.0, 0.7, 0.5 (curves a-c): fidelity vs |alpha|^2.
detectors.kind = CPC
sweep.detectors.eta = 1.0, 0.7, 0.5
sweep.alpha2 = {alpha}
observables = fidelity
output = fig9_scheme.csv
"""

_FIG9_REF = """
description = Attenuated coherent state |sqrt(xi) alpha>: optimal xi (curve d), xi = 1/2 (e), xi = 1 (f): fidelity vs |alpha|^2.
sweep.baseline.xi = opt, 0.5, 1.0
sweep.alpha2 = {alpha}
observables = fidelity_coherent
output = fig9_reference.csv
"""

_FIG10A = """
description = Wigner function of the perfect-scissors output, |alpha|^2 = 0.8, phase pi/2.
model = ideal
alpha2 = 0.8
alpha_phase = 1.5707963267948966
observables = negativity, wigner
output = fig10a.csv
"""

_FIG10B = """
description = Wigner function of the CPC scheme output, eta = 0.7, R_dark = 100/s, gamma^2 = 5e-4, |alpha|^2 = 0.8, phase pi/2.
detectors.kind = CPC
detectors.eta = 0.7
detectors.r_dark = 100
alpha2 = 0.8
alpha_phase = 1.5707963267948966
observables = fidelity, negativity, wigner
output = fig10b.csv
"""

_FIG11_IDEAL = """
description = Perfect scissors (solid): Wigner cross sections W(X,0), W(0,P) and marginals for |alpha|^2 = 0.4 and 4.0, real alpha.
model = ideal
sweep.alpha2 = 0.4, 4.0
observables = marginals
output = fig11_ideal.csv
"""

_FIG11_SCHEME = """
description = CPC scheme with eta = 0.5, 0.7, 1.0: Wigner cross sections and marginals for |alpha|^2 = 0.4 and 4.0, real alpha.
detectors.kind = CPC
sweep.alpha2 = 0.4, 4.0
sweep.detectors.eta = 0.5, 0.7, 1.0
observables = marginals
output = fig11_scheme.csv
"""

_FIG12_REF = """
description = Wigner phase distribution at |alpha|^2 = {a2}: input coherent state (i) and perfect-scissors output (ii).
alpha2 = {a2}
sweep.model = input, ideal
observables = phase_dist
output = fig12{panel}_reference.csv
"""

_FIG12_SCHEME = """
description = Wigner phase distribution at |alpha|^2 = {a2} for the CPC scheme with eta = 1.0, 0.5, 0.2.
detectors.kind = CPC
alpha2 = {a2}
sweep.detectors.eta = 1.0, 0.5, 0.2
observables = fidelity, phase_dist
output = fig12{panel}_scheme.csv
"""


def _fig12(panel, a2):
    return [t.format(a2=a2, panel=panel) for t in (_FIG12_REF, _FIG12_SCHEME)]


def _fill(*templates):
    return [t.format(alpha=ALPHA2_AXIS) for t in templates]


PRESETS = {
    "fig2a": [_FIG2A],
    "fig2b": [_FIG2B],
    "fig4": [_FIG4_LEFT, _FIG4_RIGHT],
    "fig5": _fill(_FIG5),
    "fig6": _fill(_FIG6),
    "fig7": _fill(_FIG7),
    "fig8": _fill(_FIG8_SCHEME, _FIG8_REF),
    "fig9": _fill(_FIG9_SCHEME, _FIG9_REF),
    "fig10": [_FIG10A, _FIG10B],
    "fig10a": [_FIG10A],
    "fig10b": [_FIG10B],
    "fig11": [_FIG11_IDEAL, _FIG11_SCHEME],
    "fig12": _fig12("a", 1.0) + _fig12("b", 0.4),
    "fig12a": _fig12("a", 1.0),
    "fig12b": _fig12("b", 0.4),
}


def preset_configs(preset_id):
    try:
        texts = PRESETS[preset_id]
    except KeyError:
        raise UsageError(f"unknown preset {preset_id!r}; known: {', '.join(PRESETS)}") from None
    return [parse_config(text) for text in texts]


def describe(preset_id):
    return " | ".join(cfg.description for cfg in preset_configs(preset_id))
