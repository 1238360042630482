"""Declarative parameter sweeps written to CSV.

A sweep file is flat ``key = value`` text; ``#`` starts a comment. Keys::

    model = realistic            # realistic | ideal | input | attenuated
    alpha2 = 1.0                 # |alpha|^2
    alpha_phase = 0.0            # arg(alpha), radians
    bs.t2 = 0.5                  # transmittance of both splitters
    bs1.t2 = 0.5                 # per splitter (wins over bs.t2)
    source.kind = spdc           # spdc | single_pair
    source.gamma2 = 5e-4
    source.pair_cutoff = 3
    source.pump_phase = 0.0
    detectors.kind = CPC         # PNDC | CPC | SPC, all three detectors
    detectors.eta = 0.7
    detectors.r_dark = 100       # default per kind: CPC 100, SPC 1e4, PNDC 0
    detectors.tau_res = 1e-8
    detectors.d2.kind = SPC      # per detector (d1, d2, d3), wins over the rest
    strategy = b                 # a-d: detector kinds of D1/D2 (D3 stays CPC)
    pattern = (1, 1, 0)          # click classes of D1, D2, D3
    correction = auto            # auto | on | off
    rep_rate = 1e8
    cutoff = auto
    tail_tol = 1e-10
    baseline.xi = opt            # attenuation for fidelity_coherent / model=attenuated
    grid.x_min = -4              # grid.{x_min,x_max,p_min,p_max,nx,np}
    quadrature.n_nodes = 200     # quadrature.{n_nodes,n_theta,r_max}
    on_degenerate = error        # error | nan
    sweep.alpha2 = 0:4:0.1       # inclusive start:stop:step, or a list
    sweep.detectors.eta = 1.0, 0.7, 0.5
    observables = fidelity, probability, rate
    output = fig5.csv
    description = free text

Sweeps form a Cartesian product; the first ``sweep.`` key varies slowest.
Scalar observables give one CSV row per grid point. ``wigner``,
``phase_dist`` and ``marginals`` add long-format files ``<stem>_<name>.csv``.
"""

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import product
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import desired_state, fidelity_coherent_baseline, fidelity_dephased, optimal_attenuation
from .detectors import DetectorModel
from .errors import DegenerateConfigurationError, UsageError
from .fock import fidelity_to_pure
from .optics import BeamSplitterParams, SinglePairSource, SpdcParams, attenuate, coherent_state, required_cutoff
from .pipeline import (
    ClickPattern,
    QsdConfig,
    STRATEGIES,
    ideal_detection_probability,
    ideal_truncated_state,
    realistic_truncation,
    sigma_z_correct,
)
from .wigner import (
    MARGINAL_AXES,
    PhaseSpaceGrid,
    QuadratureRule,
    negativity,
    wigner,
    wigner_marginals,
    wigner_phase_distribution,
)

__all__ = ["ValidationError", "SweepConfig", "parse_config", "load_config", "dump_config", "run_sweep", "format_float"]


class ValidationError(UsageError):
    pass


SCALAR_OBSERVABLES = (
    "fidelity",
    "probability",
    "rate",
    "fidelity_dephased",
    "fidelity_coherent",
    "negativity",
)
CURVE_OBSERVABLES = ("wigner", "phase_dist", "marginals")
OBSERVABLES = SCALAR_OBSERVABLES + CURVE_OBSERVABLES
MODELS = ("realistic", "ideal", "input", "attenuated")


def _float(text):
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"expected a number, got {text!r}") from None


def _int(text):
    value = _float(text)
    if value != int(value):
        raise ValidationError(f"expected an integer, got {text!r}")
    return int(value)


def _choice(*options, upper=False):
    def parse(text):
        value = text.strip().upper() if upper else text.strip().lower()
        if value not in options:
            raise ValidationError(f"{text!r} is not one of {', '.join(options)}")
        return value

    return parse


def _auto_or(parse, word="auto"):
    def wrapped(text):
        return word if text.strip().lower() == word else parse(text)

    return wrapped


def _pattern(text):
    items = [s for s in re.split(r"[\s,;()]+", text.strip()) if s]
    if len(items) != 3:
        raise ValidationError(f"pattern needs three click labels, got {text!r}")
    return tuple(i if not i.isdigit() else int(i) for i in items)


_KIND = _choice("PNDC", "CPC", "SPC", upper=True)

FIELDS = {
    "model": _choice(*MODELS),
    "alpha2": _float,
    "alpha_phase": _float,
    "bs.t2": _float,
    "bs1.t2": _float,
    "bs2.t2": _float,
    "source.kind": _choice("spdc", "single_pair"),
    "source.gamma2": _float,
    "source.pair_cutoff": _int,
    "source.pump_phase": _float,
    "detectors.kind": _KIND,
    "detectors.eta": _float,
    "detectors.r_dark": _float,
    "detectors.tau_res": _float,
    "strategy": _choice("none", *STRATEGIES),
    "pattern": _pattern,
    "correction": _choice("auto", "on", "off"),
    "rep_rate": _float,
    "cutoff": _auto_or(_int),
    "tail_tol": _float,
    "baseline.xi": _auto_or(_float, "opt"),
    "grid.x_min": _float,
    "grid.x_max": _float,
    "grid.p_min": _float,
    "grid.p_max": _float,
    "grid.nx": _int,
    "grid.np": _int,
    "quadrature.n_nodes": _int,
    "quadrature.n_theta": _int,
    "quadrature.r_max": _auto_or(_float),
    "on_degenerate": _choice("error", "nan"),
}
for _d in ("d1", "d2", "d3"):
    FIELDS[f"detectors.{_d}.kind"] = _KIND
    FIELDS[f"detectors.{_d}.eta"] = _float
    FIELDS[f"detectors.{_d}.r_dark"] = _float
    FIELDS[f"detectors.{_d}.tau_res"] = _float

DEFAULTS = {
    "model": "realistic",
    "alpha2": 1.0,
    "alpha_phase": 0.0,
    "bs.t2": 0.5,
    "source.kind": "spdc",
    "source.gamma2": 5e-4,
    "source.pair_cutoff": 3,
    "source.pump_phase": 0.0,
    "detectors.kind": "CPC",
    "detectors.eta": 0.7,
    "detectors.tau_res": 10e-9,
    "strategy": "none",
    "pattern": (1, 1, 0),
    "correction": "auto",
    "rep_rate": 100e6,
    "cutoff": "auto",
    "tail_tol": 1e-10,
    "baseline.xi": "opt",
    "grid.x_min": -4.0,
    "grid.x_max": 4.0,
    "grid.p_min": -4.0,
    "grid.p_max": 4.0,
    "grid.nx": 201,
    "grid.np": 201,
    "quadrature.n_nodes": 200,
    "quadrature.n_theta": 360,
    "quadrature.r_max": "auto",
    "on_degenerate": "error",
}

DEFAULT_DARK = {"CPC": 100.0, "SPC": 1e4, "PNDC": 0.0}


def format_float(x):
    return f"{x:.16e}"


def _format_value(value):
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return "(" + ", ".join(str(v) for v in value) + ")"
    return str(value)


def _split_list(text):
    items, depth, current = [], 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            items.append(current)
            current = ""
        else:
            current += ch
    items.append(current)
    return [i.strip() for i in items if i.strip()]


def _parse_range(name, text):
    parse = FIELDS[name]
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(f"range for {name} must be start:stop:step, got {text!r}")
        start, stop, step = (_float(p) for p in parts)
        if step <= 0 or stop < start:
            raise ValidationError(f"empty or ill-formed range {text!r} for {name}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        # rounding keeps grid values such as 0.30000000000000004 out of the output
        return [round(start + i * step, 12) for i in range(count)]
    values = [parse(item) for item in _split_list(text)]
    if not values:
        raise ValidationError(f"sweep over {name} has no values")
    return values


@dataclass
class SweepConfig:
    fixed: dict = field(default_factory=dict)
    sweeps: list = field(default_factory=list)  # [(name, [values])] slowest first
    observables: list = field(default_factory=list)
    output: str = "sweep.csv"
    description: str = ""

    def validate(self):
        for name in self.fixed:
            if name not in FIELDS:
                raise ValidationError(f"unknown field {name!r}")
        seen = set()
        for name, values in self.sweeps:
            if name not in FIELDS:
                raise ValidationError(f"cannot sweep unknown field {name!r}")
            if name in seen:
                raise ValidationError(f"field {name!r} swept twice")
            seen.add(name)
            if not values:
                raise ValidationError(f"sweep over {name} has no values")
        if not self.observables:
            raise ValidationError("at least one observable is required")
        for obs in self.observables:
            if obs not in OBSERVABLES:
                raise ValidationError(f"unknown observable {obs!r}; choose from {', '.join(OBSERVABLES)}")
        if not self.output.endswith(".csv"):
            raise ValidationError("output must name a .csv file")
        # build every grid point once so bad combinations fail before any work
        for point in self.points():
            try:
                _build(point)
            except ValidationError:
                raise
            except UsageError as exc:
                raise ValidationError(str(exc)) from None
        return self

    def points(self):
        names = [n for n, _ in self.sweeps]
        base = dict(DEFAULTS)
        base.update(self.fixed)
        for combo in product(*(v for _, v in self.sweeps)):
            params = dict(base)
            params.update(zip(names, combo))
            yield params

    @property
    def swept_names(self):
        return [n for n, _ in self.sweeps]

    def row_count(self):
        return math.prod(len(v) for _, v in self.sweeps)


def parse_config(text):
    cfg = SweepConfig()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValidationError(f"line {lineno}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        if key == "observables":
            cfg.observables = [o.strip().lower() for o in value.split(",") if o.strip()]
        elif key == "output":
            cfg.output = value
        elif key == "description":
            cfg.description = value
        elif key.startswith("sweep."):
            name = key[len("sweep.") :]
            if name not in FIELDS:
                raise ValidationError(f"line {lineno}: cannot sweep unknown field {name!r}")
            cfg.sweeps.append((name, _parse_range(name, value)))
        elif key in FIELDS:
            cfg.fixed[key] = FIELDS[key](value)
        else:
            raise ValidationError(f"line {lineno}: unknown field {key!r}")
    return cfg.validate()


def load_config(path):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ValidationError(f"cannot read {path}: {exc}") from None
    return parse_config(text)


def dump_config(cfg, header=()):
    lines = [f"# {h}" for h in header]
    if cfg.description:
        lines.append(f"description = {cfg.description}")
    merged = dict(DEFAULTS)
    merged.update(cfg.fixed)
    for key in FIELDS:
        if key in merged and key not in cfg.swept_names:
            lines.append(f"{key} = {_format_value(merged[key])}")
    for name, values in cfg.sweeps:
        lines.append(f"sweep.{name} = " + ", ".join(_format_value(v) for v in values))
    lines.append("observables = " + ", ".join(cfg.observables))
    lines.append(f"output = {cfg.output}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# evaluation of one grid point


def _detector(params, slot, kind_override):
    prefix = f"detectors.{slot}."
    kind = params.get(prefix + "kind") or kind_override or params["detectors.kind"]
    eta = params.get(prefix + "eta", params["detectors.eta"])
    r_dark = params.get(prefix + "r_dark", params.get("detectors.r_dark", DEFAULT_DARK[kind]))
    tau = params.get(prefix + "tau_res", params["detectors.tau_res"])
    return DetectorModel(kind, eta, r_dark, tau)


def _build(params):
    if params["alpha2"] < 0:
        raise ValidationError("alpha2 must be non-negative")
    alpha = math.sqrt(params["alpha2"]) * complex(math.cos(params["alpha_phase"]), math.sin(params["alpha_phase"]))
    bs1 = BeamSplitterParams.from_transmittance(params.get("bs1.t2", params["bs.t2"]))
    bs2 = BeamSplitterParams.from_transmittance(params.get("bs2.t2", params["bs.t2"]))
    if params["source.kind"] == "single_pair":
        source = SinglePairSource(max(1, params["source.pair_cutoff"]))
    else:
        source = SpdcParams.from_pair_probability(
            params["source.gamma2"], pump_phase=params["source.pump_phase"], pair_cutoff=params["source.pair_cutoff"]
        )
    kinds = (None, None, None)
    if params["strategy"] != "none":
        k1, k2 = STRATEGIES[params["strategy"]]
        kinds = (str(k1), str(k2), "CPC")
    d1, d2, d3 = (_detector(params, s, k) for s, k in zip(("d1", "d2", "d3"), kinds))
    cutoff = None if params["cutoff"] == "auto" else params["cutoff"]
    config = QsdConfig(
        alpha=alpha,
        bs1=bs1,
        bs2=bs2,
        source=source,
        d1=d1,
        d2=d2,
        d3=d3,
        cutoff=cutoff,
        rep_rate=params["rep_rate"],
        tail_tol=params["tail_tol"],
    )
    pattern = ClickPattern.for_config(config, params["pattern"])
    grid = PhaseSpaceGrid(
        params["grid.x_min"], params["grid.x_max"], params["grid.p_min"], params["grid.p_max"],
        params["grid.nx"], params["grid.np"],
    )
    xi = params["baseline.xi"]
    if xi != "opt" and not 0.0 <= xi <= 1.0:
        raise ValidationError(f"baseline.xi must lie in [0, 1], got {xi}")
    return config, pattern, grid


class _Point:
    """Lazily evaluated observables of one grid point."""

    def __init__(self, params):
        self.params = params
        self.config, self.pattern, self.grid = _build(params)
        self.model = params["model"]
        self._result = None
        self._state = None

    @property
    def alpha(self):
        return self.config.alpha

    @property
    def xi(self):
        xi = self.params["baseline.xi"]
        return optimal_attenuation(self.alpha) if xi == "opt" else xi

    def _ideal_outcome(self):
        outcome = (self.pattern.n2, self.pattern.n3)
        if outcome not in ((1, 0), (0, 1)):
            raise ValidationError(f"the ideal model supports D2/D3 outcomes (1, 0) and (0, 1), not {outcome}")
        return outcome

    def _correction(self, default):
        mode = self.params["correction"]
        return default if mode == "auto" else mode == "on"

    def result(self):
        if self._result is None:
            apply = None if self.params["correction"] == "auto" else self.params["correction"] == "on"
            self._result = realistic_truncation(self.config, self.pattern, apply)
        return self._result

    def state(self):
        if self._state is not None:
            return self._state
        n = self.config.n_max
        if self.model == "realistic":
            state = self.result().state
        elif self.model == "ideal":
            outcome = self._ideal_outcome()
            psi = ideal_truncated_state(self.alpha, self.config.bs1, self.config.bs2, outcome, n)
            if self._correction(outcome == (0, 1)):
                psi = sigma_z_correct(psi)
            state = psi.density()
        elif self.model == "input":
            state = coherent_state(self.alpha, n, self.config.tail_tol).density()
        else:
            beta = attenuate(self.alpha, self.xi)
            n = max(n, required_cutoff(beta, self.config.tail_tol))
            state = coherent_state(beta, n, self.config.tail_tol).density()
        self._state = state
        return state

    def fidelity(self):
        if self.model == "realistic":
            return self.result().fidelity_to_desired
        state = self.state()
        return fidelity_to_pure(state, desired_state(self.alpha, state.n_max))

    def probability(self):
        if self.model == "realistic":
            return self.result().probability_per_pulse
        if self.model == "ideal":
            return ideal_detection_probability(self.alpha, self.config.bs1, self.config.bs2, self._ideal_outcome())
        raise ValidationError(f"probability is not defined for model {self.model!r}")

    def scalar(self, name):
        if name == "fidelity":
            return [self.fidelity()]
        if name == "probability":
            return [self.probability()]
        if name == "rate":
            return [self.probability() * self.config.rep_rate]
        if name == "fidelity_dephased":
            return [fidelity_dephased(self.alpha)]
        if name == "fidelity_coherent":
            beta = attenuate(self.alpha, self.xi)
            return [fidelity_coherent_baseline(self.alpha, beta, 0.0)]
        if name == "negativity":
            return list(negativity(wigner(self.state(), self.grid), self.grid))
        raise AssertionError(name)

    def curves(self, name):
        state = self.state()
        if name == "wigner":
            W = wigner(state, self.grid)
            X, P = self.grid.mesh()
            return [(x, p, w) for x, p, w in zip(X.ravel(), P.ravel(), W.ravel())]
        if name == "phase_dist":
            r_max = self.params["quadrature.r_max"]
            rule = QuadratureRule.gauss_legendre(
                state.n_max,
                self.params["quadrature.n_nodes"],
                self.params["quadrature.n_theta"],
                None if r_max == "auto" else r_max,
            )
            theta, values = wigner_phase_distribution(state, rule)
            return list(zip(theta, values))
        if name == "marginals":
            rows = []
            for i, axis in enumerate(MARGINAL_AXES):
                q, values = wigner_marginals(state, axis, self.grid)
                rows.extend((i, a, v) for a, v in zip(q, values))
            return rows
        raise AssertionError(name)


SCALAR_COLUMNS = {"negativity": ["wigner_min", "wigner_negative_volume"]}
CURVE_COLUMNS = {
    "wigner": ["X", "P", "W"],
    "phase_dist": ["theta", "P_theta"],
    "marginals": ["axis", "q", "value"],
}


def _evaluate(params, observables):
    try:
        point = _Point(params)
        scalars = [v for obs in observables if obs in SCALAR_OBSERVABLES for v in point.scalar(obs)]
        curves = {obs: point.curves(obs) for obs in observables if obs in CURVE_OBSERVABLES}
    except DegenerateConfigurationError:
        if params["on_degenerate"] != "nan":
            raise
        width = sum(len(SCALAR_COLUMNS.get(o, [o])) for o in observables if o in SCALAR_OBSERVABLES)
        return [math.nan] * width, {}
    return scalars, curves


def _cell(value):
    if isinstance(value, str):
        return value
    if isinstance(value, tuple):
        return "-".join(str(v) for v in value)
    if isinstance(value, (int, np.integer)) and not isinstance(value, bool):
        return str(value)
    return format_float(float(value))


def _write_csv(path, header, rows):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


def run_sweep(cfg, out_dir=".", threads=1, cutoff=None, header=()):
    """Evaluate every grid point and write the CSV file(s) plus a ``.meta`` sidecar.

    Returns the list of written paths; the main CSV comes first.
    """
    cfg.validate()
    if cutoff is not None:
        cfg = SweepConfig(dict(cfg.fixed, cutoff=int(cutoff)), cfg.sweeps, cfg.observables, cfg.output, cfg.description)
        cfg.validate()
    out_dir = Path(out_dir)
    try:
        out_dir.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise ValidationError(f"cannot create output directory {out_dir}: {exc}") from None
    points = list(cfg.points())
    names = cfg.swept_names
    observables = cfg.observables
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(lambda p: _evaluate(p, observables), points))
    else:
        results = [_evaluate(p, observables) for p in points]

    main = out_dir / cfg.output
    scalar_header = [c for o in observables if o in SCALAR_OBSERVABLES for c in SCALAR_COLUMNS.get(o, [o])]
    written = []
    try:
        if scalar_header or not any(o in CURVE_OBSERVABLES for o in observables):
            _write_csv(main, names + scalar_header, ([p[n] for n in names] + s for p, (s, _) in zip(points, results)))
            written.append(main)
        for obs in observables:
            if obs not in CURVE_OBSERVABLES:
                continue
            path = out_dir / f"{main.stem}_{obs}.csv"
            rows = ([p[n] for n in names] + list(c) for p, (_, curves) in zip(points, results) for c in curves.get(obs, []))
            _write_csv(path, names + CURVE_COLUMNS[obs], rows)
            written.append(path)
        meta = out_dir / f"{main.stem}.meta"
        meta.write_text(
            dump_config(cfg, header=(f"qscissors {__version__}",) + tuple(header)),
            encoding="utf-8",
        )
    except OSError as exc:
        raise ValidationError(f"cannot write output in {out_dir}: {exc}") from None
    written.append(meta)
    return written
