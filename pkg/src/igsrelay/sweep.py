"""Config-driven parameter sweeps written out as CSV.

A sweep file is INI-style text::

    [sweep]
    variable = pi_rr_db          ; pi_rr_db | pi_sr_db | p_max_w | relay_position
    start = -10
    stop = 40
    step = 2
    methods = pgs-mpa, igs-1d-cx
    mc_samples = 0               ; > 0 together with method mc-validate
    seed = 1
    path_loss_exponent = 3       ; relay_position only

    [base]
    p_s = 1
    pi_sr_db = 20                ; `_db` keys are decibels, plain keys linear

    [scenario high-rsi]
    pi_rr_db = 15

Every ``[scenario <label>]`` section overrides ``[base]``; without any, a
single scenario named ``base`` is run.
"""
from __future__ import annotations

import configparser
import csv
import io
import math
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import analytic, mc, optimize
from .model import GAIN_CAP, SignalConfig, SystemParams, db_to_linear, default_params

VARIABLES = ("pi_rr_db", "p_max_w", "pi_sr_db", "relay_position")
METHODS = ("pgs-mpa", "pgs-opt-power", "igs-1d-cx", "igs-2d-joint", "mc-validate")
PARAM_FIELDS = ("p_s", "p_max", "pi_sr", "pi_rd", "pi_rr", "pi_sd", "rate")
DB_FIELDS = ("pi_sr", "pi_rd", "pi_rr", "pi_sd")

CSV_COLUMNS = ("variable", "value", "scenario", "method", "p_out", "p_exact",
               "p_r_used", "c_x_used", "p_hat", "std_err")


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    start: float
    stop: float
    step: float
    scenarios: tuple[tuple[SystemParams, str], ...]
    methods: tuple[str, ...]
    mc_samples: int = 0
    seed: int = 0
    path_loss_exponent: float = 3.0
    gain_cap: float = GAIN_CAP

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise ConfigError(f"variable must be one of {VARIABLES}, got {self.variable!r}")
        if not self.step > 0:
            raise ConfigError("step must be positive")
        if not self.stop >= self.start:
            raise ConfigError("range must be non-empty and increasing (stop >= start)")
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ConfigError(f"unknown methods {unknown}; choose from {METHODS}")
        if not [m for m in self.methods if m != "mc-validate"]:
            raise ConfigError("at least one evaluation method is required")
        if "mc-validate" in self.methods and self.mc_samples < 1:
            raise ConfigError("mc-validate needs mc_samples >= 1")
        if not self.scenarios:
            raise ConfigError("at least one scenario is required")
        if self.variable == "relay_position":
            if not (0.0 < self.start and self.stop < 1.0):
                raise ConfigError("relay_position must stay strictly inside (0, 1)")
            if not self.path_loss_exponent > 0:
                raise ConfigError("path_loss_exponent must be positive")

    def values(self) -> list[float]:
        count = int(math.floor((self.stop - self.start) / self.step + 1e-9)) + 1
        return [round(self.start + i * self.step, 12) for i in range(count)]


def relay_position_to_gains(position: float, base: SystemParams, exponent: float = 3.0,
                            cap: float = GAIN_CAP) -> SystemParams:
    """Mean gains for a relay at normalized distance ``position`` along S-D.

    The S-D gain anchors the scale: pi_sd = G, pi_sr = G position^-alpha and
    pi_rd = G (1 - position)^-alpha, each capped at ``cap``. pi_rr is untouched.
    """
    if not 0.0 < position < 1.0:
        raise ValueError("position must lie strictly between 0 and 1")
    if not exponent > 0:
        raise ValueError("path-loss exponent must be positive")
    g = base.pi_sd
    return base.with_(pi_sr=min(g * position ** -exponent, cap),
                      pi_rd=min(g * (1.0 - position) ** -exponent, cap))


# --------------------------------------------------------------------------
# config parsing

def _line_of(text: str, section: str, key: str) -> int | None:
    current = None
    for lineno, line in enumerate(text.splitlines(), 1):
        stripped = line.strip()
        m = re.match(r"\[(.+)\]$", stripped)
        if m:
            current = m.group(1).strip()
        elif current == section and re.match(rf"{re.escape(key)}\s*[=:]", stripped):
            return lineno
    return None


def _where(text, section, key):
    line = _line_of(text, section, key)
    return f"[{section}] {key}" + (f" (line {line})" if line else "")


def _number(text, section, key, raw, kind=float):
    try:
        return kind(raw)
    except ValueError:
        raise ConfigError(f"{_where(text, section, key)}: cannot parse {raw!r} as {kind.__name__}") from None


def _param_overrides(text: str, section: str, items) -> dict[str, float]:
    out = {}
    for key, raw in items:
        if key.endswith("_db") and key[:-3] in DB_FIELDS:
            out[key[:-3]] = db_to_linear(_number(text, section, key, raw))
        elif key in PARAM_FIELDS:
            out[key] = _number(text, section, key, raw)
        else:
            raise ConfigError(f"{_where(text, section, key)}: unknown parameter")
    return out


def parse_sweep_config(text: str) -> SweepSpec:
    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"malformed config: {exc}") from None
    if not parser.has_section("sweep"):
        raise ConfigError("missing [sweep] section")
    sweep = parser["sweep"]
    for key in ("variable", "start", "stop", "step", "methods"):
        if key not in sweep:
            raise ConfigError(f"[sweep] is missing required key {key!r}")
    allowed = {"variable", "start", "stop", "step", "methods", "mc_samples", "seed",
               "path_loss_exponent", "gain_cap"}
    for key in sweep:
        if key not in allowed:
            raise ConfigError(f"{_where(text, 'sweep', key)}: unknown key")

    base_overrides = _param_overrides(text, "base", parser.items("base")) if parser.has_section("base") else {}
    scenario_sections = [s for s in parser.sections() if s.startswith("scenario")]
    for s in parser.sections():
        if s not in ("sweep", "base") and s not in scenario_sections:
            raise ConfigError(f"unknown section [{s}]")
    scenarios = []
    for section in scenario_sections or [None]:
        overrides = dict(base_overrides)
        label = "base"
        if section is not None:
            label = section[len("scenario"):].strip() or section
            overrides.update(_param_overrides(text, section, parser.items(section)))
        try:
            params = default_params().with_(**overrides)
        except ValueError as exc:
            raise ConfigError(f"scenario {label!r}: {exc}") from None
        scenarios.append((params, label))

    methods = tuple(m.strip() for m in sweep["methods"].split(",") if m.strip())
    return SweepSpec(
        variable=sweep["variable"].strip(),
        start=_number(text, "sweep", "start", sweep["start"]),
        stop=_number(text, "sweep", "stop", sweep["stop"]),
        step=_number(text, "sweep", "step", sweep["step"]),
        scenarios=tuple(scenarios),
        methods=methods,
        mc_samples=_number(text, "sweep", "mc_samples", sweep.get("mc_samples", "0"), int),
        seed=_number(text, "sweep", "seed", sweep.get("seed", "0"), int),
        path_loss_exponent=_number(text, "sweep", "path_loss_exponent",
                                   sweep.get("path_loss_exponent", "3")),
        gain_cap=_number(text, "sweep", "gain_cap", sweep.get("gain_cap", str(GAIN_CAP))),
    )


def load_sweep_config(path) -> SweepSpec:
    with open(path, encoding="utf-8") as fh:
        return parse_sweep_config(fh.read())


# --------------------------------------------------------------------------
# evaluation

@dataclass
class SweepRow:
    variable: str
    value: float
    scenario: str
    method: str
    p_out: float
    p_exact: float
    p_r_used: float
    c_x_used: float
    p_hat: float | None = None
    std_err: float | None = None
    order: tuple = field(default=(), repr=False, compare=False)


def scenario_at(spec: SweepSpec, base: SystemParams, value: float) -> SystemParams:
    if spec.variable == "pi_rr_db":
        return base.with_(pi_rr=db_to_linear(value))
    if spec.variable == "pi_sr_db":
        return base.with_(pi_sr=db_to_linear(value))
    if spec.variable == "p_max_w":
        return base.with_(p_max=value)
    return relay_position_to_gains(value, base, spec.path_loss_exponent, spec.gain_cap)


def evaluate_method(params: SystemParams, method: str) -> tuple[float, float, float, float]:
    """(p_out, p_exact, p_r, c_x) for one pipeline at one scenario.

    ``p_out`` is the quantity the method optimizes: the exact outage for the
    proper baselines and the upper bound for the improper designs.
    ``p_exact`` is the quadrature-based exact outage at the chosen point.
    """
    if method == "pgs-mpa":
        p = analytic.p_e2e_pgs(params, params.p_max)
        return p, p, params.p_max, 0.0
    if method == "pgs-opt-power":
        res = optimize.optimize_power_pgs(params)
        return res.objective, res.objective, res.p_r_opt, 0.0
    if method == "igs-1d-cx":
        res = optimize.optimize_cx(params, params.p_max)
    elif method == "igs-2d-joint":
        res = optimize.optimize_joint(params)
    else:
        raise ValueError(f"unknown method {method!r}")
    exact = analytic.p_e2e_exact(params, SignalConfig(res.p_r_opt, res.c_x_opt))
    return res.objective, exact, res.p_r_opt, res.c_x_opt


def _row_seed(seed: int, *indices: int) -> int:
    return int(np.random.SeedSequence((seed, *indices)).generate_state(1, np.uint64)[0])


def _evaluate_point(job):
    spec, i, value = job
    rows = []
    methods = [m for m in spec.methods if m != "mc-validate"]
    for j, (base, label) in enumerate(spec.scenarios):
        params = scenario_at(spec, base, value)
        for k, method in enumerate(methods):
            p_out, p_exact, p_r, c_x = evaluate_method(params, method)
            row = SweepRow(spec.variable, value, label, method, p_out, p_exact, p_r, c_x,
                           order=(i, j, k))
            if "mc-validate" in spec.methods:
                est = mc.estimate_outage(params, SignalConfig(p_r, c_x), spec.mc_samples,
                                         _row_seed(spec.seed, i, j, k)).e2e
                row.p_hat, row.std_err = est.p_hat, est.std_err
            rows.append(row)
    return rows


def run_sweep(spec: SweepSpec, workers: int = 1) -> list[SweepRow]:
    """Evaluate every (grid value, scenario, method); rows come back sorted."""
    jobs = [(spec, i, v) for i, v in enumerate(spec.values())]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_evaluate_point, jobs))
    else:
        chunks = [_evaluate_point(job) for job in jobs]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: r.order)
    return rows


def _fmt(x) -> str:
    return "" if x is None else repr(float(x))


def rows_to_csv(rows: list[SweepRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.variable, _fmt(r.value), r.scenario, r.method, _fmt(r.p_out),
                         _fmt(r.p_exact), _fmt(r.p_r_used), _fmt(r.c_x_used),
                         _fmt(r.p_hat), _fmt(r.std_err)])
    return buf.getvalue()
