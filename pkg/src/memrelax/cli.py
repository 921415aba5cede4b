"""Command-line front end.

Subcommands:

* ``memrelax simulate <scenario.json>`` -- exact pulse-by-pulse run(s),
  CSV of t, drive, state and memristance columns (optionally plus sliding
  averages and the closed-form averaged trajectory).
* ``memrelax fixed-point <scenario.json> [--sweep param:min:max:n[:log]]``
  -- fixed-point report on stdout, or a CSV sweep of location, relaxation
  time and flags against one parameter.
* ``memrelax compare <scenario.json>`` -- exact-vs-averaged deviation
  report as JSON on stdout.
* ``memrelax figure <id> [--out dir]`` -- canned datasets fig2a, fig2b,
  fig3a, fig3b, fig4a, fig4b with the corresponding reference parameters
  baked in.

Exit codes: 0 success, 1 validation error, 2 numeric failure, 3 validity
error (the averaged theory's above-threshold assumption is violated).

Scenario files are JSON with ``model``, ``train``, ``run`` and optional
``output``/``sweep`` blocks; see the README for the schema.  Output CSVs
are deterministic: 12 significant digits, LF line endings, and a comment
header that echoes the full scenario (hash plus canonical JSON) so that
every run can be reproduced from its output alone.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from dataclasses import dataclass
from datetime import datetime, timezone
from pathlib import Path

import numpy as np

from . import __version__
from .analysis import compare
from .averaged import (
    AveragedField,
    BiolekAveragedParams,
    CircuitAveragedParams,
    FixedPointReport,
    biolek_fixed_point,
    biolek_relaxation_time,
    biolek_solution,
    circuit_fixed_point,
    circuit_solution,
    numeric_fixed_point,
)
from .errors import (
    DegenerateFixedPointError,
    MemrelaxError,
    NumericError,
    ValidationError,
    ValidityError,
)
from .exact_sim import IntegratorConfig, simulate, time_average
from .models import (
    BiolekModel,
    PulseTrain,
    ThresholdCircuit,
    drive_at,
    state_from_memristance,
)

__all__ = ["Scenario", "main", "run_figure", "FIGURE_IDS"]

_INCLUDE_CHOICES = ("exact", "averaged", "closed_form")

# Reporting-only resistances injected into Biolek scenarios that do not
# specify any; they never enter the dynamics.
_DEFAULT_BIOLEK_R_ON = 2000.0
_DEFAULT_BIOLEK_R_OFF = 10000.0


def _fmt(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def _get(block: dict, key: str, ctx: str, *, required: bool = True, default=None):
    if key not in block:
        if required:
            raise ValidationError(f"missing field {ctx}.{key}")
        return default
    return block[key]


def _num(block: dict, key: str, ctx: str, *, required: bool = True, default=None) -> float:
    value = _get(block, key, ctx, required=required, default=default)
    if value is default and not required:
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ValidationError(f"field {ctx}.{key} must be a number, got {value!r}")
    return float(value)


@dataclass(frozen=True)
class SweepSpec:
    param: str
    lo: float
    hi: float
    n: int
    log: bool = False

    def grid(self) -> np.ndarray:
        if self.n < 2:
            raise ValidationError("sweep needs at least 2 points")
        if self.log:
            if self.lo <= 0 or self.hi <= 0:
                raise ValidationError("log sweep requires positive bounds")
            return np.logspace(math.log10(self.lo), math.log10(self.hi), self.n)
        return np.linspace(self.lo, self.hi, self.n)


@dataclass(frozen=True)
class Scenario:
    """Validated scenario: model, drive, run plan and output options."""

    model: BiolekModel | ThresholdCircuit
    train: PulseTrain
    x0_list: tuple[float, ...]
    t_end_periods: float
    config: IntegratorConfig
    output_path: str | None
    include: tuple[str, ...]
    timestamp: bool
    sweep: SweepSpec | None
    defaulted: tuple[str, ...]  # fields filled by tool defaults, for the header

    @classmethod
    def from_file(cls, path: str | Path) -> "Scenario":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise ValidationError(f"cannot read scenario file {path}: {exc}") from exc
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"scenario file {path} is not valid JSON: {exc}") from exc
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        if not isinstance(data, dict):
            raise ValidationError("scenario must be a JSON object")
        defaulted = []

        model_block = _get(data, "model", "scenario")
        kind = _get(model_block, "kind", "model")
        if kind == "biolek":
            r_on = _num(model_block, "r_on", "model", required=False)
            r_off = _num(model_block, "r_off", "model", required=False)
            if r_on is None and r_off is None:
                r_on, r_off = _DEFAULT_BIOLEK_R_ON, _DEFAULT_BIOLEK_R_OFF
                defaulted.append("model.r_on/r_off")
            model = BiolekModel(
                h_plus=_num(model_block, "h_plus", "model"),
                h_minus=_num(model_block, "h_minus", "model"),
                p_exponent=int(_num(model_block, "p", "model", required=False, default=1)),
                r_on=r_on,
                r_off=r_off,
            )
        elif kind == "circuit":
            model = ThresholdCircuit(
                beta=_num(model_block, "beta", "model"),
                v_on=_num(model_block, "v_on", "model"),
                v_off=_num(model_block, "v_off", "model"),
                r_series=_num(model_block, "r_series", "model"),
                r_on=_num(model_block, "r_on", "model"),
                r_off=_num(model_block, "r_off", "model"),
            )
        else:
            raise ValidationError(f"model.kind must be 'biolek' or 'circuit', got {kind!r}")

        train_block = _get(data, "train", "scenario")
        train = PulseTrain(
            period_T=_num(train_block, "period", "train"),
            tau_plus=_num(train_block, "tau_plus", "train"),
            tau_minus=_num(train_block, "tau_minus", "train"),
            amp_plus=_num(train_block, "amp_plus", "train"),
            amp_minus=_num(train_block, "amp_minus", "train"),
        )

        run_block = _get(data, "run", "scenario")
        if "x0" in run_block and "r0" in run_block:
            raise ValidationError("run block must give either x0 or r0, not both")
        if "r0" in run_block:
            r0_list = _get(run_block, "r0", "run")
            if not isinstance(r0_list, list) or not r0_list:
                raise ValidationError("run.r0 must be a non-empty list")
            r_on = getattr(model, "r_on", None)
            r_off = getattr(model, "r_off", None)
            if r_on is None:
                raise ValidationError("run.r0 requires a model with r_on/r_off")
            x0_list = tuple(state_from_memristance(float(r), r_on, r_off) for r in r0_list)
        else:
            x0_list = _get(run_block, "x0", "run")
            if not isinstance(x0_list, list) or not x0_list:
                raise ValidationError("run.x0 must be a non-empty list")
            x0_list = tuple(float(x) for x in x0_list)
        for x0 in x0_list:
            if not 0.0 <= x0 <= 1.0:
                raise ValidationError(f"run.x0 entries must lie in [0, 1], got {x0}")
        t_end_periods = _num(run_block, "t_end_periods", "run")
        if t_end_periods < 1:
            raise ValidationError(f"run.t_end_periods must be >= 1, got {t_end_periods}")
        config = IntegratorConfig(
            substeps_per_segment=int(
                _num(run_block, "substeps_per_segment", "run", required=False, default=16)
            ),
            samples_per_period=int(
                _num(run_block, "samples_per_period", "run", required=False, default=8)
            ),
        )

        out_block = data.get("output", {})
        include = tuple(_get(out_block, "include", "output", required=False, default=["exact"]))
        for item in include:
            if item not in _INCLUDE_CHOICES:
                raise ValidationError(
                    f"output.include entries must be among {_INCLUDE_CHOICES}, got {item!r}"
                )
        if not include:
            raise ValidationError("output.include must not be empty")
        output_path = _get(out_block, "path", "output", required=False)
        timestamp = bool(_get(out_block, "timestamp", "output", required=False, default=False))

        sweep = None
        if "sweep" in data:
            sw = data["sweep"]
            sweep = SweepSpec(
                param=str(_get(sw, "param", "sweep")),
                lo=_num(sw, "min", "sweep"),
                hi=_num(sw, "max", "sweep"),
                n=int(_num(sw, "n", "sweep")),
                log=bool(_get(sw, "log", "sweep", required=False, default=False)),
            )

        return cls(
            model=model,
            train=train,
            x0_list=x0_list,
            t_end_periods=t_end_periods,
            config=config,
            output_path=output_path,
            include=include,
            timestamp=timestamp,
            sweep=sweep,
            defaulted=tuple(defaulted),
        )

    def to_canonical_dict(self) -> dict:
        if isinstance(self.model, BiolekModel):
            model = {
                "kind": "biolek",
                "h_plus": self.model.h_plus,
                "h_minus": self.model.h_minus,
                "p": self.model.p_exponent,
                "r_on": self.model.r_on,
                "r_off": self.model.r_off,
            }
        else:
            model = {
                "kind": "circuit",
                "beta": self.model.beta,
                "v_on": self.model.v_on,
                "v_off": self.model.v_off,
                "r_series": self.model.r_series,
                "r_on": self.model.r_on,
                "r_off": self.model.r_off,
            }
        data = {
            "model": model,
            "train": {
                "period": self.train.period_T,
                "tau_plus": self.train.tau_plus,
                "tau_minus": self.train.tau_minus,
                "amp_plus": self.train.amp_plus,
                "amp_minus": self.train.amp_minus,
            },
            "run": {
                "x0": list(self.x0_list),
                "t_end_periods": self.t_end_periods,
                "substeps_per_segment": self.config.substeps_per_segment,
                "samples_per_period": self.config.samples_per_period,
            },
            "output": {
                "path": self.output_path,
                "include": list(self.include),
                "timestamp": self.timestamp,
            },
        }
        if self.sweep is not None:
            data["sweep"] = {
                "param": self.sweep.param,
                "min": self.sweep.lo,
                "max": self.sweep.hi,
                "n": self.sweep.n,
                "log": self.sweep.log,
            }
        return data

    def canonical_json(self) -> str:
        return json.dumps(self.to_canonical_dict(), sort_keys=True, separators=(",", ":"))

    def hash(self) -> str:
        return hashlib.sha256(self.canonical_json().encode()).hexdigest()[:12]


def _header_comments(tag: str, scenario: Scenario | None, extra: list[str], timestamp: bool) -> list[str]:
    lines = [f"memrelax {tag} v{__version__}"]
    if scenario is not None:
        lines.append(f"scenario-hash: {scenario.hash()}")
        lines.append(f"scenario: {scenario.canonical_json()}")
        if scenario.defaulted:
            lines.append(
                "tool-defaults (not part of the configured scenario): "
                + ", ".join(scenario.defaulted)
            )
    lines.extend(extra)
    if timestamp:
        lines.append(f"generated-at: {datetime.now(timezone.utc).isoformat()}")
    return lines


def _write_csv(path: Path, comments: list[str], header: list[str], columns: list[np.ndarray]) -> None:
    n = len(columns[0])
    for col in columns:
        if len(col) != n:
            raise NumericError("internal: ragged CSV columns")
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(header) + "\n")
        for i in range(n):
            fh.write(",".join(_fmt(col[i]) for col in columns) + "\n")


def _closed_form_state(scenario: Scenario, x0: float, times: np.ndarray) -> np.ndarray:
    """Averaged-theory trajectory in state coordinates at the given times."""
    model, train = scenario.model, scenario.train
    if isinstance(model, BiolekModel):
        params = BiolekAveragedParams.from_model(model, train)
        return biolek_solution(params, x0, times)
    params = CircuitAveragedParams.from_parts(model, train)
    r0 = float(model.r_off + x0 * (model.r_on - model.r_off))
    r_t = circuit_solution(model, params, r0, times, period=train.period_T)
    return (model.r_off - r_t) / (model.r_off - model.r_on)


def _x0_tag(x0: float) -> str:
    return format(x0, ".6g")


def cmd_simulate(args) -> int:
    scenario = Scenario.from_file(args.scenario)
    out_path = _resolve_out(args, scenario, Path(args.scenario).stem + ".csv")

    train, cfg = scenario.train, scenario.config
    t_end = scenario.t_end_periods * train.period_T
    r_on = getattr(scenario.model, "r_on", None)
    r_off = getattr(scenario.model, "r_off", None)

    header = ["t", "drive"]
    columns: list[np.ndarray] = []
    times = None
    for x0 in scenario.x0_list:
        traj = simulate(scenario.model, train, x0, t_end, cfg)
        if times is None:
            times = traj.times
            columns.append(times)
            columns.append(drive_at(train, times))
        tag = _x0_tag(x0)
        if "exact" in scenario.include:
            header += [f"x[x0={tag}]", f"R_M[x0={tag}]"]
            columns.append(traj.states)
            columns.append(traj.memristance_series() if r_on is not None else np.full_like(traj.states, np.nan))
        if "averaged" in scenario.include:
            averaged = time_average(traj, train.period_T)
            padded = np.full_like(traj.states, np.nan)
            padded[: len(averaged.states)] = averaged.states
            header.append(f"xbar[x0={tag}]")
            columns.append(padded)
        if "closed_form" in scenario.include:
            header.append(f"xbar_cf[x0={tag}]")
            columns.append(_closed_form_state(scenario, x0, times))

    comments = _header_comments(
        "simulate", scenario, [f"columns: {','.join(header)}"], scenario.timestamp or args.timestamp
    )
    _write_csv(out_path, comments, header, columns)
    print(out_path)
    return 0


_BIOLEK_SWEEPABLE = ("alpha", "h_plus", "h_minus", "period", "tau_plus", "tau_minus", "amp_plus", "amp_minus")
_CIRCUIT_SWEEPABLE = (
    "beta",
    "v_on",
    "v_off",
    "r_series",
    "r_on",
    "r_off",
    "period",
    "tau_plus",
    "tau_minus",
    "amp_plus",
    "amp_minus",
)


def _apply_sweep_value(scenario: Scenario, param: str, value: float):
    """Return (model, train) with one parameter replaced."""
    from dataclasses import replace

    model, train = scenario.model, scenario.train
    if param in ("period", "tau_plus", "tau_minus", "amp_plus", "amp_minus"):
        key = "period_T" if param == "period" else param
        return model, replace(train, **{key: value})
    if isinstance(model, BiolekModel):
        if param == "alpha":
            if train.tau_minus <= 0 or train.tau_plus <= 0:
                raise ValidationError("sweeping alpha requires nonzero pulse widths")
            h_minus = -value * model.h_plus * train.tau_plus / train.tau_minus
            return replace(model, h_minus=h_minus), train
        if param in ("h_plus", "h_minus"):
            return replace(model, **{param: value}), train
        raise ValidationError(
            f"unknown sweep parameter {param!r} for a biolek model; valid: {_BIOLEK_SWEEPABLE}"
        )
    if param in ("beta", "v_on", "v_off", "r_series", "r_on", "r_off"):
        return replace(model, **{param: value}), train
    raise ValidationError(
        f"unknown sweep parameter {param!r} for a circuit model; valid: {_CIRCUIT_SWEEPABLE}"
    )


def _fixed_point_report(model, train) -> FixedPointReport:
    if isinstance(model, ThresholdCircuit):
        params = CircuitAveragedParams.from_parts(model, train)
        return circuit_fixed_point(model, params, period=train.period_T)
    if model.p_exponent == 1 and train.tau_plus > 0 and train.tau_minus > 0:
        params = BiolekAveragedParams.from_model(model, train)
        return FixedPointReport(
            location=biolek_fixed_point(params.alpha),
            stable=True,
            in_range=True,
            relaxation_time=biolek_relaxation_time(params),
        )
    return numeric_fixed_point(AveragedField(model, train))


def cmd_fixed_point(args) -> int:
    scenario = Scenario.from_file(args.scenario)
    sweep = scenario.sweep
    if args.sweep:
        sweep = _parse_sweep_flag(args.sweep)

    if sweep is None:
        report = _fixed_point_report(scenario.model, scenario.train)
        unit = "ohm" if isinstance(scenario.model, ThresholdCircuit) else "state"
        print(f"location: {_fmt(report.location)} ({unit})")
        print(f"stable: {_fmt(report.stable)}")
        print(f"in_range: {_fmt(report.in_range)}")
        print(
            "relaxation_time: "
            + (_fmt(report.relaxation_time) if report.relaxation_time is not None else "n/a")
        )
        print(
            "saturation_target: "
            + (_fmt(report.saturation_target) if report.saturation_target is not None else "n/a")
        )
        if report.marginal:
            print("marginal: true")
        return 0

    values = sweep.grid()
    loc = np.empty_like(values)
    tau = np.empty_like(values)
    stable = np.zeros(len(values), dtype=bool)
    in_range = np.zeros(len(values), dtype=bool)
    for i, value in enumerate(values):
        model, train = _apply_sweep_value(scenario, sweep.param, float(value))
        try:
            report = _fixed_point_report(model, train)
        except DegenerateFixedPointError:
            loc[i], tau[i] = math.nan, math.nan
            continue
        loc[i] = report.location
        tau[i] = report.relaxation_time if report.relaxation_time is not None else math.nan
        stable[i] = report.stable
        in_range[i] = report.in_range

    out_path = _resolve_out(args, scenario, Path(args.scenario).stem + "_sweep.csv")
    header = [sweep.param, "location", "tau_a", "stable", "in_range"]
    comments = _header_comments(
        "fixed-point sweep",
        scenario,
        [
            f"sweep: {sweep.param} in [{_fmt(sweep.lo)}, {_fmt(sweep.hi)}], "
            f"n={sweep.n}, log={_fmt(sweep.log)}",
            f"columns: {','.join(header)}",
        ],
        scenario.timestamp or args.timestamp,
    )
    _write_csv(out_path, comments, header, [values, loc, tau, stable, in_range])
    print(out_path)
    return 0


def cmd_compare(args) -> int:
    scenario = Scenario.from_file(args.scenario)
    train, cfg = scenario.train, scenario.config
    t_end = scenario.t_end_periods * train.period_T

    if isinstance(scenario.model, BiolekModel):
        params = BiolekAveragedParams.from_model(scenario.model, train)
        tau_a = biolek_relaxation_time(params)
        fp_state = biolek_fixed_point(params.alpha)
    else:
        cparams = CircuitAveragedParams.from_parts(scenario.model, train)
        report = circuit_fixed_point(scenario.model, cparams, period=train.period_T)
        if not (report.stable and report.in_range):
            raise ValidationError(
                "compare requires a stable in-range fixed point; "
                f"got location={report.location:.6g} ohm"
            )
        tau_a = report.relaxation_time
        fp_state = (scenario.model.r_off - report.location) / (
            scenario.model.r_off - scenario.model.r_on
        )

    results = []
    for x0 in scenario.x0_list:
        traj = simulate(scenario.model, train, x0, t_end, cfg)
        rep = compare(
            traj,
            lambda t, x0=x0: _closed_form_state(scenario, x0, t),
            train.period_T,
            fit_fixed_point=fp_state,
            fit_window=(0.5 * tau_a, min(3.0 * tau_a, traj.t_end)),
            analytic_relaxation_time=tau_a,
        )
        results.append(
            {
                "x0": x0,
                "sup_deviation": rep.sup_deviation,
                "rms_deviation": rep.rms_deviation,
                "per_pulse_increment": rep.per_pulse_increment,
                "fitted_relaxation_time": rep.fitted_relaxation_time,
                "analytic_relaxation_time": rep.analytic_relaxation_time,
                "alignment": rep.alignment,
            }
        )
    payload = {"scenario_hash": scenario.hash(), "window": train.period_T, "results": results}
    text = json.dumps(payload, sort_keys=True, indent=2)
    print(text)
    if scenario.output_path:
        out_path = _resolve_out(args, scenario, None)
        out_path.parent.mkdir(parents=True, exist_ok=True)
        out_path.write_text(text + "\n")
    return 0


# ---------------------------------------------------------------------------
# Canned figure datasets

FIGURE_IDS = ("fig2a", "fig2b", "fig3a", "fig3b", "fig4a", "fig4b")

_FIG3_CIRCUIT = dict(beta=0.05, v_on=1.0, v_off=-0.7, r_series=2000.0, r_on=2000.0, r_off=10000.0)
_FIG3_TRAIN = dict(period=1.0, tau_plus=0.4, tau_minus=0.25, amp_plus=2.2, amp_minus=-2.2)


def _fig_comments(fig_id: str, baked: dict, defaults_note: str, columns: list[str], timestamp: bool) -> list[str]:
    return _header_comments(
        f"figure {fig_id}",
        None,
        [
            "parameters: " + json.dumps(baked, sort_keys=True, separators=(",", ":")),
            f"tool-default choices (override by building your own scenario): {defaults_note}",
            f"columns: {','.join(columns)}",
        ],
        timestamp,
    )


def _figure_fig2a(out_dir: Path, timestamp: bool) -> Path:
    alpha, k = 2.0, 0.01
    params = BiolekAveragedParams(alpha=alpha, k=k)
    tau_a = biolek_relaxation_time(params)
    times = np.linspace(0.0, 5.0 * tau_a, 601)
    x0s = (0.0, 0.25, 0.5, 0.75, 1.0)
    header = ["t"] + [f"xbar[x0={_x0_tag(x0)}]" for x0 in x0s]
    columns = [times] + [biolek_solution(params, x0, times) for x0 in x0s]
    baked = {"alpha": alpha, "h_plus_tau_plus_over_T": k, "period": 1.0}
    comments = _fig_comments(
        "fig2a", baked, f"x0 set {list(x0s)}, time span 5*tau_a", header, timestamp
    )
    path = out_dir / "fig2a.csv"
    _write_csv(path, comments, header, columns)
    return path


def _figure_fig2b(out_dir: Path, timestamp: bool) -> Path:
    k = 0.01
    alphas = np.logspace(math.log10(0.1), math.log10(10.0), 200)
    x_a = np.array([biolek_fixed_point(a) for a in alphas])
    tau_a = np.array(
        [biolek_relaxation_time(BiolekAveragedParams(alpha=a, k=k)) for a in alphas]
    )
    header = ["alpha", "x_a", "tau_a"]
    baked = {"h_plus_tau_plus_over_T": k, "period": 1.0}
    comments = _fig_comments(
        "fig2b", baked, "alpha grid 200 log-spaced points in [0.1, 10]", header, timestamp
    )
    path = out_dir / "fig2b.csv"
    _write_csv(path, comments, header, [alphas, x_a, tau_a])
    return path


def _figure_fig3a(out_dir: Path, timestamp: bool) -> Path:
    circ = ThresholdCircuit(**_FIG3_CIRCUIT)
    train = PulseTrain(
        period_T=_FIG3_TRAIN["period"],
        tau_plus=_FIG3_TRAIN["tau_plus"],
        tau_minus=_FIG3_TRAIN["tau_minus"],
        amp_plus=_FIG3_TRAIN["amp_plus"],
        amp_minus=_FIG3_TRAIN["amp_minus"],
    )
    params = CircuitAveragedParams.from_parts(circ, train)
    tau_a = circuit_fixed_point(circ, params, period=train.period_T).relaxation_time
    times = np.linspace(0.0, 5.0 * tau_a, 601)
    r0s = (10000.0, 8000.0, 6000.0, 4000.0, 2000.0)
    header = ["t"] + [f"R_M[r0={_fmt(r0)}]" for r0 in r0s]
    columns = [times] + [
        circuit_solution(circ, params, r0, times, period=train.period_T) for r0 in r0s
    ]
    baked = {**_FIG3_CIRCUIT, **_FIG3_TRAIN, "beta_T": 0.05}
    comments = _fig_comments(
        "fig3a", baked, f"r0 set {list(r0s)}, time span 5*tau_a", header, timestamp
    )
    path = out_dir / "fig3a.csv"
    _write_csv(path, comments, header, columns)
    return path


def _figure_fig3b(out_dir: Path, timestamp: bool) -> Path:
    circ = ThresholdCircuit(**_FIG3_CIRCUIT)
    taus = np.linspace(0.0, 0.6, 201)
    loc = np.empty_like(taus)
    tau_a = np.empty_like(taus)
    stable = np.zeros(len(taus), dtype=bool)
    in_range = np.zeros(len(taus), dtype=bool)
    for i, tau_minus in enumerate(taus):
        train = PulseTrain(
            period_T=1.0,
            tau_plus=_FIG3_TRAIN["tau_plus"],
            tau_minus=float(tau_minus),
            amp_plus=_FIG3_TRAIN["amp_plus"],
            amp_minus=_FIG3_TRAIN["amp_minus"],
        )
        params = CircuitAveragedParams.from_parts(circ, train)
        try:
            report = circuit_fixed_point(circ, params, period=1.0)
        except DegenerateFixedPointError:
            loc[i], tau_a[i] = math.nan, math.nan
            continue
        loc[i] = report.location
        tau_a[i] = report.relaxation_time if report.relaxation_time is not None else math.nan
        stable[i] = report.stable
        in_range[i] = report.in_range
    header = ["tau_minus", "R_a", "tau_a", "stable", "in_range"]
    baked = {k: v for k, v in {**_FIG3_CIRCUIT, **_FIG3_TRAIN}.items() if k != "tau_minus"}
    comments = _fig_comments(
        "fig3b", baked, "tau_minus grid 201 points in [0, 0.6]T", header, timestamp
    )
    path = out_dir / "fig3b.csv"
    _write_csv(path, comments, header, [taus, loc, tau_a, stable, in_range])
    return path


def _figure_fig4a(out_dir: Path, timestamp: bool) -> Path:
    T = 1.0
    h_plus = 0.05  # h+ * tau+ = 0.01
    hm_taus = (0.005, 0.01, 0.02)
    x0 = 0.0
    cfg = IntegratorConfig()
    slowest_tau = biolek_relaxation_time(BiolekAveragedParams(alpha=0.5, k=0.01))
    t_end = math.ceil(15.0 * slowest_tau / T) * T
    header = ["t"]
    columns: list[np.ndarray] = []
    times = None
    for hm_tau in hm_taus:
        model = BiolekModel(h_plus=h_plus, h_minus=-hm_tau / 0.2)
        train = PulseTrain(period_T=T, tau_plus=0.2, tau_minus=0.2, amp_plus=1.0, amp_minus=-1.0)
        params = BiolekAveragedParams.from_model(model, train)
        traj = simulate(model, train, x0, t_end, cfg)
        if times is None:
            times = traj.times
            columns.append(times)
        averaged = time_average(traj, T)
        padded = np.full_like(traj.states, np.nan)
        padded[: len(averaged.states)] = averaged.states
        tag = _fmt(params.alpha)
        header += [f"x[alpha={tag}]", f"xbar[alpha={tag}]", f"xbar_cf[alpha={tag}]"]
        columns += [traj.states, padded, biolek_solution(params, x0, times)]
    baked = {
        "h_plus_tau_plus": 0.01,
        "h_minus_tau_minus": list(hm_taus),
        "tau_plus": 0.2,
        "tau_minus": 0.2,
        "period": T,
    }
    comments = _fig_comments(
        "fig4a",
        baked,
        f"x0={x0}, h_minus_tau_minus set {list(hm_taus)}, span 15*tau_a(alpha=0.5)",
        header,
        timestamp,
    )
    path = out_dir / "fig4a.csv"
    _write_csv(path, comments, header, columns)
    return path


def _figure_fig4b(out_dir: Path, timestamp: bool) -> Path:
    T0 = 1.0
    h_minus = -0.05 / T0  # |h-| * 0.2 T0 = 0.01
    h_plus = 0.1 / T0  # alpha = 0.5
    x0 = 0.0
    multiples = (1, 5, 25)
    base_spp = 8
    params = BiolekAveragedParams(alpha=0.5, k=h_plus * 0.2)
    t_end = 120.0 * T0
    header = ["t"]
    columns: list[np.ndarray] = []
    times = None
    for mult in multiples:
        T = mult * T0
        model = BiolekModel(h_plus=h_plus, h_minus=h_minus)
        train = PulseTrain(
            period_T=T, tau_plus=0.2 * T, tau_minus=0.2 * T, amp_plus=1.0, amp_minus=-1.0
        )
        cfg = IntegratorConfig(samples_per_period=base_spp * mult)
        traj = simulate(model, train, x0, t_end, cfg)
        if times is None:
            times = traj.times
            columns.append(times)
        averaged = time_average(traj, T)
        padded = np.full_like(traj.states, np.nan)
        padded[: len(averaged.states)] = averaged.states
        tag = f"{mult}T0"
        header += [f"x[T={tag}]", f"xbar[T={tag}]"]
        columns += [traj.states, padded]
    header.append("xbar_cf")
    columns.append(biolek_solution(params, x0, times))
    baked = {
        "alpha": 0.5,
        "abs_h_minus_times_0.2T0": 0.01,
        "tau_fraction": 0.2,
        "period_multiples": list(multiples),
    }
    comments = _fig_comments(
        "fig4b", baked, f"x0={x0}, span 120*T0, periods {list(multiples)}*T0", header, timestamp
    )
    path = out_dir / "fig4b.csv"
    _write_csv(path, comments, header, columns)
    return path


_FIGURES = {
    "fig2a": _figure_fig2a,
    "fig2b": _figure_fig2b,
    "fig3a": _figure_fig3a,
    "fig3b": _figure_fig3b,
    "fig4a": _figure_fig4a,
    "fig4b": _figure_fig4b,
}


def run_figure(fig_id: str, out_dir: str | Path = ".", timestamp: bool = False) -> Path:
    """Write one canned figure dataset and return its path."""
    if fig_id not in _FIGURES:
        raise ValidationError(
            f"unknown figure id {fig_id!r}; valid ids: {', '.join(FIGURE_IDS)}"
        )
    return _FIGURES[fig_id](Path(out_dir), timestamp)


def cmd_figure(args) -> int:
    path = run_figure(args.figure_id, args.out or ".", args.timestamp)
    print(path)
    return 0


# ---------------------------------------------------------------------------


def _resolve_out(args, scenario: Scenario, fallback_name: str | None) -> Path:
    name = scenario.output_path or fallback_name
    if name is None:
        raise ValidationError("scenario output.path is required for this command")
    path = Path(name)
    if args.out:
        path = Path(args.out) / path.name
    return path


def _parse_sweep_flag(text: str) -> SweepSpec:
    parts = text.split(":")
    if len(parts) not in (4, 5):
        raise ValidationError(
            f"--sweep expects param:min:max:n[:log], got {text!r}"
        )
    log = False
    if len(parts) == 5:
        if parts[4] != "log":
            raise ValidationError(f"--sweep fifth field must be 'log', got {parts[4]!r}")
        log = True
    try:
        return SweepSpec(
            param=parts[0], lo=float(parts[1]), hi=float(parts[2]), n=int(parts[3]), log=log
        )
    except ValueError as exc:
        raise ValidationError(f"bad --sweep value {text!r}: {exc}") from exc


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as validation errors (exit 1)."""

    def error(self, message):
        raise ValidationError(message)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="memrelax", description=__doc__.split("\n")[0])
    parser.add_argument("--version", action="version", version=f"memrelax {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="exact pulse-by-pulse simulation to CSV")
    p_sim.add_argument("scenario", help="scenario JSON file")
    p_sim.add_argument("--out", help="output directory override")
    p_sim.add_argument("--timestamp", action="store_true", help="embed a timestamp comment")
    p_sim.set_defaults(func=cmd_simulate)

    p_fp = sub.add_parser("fixed-point", help="fixed-point report or parameter sweep")
    p_fp.add_argument("scenario", help="scenario JSON file")
    p_fp.add_argument("--sweep", help="param:min:max:n[:log]")
    p_fp.add_argument("--out", help="output directory override")
    p_fp.add_argument("--timestamp", action="store_true", help="embed a timestamp comment")
    p_fp.set_defaults(func=cmd_fixed_point)

    p_cmp = sub.add_parser("compare", help="exact vs averaged-theory deviation report")
    p_cmp.add_argument("scenario", help="scenario JSON file")
    p_cmp.add_argument("--out", help="output directory override")
    p_cmp.set_defaults(func=cmd_compare)

    p_fig = sub.add_parser("figure", help="write a canned reference dataset")
    p_fig.add_argument("figure_id", help=f"one of: {', '.join(FIGURE_IDS)}")
    p_fig.add_argument("--out", help="output directory (default: current)")
    p_fig.add_argument("--timestamp", action="store_true", help="embed a timestamp comment")
    p_fig.set_defaults(func=cmd_figure)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        return args.func(args)
    except ValidityError as exc:
        print(f"validity error: {exc}", file=sys.stderr)
        return 3
    except NumericError as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return 2
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except MemrelaxError as exc:  # pragma: no cover - catch-all for subclasses
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
