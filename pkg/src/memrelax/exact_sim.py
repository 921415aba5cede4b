"""Exact pulse-by-pulse integration of the state equation.

The drive is piecewise constant, so the integration grid is aligned to the
pulse edges: within each constant-drive span a classical fixed-step RK4
scheme is applied, and output samples fall on a uniform grid of
``samples_per_period`` points per period.  Sample times are merged into
the integration breakpoints, so no interpolation ever happens and refining
the substep count never moves a drive switch.

Also provides the sliding one-period time average used by the averaged
theory: ``xbar(t) = (1/T) * integral of x over [t, t+T]``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from . import _kernels
from .errors import ValidationError
from .models import BiolekModel, PulseTrain, ThresholdCircuit, memristance

__all__ = [
    "IntegratorConfig",
    "Trajectory",
    "simulate",
    "time_average",
    "integrate_constant_drive",
]

_EDGE_TOL = 1e-12


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step integrator settings.

    ``substeps_per_segment`` RK4 steps span each full constant-drive
    segment (intervals cut out of a segment by sample times get a
    proportional share, at least one).  ``samples_per_period`` sets the
    output grid spacing ``period_T / samples_per_period``.
    """

    substeps_per_segment: int = 16
    samples_per_period: int = 8

    def __post_init__(self):
        if self.substeps_per_segment < 1:
            raise ValidationError("substeps_per_segment must be >= 1")
        if self.samples_per_period < 1:
            raise ValidationError("samples_per_period must be >= 1")


@dataclass(frozen=True)
class Trajectory:
    """Time-ordered state samples plus the run metadata that produced them."""

    times: np.ndarray
    states: np.ndarray
    model: BiolekModel | ThresholdCircuit
    train: PulseTrain
    x0: float
    config: IntegratorConfig
    kind: str = "exact"

    def __len__(self) -> int:
        return len(self.times)

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    @property
    def dt(self) -> float:
        """Uniform sample spacing."""
        return float(self.times[1] - self.times[0])

    def memristance_series(self) -> np.ndarray:
        """Memristance samples; needs the model to carry r_on/r_off."""
        r_on = getattr(self.model, "r_on", None)
        r_off = getattr(self.model, "r_off", None)
        if r_on is None or r_off is None:
            raise ValidationError("model carries no r_on/r_off resistances")
        return memristance(self.states, r_on, r_off)


def _model_pack(model) -> tuple[int, np.ndarray, int]:
    if isinstance(model, BiolekModel):
        return _kernels.BIOLEK, np.array([model.h_plus, model.h_minus]), 2 * int(
            model.p_exponent
        )
    if isinstance(model, ThresholdCircuit):
        prm = np.array(
            [model.beta, model.v_on, model.v_off, model.r_series, model.r_on, model.r_off]
        )
        return _kernels.THRESHOLD, prm, 2
    raise ValidationError(f"unsupported model type {type(model).__name__}")


def _build_schedule(train: PulseTrain, dt_sample: float, substeps: int, span: float):
    """Split ``[0, span]`` at pulse edges and sample times.

    Returns (offsets, amps, nsubs, sample_slots); slot j means the interval
    ends exactly at sample time j*dt_sample, -1 means it ends at a plain
    segment edge.  ``span`` is the full period for the repeated schedule or
    the remainder length for a trailing partial period.
    """
    tol = _EDGE_TOL * train.period_T
    edges = [0.0, span]
    for e in (train.tau_plus, train.tau_plus + train.tau_minus):
        if tol < e < span - tol:
            edges.append(e)
    n_samples = int(math.floor(span / dt_sample + 1e-9))
    pts = sorted(set(edges) | {j * dt_sample for j in range(1, n_samples + 1)})
    merged = [pts[0]]
    for value in pts[1:]:
        if value - merged[-1] > tol:
            merged.append(value)
        else:
            merged[-1] = max(merged[-1], value)
    offs = np.asarray(merged, dtype=float)

    seg_edges = (train.tau_plus, train.tau_plus + train.tau_minus)
    amps, nsubs, slots = [], [], []
    for a, b in zip(offs[:-1], offs[1:]):
        mid = 0.5 * (a + b)
        if mid < seg_edges[0]:
            amp, seg_len = train.amp_plus, train.tau_plus
        elif mid < seg_edges[1]:
            amp, seg_len = train.amp_minus, train.tau_minus
        else:
            amp, seg_len = 0.0, max(train.tau_zero, tol)
        amps.append(amp)
        nsubs.append(max(1, math.ceil(substeps * (b - a) / seg_len - 1e-9)))
        j = int(round(b / dt_sample))
        slots.append(j if abs(b - j * dt_sample) <= tol and j >= 1 else -1)
    return (
        offs,
        np.asarray(amps, dtype=float),
        np.asarray(nsubs, dtype=np.int64),
        np.asarray(slots, dtype=np.int64),
    )


_EMPTY_F = np.zeros(1, dtype=float)
_EMPTY_I = np.zeros(0, dtype=np.int64)


def simulate(
    model: BiolekModel | ThresholdCircuit,
    train: PulseTrain,
    x0: float,
    t_end: float,
    cfg: IntegratorConfig | None = None,
) -> Trajectory:
    """Integrate ``xdot = f(x, drive(t))`` from ``x(0) = x0`` up to ``t_end``.

    The state is kept inside [0, 1]: the window mechanism confines the
    Biolek model (a post-step clamp only guards float overshoot), while the
    threshold circuit is clamped at the boundary for as long as the rate
    keeps pushing outward.  Output samples sit on the uniform grid
    ``j * period_T / samples_per_period``; ``t_end`` is truncated to the
    last grid point it covers.
    """
    if not 0.0 <= x0 <= 1.0:
        raise ValidationError(f"x0 must lie in [0, 1], got {x0}")
    if not t_end > 0:
        raise ValidationError(f"t_end must be > 0, got {t_end}")
    cfg = cfg or IntegratorConfig()
    code, prm, p2 = _model_pack(model)

    T = train.period_T
    spp = cfg.samples_per_period
    dt_sample = T / spp
    n_total = int(math.floor(t_end / dt_sample + 1e-9))
    if n_total < 1:
        raise ValidationError(
            f"t_end={t_end} shorter than one sample interval {dt_sample}"
        )
    n_periods = int(math.floor(t_end / T + 1e-9))
    remainder = t_end - n_periods * T

    offs, amps, nsubs, slots = _build_schedule(
        train, dt_sample, cfg.substeps_per_segment, T
    )
    if remainder > _EDGE_TOL * T:
        r_offs, r_amps, r_nsubs, r_slots = _build_schedule(
            train, dt_sample, cfg.substeps_per_segment, remainder
        )
    else:
        r_offs, r_amps, r_nsubs, r_slots = _EMPTY_F, _EMPTY_F[:0], _EMPTY_I, _EMPTY_I

    out = np.empty(n_total + 1, dtype=float)
    out[0] = x0
    _kernels.run_schedule(
        code,
        prm,
        p2,
        float(x0),
        n_periods,
        spp,
        offs,
        amps,
        nsubs,
        slots,
        r_offs,
        r_amps,
        r_nsubs,
        r_slots,
        out,
    )
    times = np.arange(n_total + 1, dtype=float) * dt_sample
    return Trajectory(
        times=times, states=out, model=model, train=train, x0=float(x0), config=cfg
    )


def integrate_constant_drive(
    model: BiolekModel | ThresholdCircuit,
    x0: float,
    amp: float,
    span: float,
    substeps: int,
) -> float:
    """Advance the state across one constant-drive span (RK4, clamped).

    Exposed for convergence checks and as a building block; ``simulate``
    composes this over the pulse schedule.
    """
    if not 0.0 <= x0 <= 1.0:
        raise ValidationError(f"x0 must lie in [0, 1], got {x0}")
    if span < 0:
        raise ValidationError("span must be >= 0")
    if substeps < 1:
        raise ValidationError("substeps must be >= 1")
    code, prm, p2 = _model_pack(model)
    return float(
        _kernels.integrate_interval(code, prm, p2, float(x0), float(amp), span, substeps)
    )


def time_average(traj: Trajectory, window_T: float) -> Trajectory:
    """Sliding trapezoidal average of ``x`` over ``[t, t + window_T]``.

    The window must be a whole number of sample intervals (it is one period
    in every intended use).  The result is defined on
    ``[0, t_end - window_T]`` and tagged ``kind="averaged"``.
    """
    if len(traj.times) < 2:
        raise ValidationError("trajectory too short to average")
    dt = traj.dt
    w_float = window_T / dt
    w = int(round(w_float))
    if w < 1 or abs(w_float - w) > 1e-9 * max(1.0, w_float):
        raise ValidationError(
            f"window {window_T} is not a positive whole number of sample intervals {dt}"
        )
    if w >= len(traj.times):
        raise ValidationError(
            f"window {window_T} longer than the trajectory span {traj.t_end}"
        )
    weights = np.ones(w + 1)
    weights[0] = weights[-1] = 0.5
    xbar = np.convolve(traj.states, weights / w, mode="valid")
    return replace(
        traj,
        times=traj.times[: len(xbar)].copy(),
        states=xbar,
        x0=float(xbar[0]),
        kind="averaged",
    )
