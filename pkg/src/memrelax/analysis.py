"""Exact-vs-averaged agreement metrics and empirical relaxation times."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import FitQualityError, ValidationError
from .exact_sim import Trajectory, time_average

__all__ = ["ComparisonReport", "compare", "fit_relaxation_time"]


@dataclass(frozen=True)
class ComparisonReport:
    """Deviation metrics between an exact run and a closed-form trajectory.

    ``per_pulse_increment`` is the largest state change over any single
    drive period, the small parameter the averaged theory expands in.
    ``fitted_relaxation_time`` is measured from the averaged exact data and
    may be None when no usable fit window exists.
    """

    sup_deviation: float
    rms_deviation: float
    per_pulse_increment: float
    fitted_relaxation_time: float | None = None
    analytic_relaxation_time: float | None = None
    alignment: str = "center"
    n_compared: int = 0


def _period_stride(traj: Trajectory) -> int:
    stride = int(round(traj.train.period_T / traj.dt))
    if stride < 1 or abs(stride * traj.dt - traj.train.period_T) > 1e-9 * traj.train.period_T:
        raise ValidationError("trajectory sample grid does not tile the drive period")
    return stride


def compare(
    exact: Trajectory,
    closed_form: Callable[[np.ndarray], np.ndarray],
    window_T: float,
    *,
    alignment: str = "center",
    fit_fixed_point: float | None = None,
    fit_window: tuple[float, float] | None = None,
    analytic_relaxation_time: float | None = None,
) -> ComparisonReport:
    """Time-average an exact trajectory and compare it to a closed form.

    The sliding average of ``x`` over ``[t, t + window]`` estimates the
    slow trajectory at the window midpoint (a boxcar filter has group
    delay ``window/2``), so by default the closed form is evaluated at the
    averaged sample times shifted by half a window.  ``alignment="start"``
    evaluates it at the unshifted window-start times instead, which biases
    the deviation by about half a per-period increment.

    A relaxation-time fit over ``fit_window`` is attempted when
    ``fit_fixed_point`` is given; a rejected fit leaves the field None.
    """
    if alignment not in ("center", "start"):
        raise ValidationError(f"alignment must be 'center' or 'start', got {alignment!r}")
    if exact.t_end < 10 * exact.train.period_T * (1 - 1e-12):
        raise ValidationError(
            f"exact trajectory spans {exact.t_end:.6g}, need at least ten periods"
        )
    averaged = time_average(exact, window_T)
    shift = 0.5 * window_T if alignment == "center" else 0.0
    reference = np.asarray(closed_form(averaged.times + shift), dtype=float)
    dev = averaged.states - reference
    sup = float(np.max(np.abs(dev)))
    rms = float(np.sqrt(np.mean(dev * dev)))

    stride = _period_stride(exact)
    strobe = exact.states[::stride]
    per_pulse = float(np.max(np.abs(np.diff(strobe)))) if len(strobe) > 1 else 0.0

    fitted = None
    if fit_fixed_point is not None and fit_window is not None:
        try:
            fitted = fit_relaxation_time(averaged, fit_fixed_point, fit_window)
        except (FitQualityError, ValidationError):
            fitted = None
    return ComparisonReport(
        sup_deviation=sup,
        rms_deviation=rms,
        per_pulse_increment=per_pulse,
        fitted_relaxation_time=fitted,
        analytic_relaxation_time=analytic_relaxation_time,
        alignment=alignment,
        n_compared=len(averaged.times),
    )


def fit_relaxation_time(
    data: Trajectory | tuple,
    fixed_point: float,
    window: tuple[float, float],
    monotone_lag: int | None = None,
) -> float:
    """Exponential time constant from a log-linear least-squares fit.

    Fits ``ln |x(t) - fixed_point|`` over ``window = (t1, t2)`` by ordinary
    least squares and returns ``-1/slope``.  All samples in the window must
    lie strictly on one side of the fixed point, and the distance must
    decay monotonically at ``monotone_lag`` samples' spacing (defaults to
    one drive period for trajectories, one sample otherwise) -- a
    trajectory still carrying ripple fails these checks and should be
    time-averaged first.
    """
    if isinstance(data, Trajectory):
        times, values = data.times, data.states
        if monotone_lag is None:
            monotone_lag = _period_stride(data)
    else:
        times, values = np.asarray(data[0], dtype=float), np.asarray(data[1], dtype=float)
        if monotone_lag is None:
            monotone_lag = 1
    t1, t2 = window
    if not t2 > t1:
        raise ValidationError(f"empty fit window {window}")
    mask = (times >= t1) & (times <= t2)
    t = times[mask]
    d = values[mask] - fixed_point
    if len(t) < 3:
        raise ValidationError(f"fit window {window} holds {len(t)} samples, need >= 3")
    if np.any(d == 0.0) or np.any(d > 0) and np.any(d < 0):
        raise FitQualityError(
            "samples touch or cross the fixed point; pass the time-averaged trajectory"
        )
    dist = np.abs(d)
    lag = max(1, min(int(monotone_lag), len(dist) - 1))
    if np.any(dist[lag:] > dist[:-lag] * (1.0 + 1e-12)):
        raise FitQualityError("log distance to the fixed point is not decaying")
    slope = np.polyfit(t, np.log(dist), 1)[0]
    if not slope < 0:
        raise FitQualityError(f"non-negative log-distance slope {slope:.3g}")
    if not math.isfinite(slope):
        raise FitQualityError("log-distance fit diverged")
    return float(-1.0 / slope)
