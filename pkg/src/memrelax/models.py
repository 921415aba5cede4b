"""Drive waveform and memristor models.

Two first-order models are covered, both with the internal state variable
``x`` confined to [0, 1] and a linear state-to-memristance map
``R_M(x) = R_off + x (R_on - R_off)``:

* a current-controlled device whose rate is a drive-dependent magnitude
  times the Biolek window ``1 - (x - H(-I))^(2p)``, and
* a voltage-controlled threshold device in series with a resistor, whose
  state moves only while the divider voltage across it exceeds one of the
  thresholds.

The drive is a periodic two-pulse train: a positive pulse of width
``tau_plus`` starting each period, a negative pulse of width ``tau_minus``
right after it, and zero drive for the remainder of the period.

Everything here is an immutable value or a pure function; instances can be
shared freely across threads.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

__all__ = [
    "PulseTrain",
    "BiolekModel",
    "ThresholdCircuit",
    "ThresholdCheck",
    "drive_at",
    "biolek_window",
    "biolek_rate",
    "memristance",
    "state_from_memristance",
    "threshold_circuit_rate",
    "validate_above_threshold",
]


@dataclass(frozen=True)
class PulseTrain:
    """Periodic alternating-polarity pulse train.

    Phase convention: the positive pulse occupies ``[kT, kT + tau_plus)``,
    the negative pulse ``[kT + tau_plus, kT + tau_plus + tau_minus)`` and
    the drive is zero for the rest of each period.  Amplitudes are currents
    for the Biolek model and voltages for the threshold circuit.
    """

    period_T: float
    tau_plus: float
    tau_minus: float
    amp_plus: float
    amp_minus: float

    def __post_init__(self):
        if not self.period_T > 0:
            raise ValidationError(f"period_T must be > 0, got {self.period_T}")
        if self.tau_plus < 0 or self.tau_minus < 0:
            raise ValidationError("pulse widths must be >= 0")
        if self.tau_plus + self.tau_minus > self.period_T * (1 + 1e-12):
            raise ValidationError(
                f"tau_plus + tau_minus = {self.tau_plus + self.tau_minus} "
                f"exceeds the period {self.period_T}"
            )
        if not self.amp_plus > 0:
            raise ValidationError(f"amp_plus must be > 0, got {self.amp_plus}")
        if not self.amp_minus < 0:
            raise ValidationError(f"amp_minus must be < 0, got {self.amp_minus}")

    @property
    def tau_zero(self) -> float:
        """Width of the zero-drive gap per period."""
        return self.period_T - self.tau_plus - self.tau_minus


@dataclass(frozen=True)
class BiolekModel:
    """Current-controlled memristor with a Biolek window.

    The dynamics depends on the drive only through the rate magnitudes at
    the two pulse amplitudes, so those two numbers are the model parameters:
    ``h_plus`` (> 0, for the positive pulse) and ``h_minus`` (< 0, for the
    negative pulse).  Zero drive always gives zero rate.  ``p_exponent`` is
    the window exponent; the closed-form averaged solution exists for
    ``p_exponent == 1`` while the exact simulator accepts any ``p >= 1``.

    ``r_on``/``r_off`` are optional resistances used only to report a
    memristance alongside the state; they do not enter the dynamics.
    """

    h_plus: float
    h_minus: float
    p_exponent: int = 1
    r_on: float | None = None
    r_off: float | None = None

    def __post_init__(self):
        if not self.h_plus > 0:
            raise ValidationError(f"h_plus must be > 0, got {self.h_plus}")
        if not self.h_minus < 0:
            raise ValidationError(f"h_minus must be < 0, got {self.h_minus}")
        if int(self.p_exponent) != self.p_exponent or self.p_exponent < 1:
            raise ValidationError(
                f"p_exponent must be an integer >= 1, got {self.p_exponent}"
            )
        if (self.r_on is None) != (self.r_off is None):
            raise ValidationError("r_on and r_off must be given together")
        if self.r_on is not None and not 0 < self.r_on < self.r_off:
            raise ValidationError("need 0 < r_on < r_off")


@dataclass(frozen=True)
class ThresholdCircuit:
    """Threshold-type memristor in series with a resistor.

    The state moves at ``beta * (V_M - v_on)`` when the divider voltage
    ``V_M`` across the memristor exceeds the positive threshold ``v_on``,
    at ``beta * (V_M - v_off)`` when it lies below the negative threshold
    ``v_off``, and not at all in the dead zone between them.

    ``beta`` has units 1/(volt*time) so that x stays dimensionless.
    """

    beta: float
    v_on: float
    v_off: float
    r_series: float
    r_on: float
    r_off: float

    def __post_init__(self):
        if not self.beta > 0:
            raise ValidationError(f"beta must be > 0, got {self.beta}")
        if not self.v_on > 0:
            raise ValidationError(f"v_on must be > 0, got {self.v_on}")
        if not self.v_off < 0:
            raise ValidationError(f"v_off must be < 0, got {self.v_off}")
        if not self.r_series > 0:
            raise ValidationError(f"r_series must be > 0, got {self.r_series}")
        if not 0 < self.r_on < self.r_off:
            raise ValidationError(
                f"need 0 < r_on < r_off, got r_on={self.r_on}, r_off={self.r_off}"
            )


def _check_state(x) -> None:
    x = np.asarray(x)
    if np.any(x < 0) or np.any(x > 1):
        raise ValidationError(f"state x must lie in [0, 1], got {x!r}")


def drive_at(train: PulseTrain, t):
    """Drive amplitude at time ``t`` (scalar or array), for ``t >= 0``.

    Returns ``amp_plus`` inside the positive pulse, ``amp_minus`` inside the
    negative pulse and 0 in the gap, repeating with period ``period_T``.
    """
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValidationError("drive_at requires t >= 0")
    phase = np.mod(t_arr, train.period_T)
    out = np.where(
        phase < train.tau_plus,
        train.amp_plus,
        np.where(phase < train.tau_plus + train.tau_minus, train.amp_minus, 0.0),
    )
    if np.isscalar(t) or t_arr.ndim == 0:
        return float(out)
    return out


def biolek_window(x, drive: float, p: int = 1):
    """Biolek window ``1 - (x - H(-drive))^(2p)`` for x in [0, 1].

    ``H`` is the Heaviside step with the convention ``H(0) = 0``, so zero
    drive shares the positive-drive window (irrelevant in practice since
    zero drive produces zero rate).
    """
    _check_state(x)
    if int(p) != p or p < 1:
        raise ValidationError(f"window exponent p must be an integer >= 1, got {p}")
    step = 1.0 if drive < 0 else 0.0
    c = np.asarray(x, dtype=float) - step
    w = 1.0 - c ** (2 * int(p))
    if np.ndim(x) == 0:
        return float(w)
    return w


def biolek_rate(model: BiolekModel, x, drive_sign: int):
    """State rate ``h * g_B(x)`` for the given drive sign (+1, -1 or 0)."""
    _check_state(x)
    if drive_sign > 0:
        h, probe = model.h_plus, 1.0
    elif drive_sign < 0:
        h, probe = model.h_minus, -1.0
    else:
        return 0.0 if np.ndim(x) == 0 else np.zeros_like(np.asarray(x, dtype=float))
    w = biolek_window(x, probe, model.p_exponent)
    return h * w


def memristance(x, r_on: float, r_off: float):
    """Linear state-to-resistance map: ``R_off`` at x=0, ``R_on`` at x=1."""
    _check_state(x)
    r = r_off + np.asarray(x, dtype=float) * (r_on - r_off)
    if np.ndim(x) == 0:
        return float(r)
    return r


def state_from_memristance(r_m, r_on: float, r_off: float):
    """Inverse of :func:`memristance`; requires ``r_m`` in [r_on, r_off]."""
    r_arr = np.asarray(r_m, dtype=float)
    if np.any(r_arr < r_on) or np.any(r_arr > r_off):
        raise ValidationError(
            f"memristance {r_m!r} outside the allowed range [{r_on}, {r_off}]"
        )
    x = (r_off - r_arr) / (r_off - r_on)
    if np.ndim(r_m) == 0:
        return float(x)
    return x


def divider_voltage(circ: ThresholdCircuit, x, v_applied: float):
    """Voltage across the memristor in the series circuit."""
    r_m = memristance(x, circ.r_on, circ.r_off)
    return r_m * v_applied / (circ.r_series + r_m)


def threshold_circuit_rate(circ: ThresholdCircuit, x, v_applied: float):
    """State rate of the series circuit under an applied voltage.

    Computes the divider voltage across the memristor and applies the
    three-branch threshold law.  Continuous at the threshold crossings,
    where the moving branches meet the dead zone at rate zero.
    """
    _check_state(x)
    v_m = np.asarray(divider_voltage(circ, x, v_applied))
    rate = np.where(
        v_m > circ.v_on,
        circ.beta * (v_m - circ.v_on),
        np.where(v_m < circ.v_off, circ.beta * (v_m - circ.v_off), 0.0),
    )
    if np.ndim(x) == 0:
        return float(rate)
    return rate


@dataclass(frozen=True)
class ThresholdCheck:
    """Outcome of the above-threshold validation with worst-case margins.

    ``pos_margin`` is the divider voltage during the positive pulse minus
    ``v_on`` (needs to be > 0), ``neg_margin`` the divider voltage during
    the negative pulse minus ``v_off`` (needs to be < 0), both evaluated at
    the worst case ``R_M = r_on``.
    """

    ok: bool
    pos_margin: float
    neg_margin: float

    def __bool__(self) -> bool:
        return self.ok


def validate_above_threshold(circ: ThresholdCircuit, train: PulseTrain) -> ThresholdCheck:
    """Check that both pulses keep the memristor above threshold everywhere.

    The divider voltage is monotone in ``R_M``, so the worst case over
    ``R_M`` in ``[r_on, r_off]`` is at ``r_on`` for both polarities.  A
    pulse of zero width is ignored.
    """
    ratio = circ.r_on / (circ.r_series + circ.r_on)
    pos_margin = ratio * train.amp_plus - circ.v_on
    neg_margin = ratio * train.amp_minus - circ.v_off
    ok = (train.tau_plus == 0 or pos_margin > 0) and (
        train.tau_minus == 0 or neg_margin < 0
    )
    return ThresholdCheck(ok=ok, pos_margin=pos_margin, neg_margin=neg_margin)
