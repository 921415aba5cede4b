"""Time-averaged evolution: closed forms, fixed points, relaxation times.

Averaging the state equation over one drive period turns the pulsed
dynamics into the autonomous equation

    d(xbar)/dt = (f(xbar, A+) * tau_plus + f(xbar, A-) * tau_minus) / T,

whose zeros are the fixed points; a fixed point is stable when the
right-hand side has negative slope there.

For the Biolek device with window exponent 1 the averaged equation reduces
to ``dxbar/dt = k [ (alpha - 1) xbar^2 - 2 alpha xbar + 1 ]`` with
``k = h_plus * tau_plus / T`` and ``alpha = |h_minus * tau_minus| /
(h_plus * tau_plus)``; it has the hyperbolic-tangent solution implemented
in :func:`biolek_solution`, a plain exponential in the symmetric case
``alpha == 1``, the fixed point ``x_a = 1 / (alpha + sqrt(1 - alpha +
alpha^2))`` and relaxation time ``1 / (2 k sqrt(1 - alpha + alpha^2))``.

For the threshold circuit (above-threshold drive assumed) the averaged
equation in memristance coordinates is separable; its solution is implicit
in a logarithmic relation solved here by bracketed root-finding.  The
reduced drive parameters are ``kappa = V+ tau_plus + V- tau_minus`` and
``p = v_on tau_plus + v_off tau_minus``; the fixed point sits at
``R_a = R p / (kappa - p)`` and is stable exactly when ``kappa > 0``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    DegenerateFixedPointError,
    InvalidRequestError,
    NumericError,
    ValidationError,
    ValidityError,
)
from .models import (
    BiolekModel,
    PulseTrain,
    ThresholdCircuit,
    memristance,
    validate_above_threshold,
)

__all__ = [
    "AveragedField",
    "FixedPointReport",
    "BiolekAveragedParams",
    "CircuitAveragedParams",
    "averaged_rate",
    "biolek_averaged_ode_rhs",
    "biolek_solution",
    "biolek_fixed_point",
    "biolek_relaxation_time",
    "biolek_symmetry_map",
    "circuit_fixed_point",
    "circuit_relaxation_time",
    "circuit_solution",
    "numeric_fixed_point",
]

BRANCH_TOL = 1e-8  # |alpha - 1| below this uses the exponential branch


def _discriminant(alpha: float) -> float:
    """sqrt(1 - alpha + alpha^2); bounded below by sqrt(3)/2."""
    return math.sqrt(1.0 - alpha + alpha * alpha)


@dataclass(frozen=True)
class BiolekAveragedParams:
    """Reduced parameters of the averaged Biolek equation (window exponent 1)."""

    alpha: float
    k: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValidationError(f"alpha must be > 0, got {self.alpha}")
        if not self.k > 0:
            raise ValidationError(f"k must be > 0, got {self.k}")

    @classmethod
    def from_model(cls, model: BiolekModel, train: PulseTrain) -> "BiolekAveragedParams":
        if model.p_exponent != 1:
            raise ValidationError(
                "closed-form averaged dynamics requires window exponent 1, "
                f"got p={model.p_exponent}"
            )
        hp_tau = model.h_plus * train.tau_plus
        hm_tau = abs(model.h_minus) * train.tau_minus
        if hp_tau <= 0 or hm_tau <= 0:
            raise ValidationError("both pulses need positive width for alpha/k")
        return cls(alpha=hm_tau / hp_tau, k=hp_tau / train.period_T)

    @property
    def discriminant(self) -> float:
        return _discriminant(self.alpha)


@dataclass(frozen=True)
class CircuitAveragedParams:
    """Reduced drive/threshold parameters of the averaged circuit equation."""

    kappa: float
    p_param: float

    @classmethod
    def from_parts(cls, circ: ThresholdCircuit, train: PulseTrain) -> "CircuitAveragedParams":
        kappa = train.amp_plus * train.tau_plus + train.amp_minus * train.tau_minus
        p_param = circ.v_on * train.tau_plus + circ.v_off * train.tau_minus
        return cls(kappa=kappa, p_param=p_param)


@dataclass(frozen=True)
class FixedPointReport:
    """Where the averaged field vanishes and how trajectories behave there.

    ``location`` is in state coordinates for Biolek/numeric reports and in
    ohms for circuit reports.  ``relaxation_time`` is set only for a stable
    in-range fixed point.  When no fixed point lies in range,
    ``saturation_target`` names the boundary the state drifts to.
    ``marginal`` flags a exactly-zero linearization, which the stability
    dichotomy does not cover.
    """

    location: float
    stable: bool
    in_range: bool
    relaxation_time: float | None = None
    saturation_target: float | None = None
    marginal: bool = False


@dataclass(frozen=True)
class AveragedField:
    """One-period averaged vector field ``xbar -> d(xbar)/dt`` of a model.

    For the threshold circuit the averaged form assumes the drive keeps the
    device above threshold for every admissible memristance; construction
    fails with :class:`ValidityError` when that does not hold.
    """

    model: BiolekModel | ThresholdCircuit
    train: PulseTrain

    def __post_init__(self):
        if isinstance(self.model, ThresholdCircuit):
            check = validate_above_threshold(self.model, self.train)
            if not check.ok:
                raise ValidityError(
                    "averaged circuit dynamics requires above-threshold drive; "
                    f"worst-case margins: positive {check.pos_margin:+.6g} V "
                    f"(need > 0), negative {check.neg_margin:+.6g} V (need < 0)"
                )
        elif not isinstance(self.model, BiolekModel):
            raise ValidationError(f"unsupported model type {type(self.model).__name__}")

    def rate(self, xbar):
        """Averaged d(xbar)/dt; accepts scalars or arrays in [0, 1]."""
        x = np.asarray(xbar, dtype=float)
        if np.any(x < 0) or np.any(x > 1):
            raise ValidationError(f"xbar must lie in [0, 1], got {xbar!r}")
        tr = self.train
        if isinstance(self.model, BiolekModel):
            p2 = 2 * int(self.model.p_exponent)
            pos = self.model.h_plus * (1.0 - x**p2)
            neg = self.model.h_minus * (1.0 - (x - 1.0) ** p2)
            out = (pos * tr.tau_plus + neg * tr.tau_minus) / tr.period_T
        else:
            circ = self.model
            params = CircuitAveragedParams.from_parts(circ, tr)
            r_m = memristance(x, circ.r_on, circ.r_off)
            out = (
                circ.beta
                / tr.period_T
                * (r_m / (circ.r_series + r_m) * params.kappa - params.p_param)
            )
        if np.ndim(xbar) == 0:
            return float(out)
        return out


def averaged_rate(field: AveragedField, xbar):
    """Module-level alias for :meth:`AveragedField.rate`."""
    return field.rate(xbar)


def biolek_averaged_ode_rhs(params: BiolekAveragedParams, xbar):
    """k * [ (alpha - 1) xbar^2 - 2 alpha xbar + 1 ]."""
    x = np.asarray(xbar, dtype=float)
    if np.any(x < 0) or np.any(x > 1):
        raise ValidationError(f"xbar must lie in [0, 1], got {xbar!r}")
    a = params.alpha
    out = params.k * ((a - 1.0) * x * x - 2.0 * a * x + 1.0)
    if np.ndim(xbar) == 0:
        return float(out)
    return out


def biolek_fixed_point(alpha: float) -> float:
    """Stable fixed point of the averaged Biolek equation.

    Algebraically (alpha - D)/(alpha - 1) with D = sqrt(1 - alpha +
    alpha^2); rationalised to 1/(alpha + D), which is exact at alpha = 1
    and free of cancellation near it.
    """
    if not alpha > 0:
        raise ValidationError(f"alpha must be > 0, got {alpha}")
    return 1.0 / (alpha + _discriminant(alpha))


def biolek_relaxation_time(params: BiolekAveragedParams) -> float:
    """Characteristic time of the approach to the stable fixed point."""
    return 1.0 / (2.0 * params.k * params.discriminant)


def biolek_solution(params: BiolekAveragedParams, x0: float, t):
    """Averaged trajectory xbar(t) from xbar(0) = x0.

    Hyperbolic-tangent form for asymmetric drives; within ``BRANCH_TOL`` of
    ``alpha == 1`` the exponential limit ``1/2 + (x0 - 1/2) exp(-2 k t)``
    is used instead, since the general form loses accuracy to cancellation
    there.  Accepts scalar or array ``t >= 0``.
    """
    if not 0.0 <= x0 <= 1.0:
        raise ValidationError(f"x0 must lie in [0, 1], got {x0}")
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValidationError("t must be >= 0")
    a, k = params.alpha, params.k
    if abs(a - 1.0) <= BRANCH_TOL:
        out = 0.5 + (x0 - 0.5) * np.exp(-2.0 * k * t_arr)
    else:
        d = params.discriminant
        th = np.tanh(k * d * t_arr)
        num = (a * x0 - 1.0) * th - d * x0
        den = ((a - 1.0) * x0 - a) * th - d
        out = num / den
    if np.ndim(t) == 0:
        return float(out)
    return out


def biolek_symmetry_map(alpha: float, x0: float, t: float):
    """Dual parameters under the drive-swap symmetry.

    Swapping alpha for 1/alpha, mirroring the state and rescaling time by
    alpha maps averaged trajectories onto each other:
    ``biolek_solution(1/alpha, k, 1 - x0, t) ==
    1 - biolek_solution(alpha, k, x0, t / alpha)`` for the same k.
    """
    if not alpha > 0:
        raise ValidationError(f"alpha must be > 0, got {alpha}")
    return 1.0 / alpha, 1.0 - x0, t / alpha


def _circuit_fixed_point_ohms(circ: ThresholdCircuit, params: CircuitAveragedParams) -> float:
    denom = params.kappa - params.p_param
    if denom == 0.0:
        raise DegenerateFixedPointError(
            "kappa == p: the averaged circuit equation has no finite fixed point"
        )
    return circ.r_series * params.p_param / denom


def _circuit_rhs_ohms(circ: ThresholdCircuit, params: CircuitAveragedParams, r_m, period: float = 1.0):
    """dR_M/dt of the averaged circuit equation at memristance r_m."""
    divider = r_m / (circ.r_series + r_m)
    return (
        -circ.beta
        * (circ.r_off - circ.r_on)
        / period
        * (divider * params.kappa - params.p_param)
    )


def circuit_fixed_point(
    circ: ThresholdCircuit, params: CircuitAveragedParams, period: float = 1.0
) -> FixedPointReport:
    """Fixed point of the averaged circuit dynamics, in ohms.

    ``R_a = R p / (kappa - p)``; stable when the linearised decay
    coefficient ``beta (r_off - r_on) kappa R / (T (R + R_a)^2)`` is
    positive, i.e. exactly when kappa > 0.  When R_a falls outside
    [r_on, r_off] the memristance instead saturates monotonically at the
    boundary selected by the sign of the averaged rate inside the range.
    ``period`` scales the reported relaxation time.
    """
    r_a = _circuit_fixed_point_ohms(circ, params)
    in_range = circ.r_on < r_a < circ.r_off
    coeff = (
        circ.beta
        * (circ.r_off - circ.r_on)
        * params.kappa
        * circ.r_series
        / (circ.r_series + r_a) ** 2
    )
    marginal = coeff == 0.0
    stable = coeff > 0.0
    relaxation = None
    if stable and in_range:
        relaxation = circuit_relaxation_time(circ, params, period=period, _checked=True)
    saturation = None
    if not in_range:
        mid_rate = _circuit_rhs_ohms(circ, params, 0.5 * (circ.r_on + circ.r_off))
        saturation = circ.r_off if mid_rate > 0 else circ.r_on
    return FixedPointReport(
        location=r_a,
        stable=stable,
        in_range=in_range,
        relaxation_time=relaxation,
        saturation_target=saturation,
        marginal=marginal,
    )


def circuit_relaxation_time(
    circ: ThresholdCircuit,
    params: CircuitAveragedParams,
    period: float = 1.0,
    _checked: bool = False,
) -> float:
    """T kappa R / (beta (r_off - r_on) (kappa - p)^2), for a stable
    in-range fixed point only."""
    if not _checked:
        report = circuit_fixed_point(circ, params, period=period)
        if not (report.stable and report.in_range):
            raise InvalidRequestError(
                "relaxation time requires a stable fixed point inside "
                f"[r_on, r_off]; got location={report.location:.6g} ohm, "
                f"stable={report.stable}, in_range={report.in_range}"
            )
    return (
        period
        * params.kappa
        * circ.r_series
        / (circ.beta * (circ.r_off - circ.r_on) * (params.kappa - params.p_param) ** 2)
    )


_LOG_GUARD_OHMS = 1e-9


def circuit_solution(
    circ: ThresholdCircuit,
    params: CircuitAveragedParams,
    r0: float,
    t,
    period: float = 1.0,
):
    """Averaged memristance R_M(t) from R_M(0) = r0, by implicit inversion.

    Solves ``R_M - r0 + (R + R_a) ln((R_M - R_a)/(r0 - R_a)) = -c t`` with
    ``c = beta (r_off - r_on) (kappa - p) / T`` by bisection on the bracket
    between r0 and R_a (the left side is strictly monotone there), followed
    by a bracket-safeguarded Newton polish.  Requires a stable in-range
    fixed point; accepts scalar or array ``t >= 0``.
    """
    if not circ.r_on <= r0 <= circ.r_off:
        raise ValidationError(
            f"r0={r0} outside the admissible range [{circ.r_on}, {circ.r_off}]"
        )
    t_arr = np.asarray(t, dtype=float)
    if np.any(t_arr < 0):
        raise ValidationError("t must be >= 0")
    if params.kappa <= 0:
        raise InvalidRequestError(
            f"closed-form relaxation requires kappa > 0, got kappa={params.kappa:.6g}"
        )
    report = circuit_fixed_point(circ, params, period=period)
    if not report.in_range:
        raise InvalidRequestError(
            f"fixed point {report.location:.6g} ohm lies outside "
            f"[{circ.r_on}, {circ.r_off}]; use the exact simulator instead"
        )
    r_a = report.location
    if abs(r0 - r_a) < _LOG_GUARD_OHMS:
        out = np.full_like(t_arr, r_a, dtype=float)
        return float(out) if np.ndim(t) == 0 else out

    c = circ.beta * (circ.r_off - circ.r_on) * (params.kappa - params.p_param) / period
    scale = circ.r_series + r_a
    span0 = r0 - r_a

    def residual(r_m, tt):
        return r_m - r0 + scale * math.log((r_m - r_a) / span0) + c * tt

    def solve_one(tt: float) -> float:
        if tt == 0.0:
            return r0
        neg_end, pos_end = r_a, r0  # residual -> -inf at r_a, >= 0 at r0
        for _ in range(200):
            mid = 0.5 * (neg_end + pos_end)
            if mid == neg_end or mid == pos_end:
                break
            if residual(mid, tt) >= 0.0:
                pos_end = mid
            else:
                neg_end = mid
            if abs(pos_end - neg_end) <= _LOG_GUARD_OHMS:
                break
        r = 0.5 * (neg_end + pos_end)
        lo, hi = min(neg_end, pos_end), max(neg_end, pos_end)
        for _ in range(12):
            f = residual(r, tt)
            df = 1.0 + scale / (r - r_a)
            step = f / df
            r_new = min(max(r - step, lo), hi)
            if abs(r_new - r) <= 1e-15 * max(1.0, abs(r)):
                r = r_new
                break
            r = r_new
        return r

    out = np.array([solve_one(float(tt)) for tt in np.atleast_1d(t_arr)])
    if np.ndim(t) == 0:
        return float(out[0])
    return out.reshape(t_arr.shape)


def numeric_fixed_point(
    field: AveragedField, cells: int = 1024, xtol: float = 1e-12
) -> FixedPointReport:
    """Locate and classify the zero of an averaged field on [0, 1].

    A uniform scan over ``cells`` intervals brackets sign changes (both
    models have at most one interior zero), bisection refines to ``xtol``,
    and the sign of a central finite-difference derivative classifies
    stability.  Without a sign change, the report flags saturation toward
    the boundary the sign-definite rate points at.
    """
    xs = np.linspace(0.0, 1.0, cells + 1)
    rates = field.rate(xs)
    brackets = []
    for i in range(cells):
        a, b = rates[i], rates[i + 1]
        if a == 0.0:
            brackets.append((xs[i], xs[i]))
        elif a * b < 0.0:
            brackets.append((xs[i], xs[i + 1]))
    if rates[-1] == 0.0:
        brackets.append((xs[-1], xs[-1]))
    if len(brackets) > 1:
        raise NumericError(
            f"expected at most one interior fixed point, bracketed {len(brackets)}"
        )

    if not brackets:
        interior = rates[1:-1]
        if np.all(interior > 0):
            target = 1.0
        elif np.all(interior < 0):
            target = 0.0
        else:
            raise NumericError("averaged rate is neither sign-definite nor bracketable")
        return FixedPointReport(
            location=math.nan,
            stable=False,
            in_range=False,
            saturation_target=target,
        )

    lo, hi = brackets[0]
    if lo == hi:
        root = lo
    else:
        f_lo = field.rate(lo)
        while hi - lo > xtol:
            mid = 0.5 * (lo + hi)
            f_mid = field.rate(mid)
            if f_mid == 0.0:
                lo = hi = mid
                break
            if (f_lo < 0) == (f_mid < 0):
                lo, f_lo = mid, f_mid
            else:
                hi = mid
        root = 0.5 * (lo + hi)

    h = 1e-6
    if root < h or root > 1.0 - h:
        raise NumericError(f"fixed point {root:.3g} too close to the boundary to classify")
    deriv = (field.rate(root + h) - field.rate(root - h)) / (2.0 * h)
    marginal = deriv == 0.0
    stable = deriv < 0.0
    relaxation = -1.0 / deriv if stable else None
    return FixedPointReport(
        location=float(root),
        stable=stable,
        in_range=True,
        relaxation_time=relaxation,
        marginal=marginal,
    )
