"""Independent reference implementations used as test oracles.

Nothing here imports from memrelax: the window-model segments are solved
with their exact hyperbolic-tangent flows, the threshold-circuit segments
through the separable implicit relation, fixed points by brute bisection,
and averaged ODEs by a locally written fine-step RK4.  These stay
deliberately slow and simple.
"""

import math

import numpy as np


# -- generic helpers ---------------------------------------------------------


def bisect(fn, lo, hi, tol=1e-14, max_iter=200):
    """Plain bisection for a sign change of fn on [lo, hi]."""
    f_lo, f_hi = fn(lo), fn(hi)
    if f_lo == 0.0:
        return lo
    if f_hi == 0.0:
        return hi
    assert f_lo * f_hi < 0, "no sign change on the bracket"
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        f_mid = fn(mid)
        if f_mid == 0.0 or hi - lo < tol:
            return mid
        if (f_mid < 0) == (f_lo < 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def rk4_path(f, x0, t_grid):
    """Fine-step RK4 along a given time grid; returns x at every grid point."""
    xs = [float(x0)]
    x = float(x0)
    for a, b in zip(t_grid[:-1], t_grid[1:]):
        h = b - a
        k1 = f(x)
        k2 = f(x + 0.5 * h * k1)
        k3 = f(x + 0.5 * h * k2)
        k4 = f(x + h * k3)
        x = x + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)
        xs.append(x)
    return np.asarray(xs)


# -- Biolek window model, window exponent 1 ----------------------------------
# Constant positive drive: xdot = h+ (1 - x^2)    -> tanh flow in x
# Constant negative drive: xdot = h- (1 - (x-1)^2) -> tanh flow in x - 1


def _atanh(y):
    return math.atanh(max(-1.0 + 1e-300, min(1.0 - 1e-300, y)))


def biolek_segment_pos(x, h_plus, dt):
    if x >= 1.0:
        return 1.0
    return math.tanh(h_plus * dt + _atanh(x))


def biolek_segment_neg(x, h_minus, dt):
    u = x - 1.0
    if u <= -1.0:
        return 0.0
    return 1.0 + math.tanh(h_minus * dt + _atanh(u))


def biolek_state_at_offset(x_start, h_plus, h_minus, tau_plus, tau_minus, offset):
    """Exact state within one period, `offset` after the period start."""
    if offset <= tau_plus:
        return biolek_segment_pos(x_start, h_plus, offset)
    x1 = biolek_segment_pos(x_start, h_plus, tau_plus)
    if offset <= tau_plus + tau_minus:
        return biolek_segment_neg(x1, h_minus, offset - tau_plus)
    return biolek_segment_neg(x1, h_minus, tau_minus)


def biolek_period_map(x, h_plus, h_minus, tau_plus, tau_minus):
    return biolek_segment_neg(
        biolek_segment_pos(x, h_plus, tau_plus), h_minus, tau_minus
    )


def biolek_exact_trajectory(h_plus, h_minus, T, tau_plus, tau_minus, x0, n_periods, spp):
    """Exact trajectory sampled spp times per period (plus t = 0)."""
    dt = T / spp
    out = np.empty(n_periods * spp + 1)
    out[0] = x0
    x = x0
    for k in range(n_periods):
        for j in range(1, spp + 1):
            out[k * spp + j] = biolek_state_at_offset(
                x, h_plus, h_minus, tau_plus, tau_minus, j * dt
            )
        x = out[(k + 1) * spp]
    times = np.arange(n_periods * spp + 1) * dt
    return times, out


# -- threshold series circuit -------------------------------------------------
# Within a constant-voltage segment the equation for the memristance is
# separable:  (R + R_M) / (a R_M - b) dR_M = -beta (r_off - r_on) dt
# with a = v - v_th and b = R v_th, where v_th is the active threshold.


def _circuit_ode_rhs_ohms(circ, v, r_m):
    v_m = r_m * v / (circ["r_series"] + r_m)
    if v_m > circ["v_on"]:
        rate = circ["beta"] * (v_m - circ["v_on"])
    elif v_m < circ["v_off"]:
        rate = circ["beta"] * (v_m - circ["v_off"])
    else:
        rate = 0.0
    return -(circ["r_off"] - circ["r_on"]) * rate


def circuit_segment_step(circ, r0, v, span):
    """Exact memristance after `span` under constant voltage v.

    Integrates the implicit relation; handles the dead zone, the stall
    point where the divider voltage meets the threshold, and clamping at
    r_on/r_off.
    """
    if span <= 0.0 or v == 0.0:
        return r0
    r_ser = circ["r_series"]
    v_m0 = r0 * v / (r_ser + r0)
    if circ["v_off"] <= v_m0 <= circ["v_on"]:
        return r0  # dead zone: V_M only moves with R_M, which is frozen
    v_th = circ["v_on"] if v_m0 > circ["v_on"] else circ["v_off"]
    a = v - v_th
    b = r_ser * v_th
    scale = circ["beta"] * (circ["r_off"] - circ["r_on"])

    def anti(r_m):
        # antiderivative of (r_ser + r_m)/(a r_m - b)
        return (r_m + (r_ser + b / a) * math.log(abs(a * r_m - b))) / a

    def time_to(r_m):
        return -(anti(r_m) - anti(r0)) / scale

    direction = -1.0 if _circuit_ode_rhs_ohms(circ, v, r0) < 0 else 1.0
    stall = b / a  # where V_M == v_th
    bound = circ["r_on"] if direction < 0 else circ["r_off"]
    if (direction < 0 and stall > bound) or (direction > 0 and stall < bound):
        limit, finite_hit = stall, False
    else:
        limit, finite_hit = bound, True
    if finite_hit and r0 != limit:
        t_hit = time_to(limit)
        if span >= t_hit:
            return limit

    lo, hi = (limit, r0) if direction < 0 else (r0, limit)

    def fn(r_m):
        return time_to(r_m) - span

    eps = 1e-12 * (hi - lo)
    if hi - lo <= 0:
        return r0
    return bisect(fn, lo + eps, hi - eps, tol=1e-12)


def circuit_state_at_offset(circ, train, x_start, offset):
    r_on, r_off = circ["r_on"], circ["r_off"]
    r0 = r_off + x_start * (r_on - r_off)
    tp, tm = train["tau_plus"], train["tau_minus"]
    if offset <= tp:
        r = circuit_segment_step(circ, r0, train["amp_plus"], offset)
    else:
        r = circuit_segment_step(circ, r0, train["amp_plus"], tp)
        if offset <= tp + tm:
            r = circuit_segment_step(circ, r, train["amp_minus"], offset - tp)
        else:
            r = circuit_segment_step(circ, r, train["amp_minus"], tm)
    return (r_off - r) / (r_off - r_on)


def circuit_exact_trajectory(circ, train, x0, n_periods, spp):
    T = train["period"]
    dt = T / spp
    out = np.empty(n_periods * spp + 1)
    out[0] = x0
    x = x0
    for k in range(n_periods):
        for j in range(1, spp + 1):
            out[k * spp + j] = circuit_state_at_offset(circ, train, x, j * dt)
        x = out[(k + 1) * spp]
    times = np.arange(n_periods * spp + 1) * dt
    return times, out


# -- averaged vector fields (for residuals and fixed-point cross-checks) -----


def biolek_averaged_rhs(alpha, k, x):
    return k * ((alpha - 1.0) * x * x - 2.0 * alpha * x + 1.0)


def circuit_averaged_rhs_ohms(circ, kappa, p_param, period, r_m):
    divider = r_m / (circ["r_series"] + r_m)
    return -circ["beta"] * (circ["r_off"] - circ["r_on"]) / period * (divider * kappa - p_param)
