"""Hot integration loops.

These are compiled with numba's ``@njit`` when numba is importable and the
environment variable ``MEMRELAX_NO_NUMBA`` is not set to 1/true/yes/on;
otherwise the same code runs as plain Python over numpy scalars.  The
jitted functions keep their uncompiled form reachable as ``fn.py_func``,
which the benchmark uses to time both paths in one process.

Model codes: 0 = Biolek window device, 1 = threshold series circuit.
Parameter packing (float64 arrays):
    Biolek:    [h_plus, h_minus]            plus the even exponent 2p
    circuit:   [beta, v_on, v_off, r_series, r_on, r_off]
"""

import os

__all__ = ["NUMBA_ENABLED", "njit", "rate", "integrate_interval", "run_schedule"]


def _identity_njit(*args, **kwargs):
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrap(func):
        return func

    return wrap


_disabled = os.environ.get("MEMRELAX_NO_NUMBA", "").strip().lower() in {
    "1",
    "true",
    "yes",
    "on",
}
if _disabled:
    njit = _identity_njit
    NUMBA_ENABLED = False
else:
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a hard dep, belt and braces
        njit = _identity_njit
        NUMBA_ENABLED = False

BIOLEK = 0
THRESHOLD = 1


@njit(cache=True)
def rate(model, prm, p2, x, amp):
    """Instantaneous state rate f(x, amp) for either model."""
    if model == 0:
        if amp > 0.0:
            h = prm[0]
            c = x
        elif amp < 0.0:
            h = prm[1]
            c = x - 1.0
        else:
            return 0.0
        c2 = c * c
        w = c2
        for _ in range(p2 // 2 - 1):
            w *= c2
        return h * (1.0 - w)
    else:
        if amp == 0.0:
            return 0.0
        beta = prm[0]
        v_on = prm[1]
        v_off = prm[2]
        r = prm[3]
        r_on = prm[4]
        r_off = prm[5]
        r_m = r_off + x * (r_on - r_off)
        v_m = r_m * amp / (r + r_m)
        if v_m > v_on:
            return beta * (v_m - v_on)
        elif v_m < v_off:
            return beta * (v_m - v_off)
        return 0.0


@njit(cache=True)
def integrate_interval(model, prm, p2, x, amp, span, nsub):
    """Advance x across a constant-drive interval with nsub RK4 steps.

    The state is clamped into [0, 1] after every step; once it sits at a
    boundary with the rate still pushing outward (or the rate vanishes,
    which for an autonomous scalar field means it never moves again within
    this drive level), the rest of the interval is skipped.
    """
    if amp == 0.0:
        return x
    h = span / nsub
    for _ in range(nsub):
        k1 = rate(model, prm, p2, x, amp)
        if k1 == 0.0:
            break
        k2 = rate(model, prm, p2, x + 0.5 * h * k1, amp)
        k3 = rate(model, prm, p2, x + 0.5 * h * k2, amp)
        k4 = rate(model, prm, p2, x + h * k3, amp)
        x = x + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        if x <= 0.0:
            x = 0.0
            if rate(model, prm, p2, x, amp) < 0.0:
                break
        elif x >= 1.0:
            x = 1.0
            if rate(model, prm, p2, x, amp) > 0.0:
                break
    return x


@njit(cache=True)
def run_schedule(
    model,
    prm,
    p2,
    x0,
    n_periods,
    spp,
    offs,
    amps,
    nsubs,
    sidx,
    r_offs,
    r_amps,
    r_nsubs,
    r_sidx,
    out,
):
    """Integrate whole periods plus an optional trailing partial period.

    ``offs``/``amps``/``nsubs``/``sidx`` describe one full period split at
    pulse edges and output-sample times: interval i spans
    [offs[i], offs[i+1]] under constant drive amps[i], integrated with
    nsubs[i] RK4 steps; sidx[i] >= 0 records the state at the interval's
    right end into output slot k*spp + sidx[i] of period k.  The ``r_*``
    arrays are the same thing for the remainder, with absolute slots
    n_periods*spp + r_sidx[i].  out[0] must be preset to x0.
    """
    x = x0
    m = len(amps)
    for k in range(n_periods):
        base = k * spp
        for i in range(m):
            x = integrate_interval(
                model, prm, p2, x, amps[i], offs[i + 1] - offs[i], nsubs[i]
            )
            if sidx[i] >= 0:
                out[base + sidx[i]] = x
    base = n_periods * spp
    for i in range(len(r_amps)):
        x = integrate_interval(
            model, prm, p2, x, r_amps[i], r_offs[i + 1] - r_offs[i], r_nsubs[i]
        )
        if r_sidx[i] >= 0:
            out[base + r_sidx[i]] = x
    return x
