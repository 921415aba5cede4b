"""Exception hierarchy shared by all memrelax modules.

The CLI maps these onto exit codes: validation problems exit 1, numeric
failures exit 2, validity (modelling-assumption) failures exit 3.
"""


class MemrelaxError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(MemrelaxError, ValueError):
    """Bad input: violated invariant, out-of-domain argument, malformed config."""


class InvalidRequestError(ValidationError):
    """A quantity was requested for a configuration where it does not exist
    (e.g. relaxation time of an unstable or out-of-range fixed point)."""


class DegenerateFixedPointError(ValidationError):
    """The fixed-point equation has no finite solution (kappa == p)."""


class NumericError(MemrelaxError, RuntimeError):
    """A numeric procedure failed to converge or produced unusable output."""


class FitQualityError(NumericError):
    """Relaxation-time fit rejected: samples cross the reference point or the
    log-distance does not decay."""


class ValidityError(MemrelaxError, RuntimeError):
    """A modelling assumption behind a requested formula does not hold
    (e.g. the drive does not keep the memristor above threshold)."""
