"""Pulse-driven memristor dynamics toolkit.

Exact pulse-by-pulse simulation, one-period time averaging, closed-form
averaged trajectories, fixed-point/stability/relaxation-time analysis and
exact-vs-averaged comparison for two first-order models: a Biolek-window
current-driven device and a threshold device in series with a resistor.
"""

from ._kernels import NUMBA_ENABLED
from .analysis import ComparisonReport, compare, fit_relaxation_time
from .averaged import (
    AveragedField,
    BiolekAveragedParams,
    CircuitAveragedParams,
    FixedPointReport,
    averaged_rate,
    biolek_averaged_ode_rhs,
    biolek_fixed_point,
    biolek_relaxation_time,
    biolek_solution,
    biolek_symmetry_map,
    circuit_fixed_point,
    circuit_relaxation_time,
    circuit_solution,
    numeric_fixed_point,
)
from .errors import (
    DegenerateFixedPointError,
    FitQualityError,
    InvalidRequestError,
    MemrelaxError,
    NumericError,
    ValidationError,
    ValidityError,
)
from .exact_sim import IntegratorConfig, Trajectory, integrate_constant_drive, simulate, time_average
from .models import (
    BiolekModel,
    PulseTrain,
    ThresholdCheck,
    ThresholdCircuit,
    biolek_rate,
    biolek_window,
    drive_at,
    memristance,
    state_from_memristance,
    threshold_circuit_rate,
    validate_above_threshold,
)

__version__ = "0.1.0"

__all__ = [
    "NUMBA_ENABLED",
    "__version__",
    # models
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
    # exact simulation
    "IntegratorConfig",
    "Trajectory",
    "simulate",
    "time_average",
    "integrate_constant_drive",
    # averaged dynamics
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
    # analysis
    "ComparisonReport",
    "compare",
    "fit_relaxation_time",
    # errors
    "MemrelaxError",
    "ValidationError",
    "InvalidRequestError",
    "DegenerateFixedPointError",
    "NumericError",
    "FitQualityError",
    "ValidityError",
]
