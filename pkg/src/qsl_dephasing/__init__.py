"""Thermal dephasing of a single qubit and geometric quantum-speed-limit bounds."""

from .backend import backend_name
from .dephasing import (
    CriticalOhmicity,
    DecayEvaluation,
    DecayGrid,
    MultiGrid,
    SteadyFactor,
    critical_ohmicity,
    decay_function,
    dephasing_factor,
    dephasing_rate,
    evaluate,
    evaluate_grid,
    evaluate_grid_multi,
    first_negative_time,
    steady_factor,
)
from .errors import DegenerateEvolutionError, QuadratureConvergenceError
from .model import (
    Coupling,
    DephasingModel,
    OhmicSpectralDensity,
    Regime,
    ThermalEnvironment,
    classify_coupling,
    spectral_density,
    thermal_kernel,
)
from .numerics import (
    DEFAULT_TOLERANCE,
    QuadratureResult,
    SignChange,
    SignDirection,
    Tolerance,
    find_sign_changes,
    gamma_fn,
    integrate_ode,
    integrate_semi_infinite,
)
from .qsl import (
    NonMarkovianity,
    QslEvaluation,
    geodesic_distance,
    instantaneous_speed,
    mt_ml_bound,
    non_markovianity,
    non_markovianity_sweep,
    path_length,
    qsl_time,
    qsl_time_from_dynamics,
)
from .qubit import QubitState, evolve_analytic, evolve_ode, l1_coherence, trace_distance

__version__ = "0.1.0"

__all__ = [
    "backend_name",
    "CriticalOhmicity",
    "DecayEvaluation",
    "DecayGrid",
    "MultiGrid",
    "SteadyFactor",
    "critical_ohmicity",
    "decay_function",
    "dephasing_factor",
    "dephasing_rate",
    "evaluate",
    "evaluate_grid",
    "evaluate_grid_multi",
    "first_negative_time",
    "steady_factor",
    "DegenerateEvolutionError",
    "QuadratureConvergenceError",
    "Coupling",
    "DephasingModel",
    "OhmicSpectralDensity",
    "Regime",
    "ThermalEnvironment",
    "classify_coupling",
    "spectral_density",
    "thermal_kernel",
    "DEFAULT_TOLERANCE",
    "QuadratureResult",
    "SignChange",
    "SignDirection",
    "Tolerance",
    "find_sign_changes",
    "gamma_fn",
    "integrate_ode",
    "integrate_semi_infinite",
    "NonMarkovianity",
    "QslEvaluation",
    "geodesic_distance",
    "instantaneous_speed",
    "mt_ml_bound",
    "non_markovianity",
    "non_markovianity_sweep",
    "path_length",
    "qsl_time",
    "qsl_time_from_dynamics",
    "QubitState",
    "evolve_analytic",
    "evolve_ode",
    "l1_coherence",
    "trace_distance",
    "__version__",
]
