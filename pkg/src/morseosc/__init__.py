"""Morse oscillator dynamics.

Closed-form trajectories, period, action-angle variables and the
homoclinic orbit of the Morse oscillator; quadrature oracles for every
closed form; numerical integration of the forced system with
stroboscopic maps and Lagrangian-descriptor fields; and a CLI that writes
CSV/PGM outputs with reproducibility metadata.
"""

from ._version import __version__
from .analytic import (
    ActionAngle,
    action,
    action_max,
    angle_of_state,
    angular_frequency,
    bounded_trajectory,
    energy_of_action,
    homoclinic_orbit,
    period,
    sample_bounded,
    sample_homoclinic,
    sample_unbounded,
    state_of_action_angle,
    unbounded_time_of_position,
    unbounded_trajectory,
)
from .descriptors import GridSpec, ScalarField, arctan_rescale, ld_field, poincare_scatter
from .errors import (
    ConfigError,
    DomainError,
    EscapeError,
    MorseError,
    NonconvergenceError,
    NumericFailure,
    StepLimitError,
)
from .integrators import (
    IntegratorConfig,
    StroboscopicOrbit,
    arclength_descriptor,
    default_ceiling,
    integrate_to,
    stroboscopic_map,
)
from .kernels import BACKEND
from .melnikov import (
    MelnikovScan,
    MelnikovZero,
    melnikov_analytic,
    melnikov_numeric_zeros,
    melnikov_peak_magnitude,
    melnikov_scan,
    melnikov_zeros,
)
from .model import (
    AT_INFINITY,
    EnergyRegime,
    Equilibrium,
    MorseParams,
    PhaseState,
    PointAtInfinity,
    Regime,
    TrajectorySample,
    classify_energy,
    equilibria,
    force,
    hamiltonian,
    jacobian,
    potential,
    turning_points,
    vector_field,
)
from .oracles import (
    QuadratureResult,
    action_quadrature,
    angle_quadrature,
    melnikov_quadrature,
    period_quadrature,
    time_of_flight_quadrature,
)

__all__ = [
    "__version__",
    "BACKEND",
    # model
    "MorseParams", "PhaseState", "EnergyRegime", "Regime", "Equilibrium",
    "PointAtInfinity", "AT_INFINITY", "TrajectorySample",
    "potential", "force", "hamiltonian", "vector_field", "jacobian",
    "equilibria", "turning_points", "classify_energy",
    # analytic
    "ActionAngle", "period", "angular_frequency", "bounded_trajectory",
    "homoclinic_orbit", "unbounded_trajectory", "unbounded_time_of_position",
    "action", "action_max", "energy_of_action", "angle_of_state",
    "state_of_action_angle", "sample_bounded", "sample_homoclinic",
    "sample_unbounded",
    # oracles
    "QuadratureResult", "period_quadrature", "action_quadrature",
    "angle_quadrature", "time_of_flight_quadrature", "melnikov_quadrature",
    # integration
    "IntegratorConfig", "StroboscopicOrbit", "integrate_to",
    "stroboscopic_map", "arclength_descriptor", "default_ceiling",
    # melnikov
    "MelnikovZero", "MelnikovScan", "melnikov_analytic", "melnikov_zeros",
    "melnikov_numeric_zeros", "melnikov_peak_magnitude", "melnikov_scan",
    # descriptors
    "GridSpec", "ScalarField", "ld_field", "arctan_rescale", "poincare_scatter",
    # errors
    "MorseError", "DomainError", "ConfigError", "NumericFailure",
    "NonconvergenceError", "EscapeError", "StepLimitError",
]
