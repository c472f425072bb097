"""Adaptive switching-gain robust control: simulation and analysis toolkit.

Controllers for uncertain Euler-Lagrange systems (adaptive switching-gain,
scalar adaptive sliding-mode, and fixed-gain robust laws), two simulated
plants, a zero-order-hold RK4 simulator, and numerical checks of the
finite-time and ultimate-boundedness claims behind the adaptive law.
"""

from .analysis import (
    CASE_DECREASE,
    CASE_FROZEN,
    CASE_INCREASE,
    EpisodeRecord,
    FiniteTimeBounds,
    FpPolynomial,
    TraceMetrics,
    case3_persistence_check,
    case_classifier,
    finite_time_bounds,
    finite_time_episode_audit,
    fp_polynomial,
    fp_positive_root,
    lyapunov_V,
    lyapunov_V1,
    max_dtau_jump,
    metrics,
    pose_error_series,
    rms,
    sweep_chatter_flag,
    v1_case1_max_increase,
    write_report,
    zeta_bound,
)
from .controllers import (
    AsmcParams,
    AsmcState,
    ControlOutput,
    GainState,
    RateFlags,
    asmc_control_and_rate,
    asmc_step,
    asrc_control,
    asrc_gain_rates,
    asrc_gain_step,
    asrc_rho,
    robust_control,
)
from .core import (
    ConfigurationError,
    ConstantTrajectory,
    ControllerConfig,
    InvariantError,
    RampTrajectory,
    SinusoidTrajectory,
    TrackingState,
    filtered_error,
    gamma_matrix,
    gamma_norm,
    trajectory_sups,
    xi_norm_bounds_check,
)
from .linalg import is_positive_definite, min_eig_sym, spectral_norm
from .plants import (
    ArmParams,
    ConstantDisturbance,
    CoriolisPlant,
    FrictionParams,
    PayloadWindow,
    PlantConstants,
    SinusoidDisturbance,
    WmrParams,
    WmrPlant,
    wmr_kinematics_S,
    wmr_reduced_mass,
)
from .scenarios import (
    BUILTINS,
    builtin_config,
    scenario_from_config,
    scenario_to_config,
    validate_config,
)
from .sim import Scenario, SimTrace, reconstruct_pose, rk4_step, run_scenario
from .uncertainty import (
    SUP_SAFETY_FACTOR,
    ThetaStar,
    regressor,
    rho_bound,
    sigma_true,
    theta_star_synthesize,
)

__version__ = "0.1.0"

__all__ = [
    "ArmParams",
    "AsmcParams",
    "AsmcState",
    "BUILTINS",
    "CASE_DECREASE",
    "CASE_FROZEN",
    "CASE_INCREASE",
    "ConfigurationError",
    "ConstantDisturbance",
    "ConstantTrajectory",
    "ControlOutput",
    "ControllerConfig",
    "CoriolisPlant",
    "EpisodeRecord",
    "FiniteTimeBounds",
    "FpPolynomial",
    "FrictionParams",
    "GainState",
    "InvariantError",
    "PayloadWindow",
    "PlantConstants",
    "RampTrajectory",
    "RateFlags",
    "SUP_SAFETY_FACTOR",
    "Scenario",
    "SimTrace",
    "SinusoidDisturbance",
    "SinusoidTrajectory",
    "ThetaStar",
    "TraceMetrics",
    "TrackingState",
    "WmrParams",
    "WmrPlant",
    "asmc_control_and_rate",
    "asmc_step",
    "asrc_control",
    "asrc_gain_rates",
    "asrc_gain_step",
    "asrc_rho",
    "builtin_config",
    "case3_persistence_check",
    "case_classifier",
    "filtered_error",
    "finite_time_bounds",
    "finite_time_episode_audit",
    "fp_polynomial",
    "fp_positive_root",
    "gamma_matrix",
    "gamma_norm",
    "is_positive_definite",
    "lyapunov_V",
    "lyapunov_V1",
    "max_dtau_jump",
    "metrics",
    "min_eig_sym",
    "pose_error_series",
    "reconstruct_pose",
    "regressor",
    "rho_bound",
    "rk4_step",
    "rms",
    "robust_control",
    "run_scenario",
    "scenario_from_config",
    "scenario_to_config",
    "sigma_true",
    "spectral_norm",
    "sweep_chatter_flag",
    "theta_star_synthesize",
    "trajectory_sups",
    "v1_case1_max_increase",
    "validate_config",
    "wmr_kinematics_S",
    "wmr_reduced_mass",
    "write_report",
    "xi_norm_bounds_check",
    "zeta_bound",
]
