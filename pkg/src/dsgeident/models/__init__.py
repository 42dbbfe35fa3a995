from .api import (
    RegimeMismatchError,
    SpectralModel,
    medium_model,
    small_growth_selection,
    small_level_selection,
    small_model,
)
from .medium import build_medium_scale, medium_selection, medium_shock_covariance
from .params import (
    MediumCalibration,
    MediumScaleParams,
    SmallScaleParams,
    load_params_json,
)
from .signal import SignalFilter, steady_state_kalman_gain
from .small import (
    AnalyticReducedSolution,
    analytic_reduced_solution,
    build_reduced_two_equation,
    build_small_scale,
    build_small_scale_estimation,
    estimation_selection,
    level_selection,
)

__all__ = [
    "RegimeMismatchError",
    "SpectralModel",
    "medium_model",
    "small_growth_selection",
    "small_level_selection",
    "small_model",
    "build_medium_scale",
    "medium_selection",
    "medium_shock_covariance",
    "MediumCalibration",
    "MediumScaleParams",
    "SmallScaleParams",
    "load_params_json",
    "SignalFilter",
    "steady_state_kalman_gain",
    "AnalyticReducedSolution",
    "analytic_reduced_solution",
    "build_reduced_two_equation",
    "build_small_scale",
    "build_small_scale_estimation",
    "estimation_selection",
    "level_selection",
]
