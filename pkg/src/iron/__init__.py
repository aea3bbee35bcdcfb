"""IRON_FI outer iteration."""
from iron.core import Trajectory, outer_step, run_trajectory
from iron.noise import NoiseModel, sample_center_noise
from iron.params import StepParams, damping_update, step_params
from iron.state import IronState, StepReport

__all__ = [
    "IronState",
    "StepParams",
    "StepReport",
    "NoiseModel",
    "Trajectory",
    "step_params",
    "damping_update",
    "sample_center_noise",
    "outer_step",
    "run_trajectory",
]
