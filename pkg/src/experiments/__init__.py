"""Monte Carlo ensembles, metrics and the per-subcommand experiment runners."""
from experiments.ensemble import EnsembleStats, run_ensemble
from experiments.metrics import mse_decomposition, slope_fit, stationary_average

__all__ = [
    "EnsembleStats",
    "run_ensemble",
    "mse_decomposition",
    "slope_fit",
    "stationary_average",
]
