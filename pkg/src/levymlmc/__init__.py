"""Multilevel Monte Carlo pricing of Asian, lookback and barrier options under
exponential Lévy models (Variance Gamma, NIG, spectrally negative stable)."""

from .mlmc import DriverConfig, LevelStats, MlmcResult, fit_rates, optimal_allocation, run_fixed, run_mlmc
from .models import (
    CALIBRATED_NIG,
    CALIBRATED_STABLE,
    CALIBRATED_VG,
    LevyModel,
    NigParams,
    StableParams,
    VgParams,
    char_function,
    mean_correcting_drift,
)
from .paths import GridSpec, PathGrid, generate_coupled_path, generate_coupled_paths
from .payoffs import OptionSpec, PayoffPair, evaluate_pair, reference_option
from .rng import ParameterError, RngStream

__version__ = "0.1.0"
