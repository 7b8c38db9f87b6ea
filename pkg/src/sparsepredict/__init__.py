"""Statevector simulation of long-horizon evolution prediction for sparse-spectrum unitaries.

The main entry points are ``predict_general`` (and ``restore_history``)
for the prediction pipeline, ``simulate_wizard`` for the phase-estimation
front end, and the ``sparsepredict`` command-line tool.
"""

from ._kernels import backend
from .circuit import CostCounter, kernel_H, kernel_table
from .enhancer import EnhancerTable, build_enhancer, zero_extension
from .errors import (
    ArgumentError,
    CapacityError,
    ConfigError,
    HorizonError,
    PreconditionError,
    SparsePredictError,
    SpectrumNotSparseError,
)
from .predictor import (
    PredictionParams,
    RunReport,
    derive_params,
    predict_batch,
    predict_general,
    restore_history,
    speedup_summary,
)
from .shor import run_shor
from .spectral import SpectralUnitary, SpectrumSpec, build, exact_evolution_oracle
from .state import RegisterLayout, StateVector
from .wizard import classify_type, simulate_wizard

__version__ = "0.1.0"

__all__ = [
    "ArgumentError", "CapacityError", "ConfigError", "CostCounter", "EnhancerTable",
    "HorizonError", "PreconditionError", "PredictionParams", "RegisterLayout", "RunReport",
    "SparsePredictError", "SpectralUnitary", "SpectrumNotSparseError", "SpectrumSpec",
    "StateVector", "backend", "build", "build_enhancer", "classify_type", "derive_params",
    "exact_evolution_oracle", "kernel_H", "kernel_table", "predict_batch", "predict_general",
    "restore_history", "run_shor", "simulate_wizard", "speedup_summary", "zero_extension",
]
