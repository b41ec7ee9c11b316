"""Variational (VQE-style) work extraction from spin-chain quantum batteries."""

__version__ = "0.1.0"

from ._kernels import BACKEND as KERNEL_BACKEND
from .ansatz import CONNECTIVITIES, Ansatz, apply_ansatz, build_ansatz
from .ergotropy import WorkReport, cost_work, efficiency, ergotropy, passive_state
from .errors import (ArgumentError, ConfigurationError, ErgoError, ModelValidationError, NumericalError,
                     UndefinedEfficiencyError)
from .experiment import LandscapeGrid, SweepRecord, TrialEnsemble, landscape_grid, run_trials, sweep
from .hamiltonian import PRESETS, Spectrum, SpinModel, build_hamiltonian, model_from_preset, spectrum
from .optimizer import CostContext, OptimizeResult, OptimizerConfig, ascend, gradient
from .statevec import Statevector, all_up, apply_cnot, apply_ry, expectation, init_basis_state

__all__ = [
    "KERNEL_BACKEND", "CONNECTIVITIES", "PRESETS",
    "Statevector", "init_basis_state", "all_up", "apply_ry", "apply_cnot", "expectation",
    "SpinModel", "Spectrum", "model_from_preset", "build_hamiltonian", "spectrum",
    "Ansatz", "build_ansatz", "apply_ansatz",
    "WorkReport", "passive_state", "ergotropy", "cost_work", "efficiency",
    "OptimizerConfig", "OptimizeResult", "CostContext", "gradient", "ascend",
    "TrialEnsemble", "SweepRecord", "LandscapeGrid", "run_trials", "sweep", "landscape_grid",
    "ErgoError", "ConfigurationError", "ModelValidationError", "ArgumentError", "NumericalError",
    "UndefinedEfficiencyError",
]
