"""Nearest-neighbour spin-chain Hamiltonians and their exact spectra.

    H = -h sum_j sz_j - J sum_{j<N} [(1+g) sx_j sx_{j+1} + (1-g) sy_j sy_{j+1} + D sz_j sz_{j+1}]

with open boundary conditions.  All Pauli strings here are real in the
computational basis, so ``H`` is stored as a dense real symmetric array.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ConfigurationError, ModelValidationError, NumericalError
from .statevec import MAX_QUBITS

DEFAULT_J = -1.0
DEFAULT_H = 0.5

PRESETS = ("xxx", "xxz", "xyz", "xx", "xy", "tfi")

# human-readable constraint rows, used in error messages
PRESET_ROWS = {
    "xxx": "XXX: delta=1, gamma=0",
    "xxz": "XXZ: gamma=0 (delta free)",
    "xyz": "XYZ: delta!=0, -1<=gamma<=1",
    "xx": "XX: delta=0, gamma=0",
    "xy": "XY: delta=0, -1<=gamma<=1",
    "tfi": "TFI: delta=0, gamma=+1 or -1",
}

_EXACT = 1e-12


def _is(x: float, target: float) -> bool:
    return abs(x - target) <= _EXACT


def _row_holds(preset: str, gamma: float, delta: float) -> bool:
    if preset == "xxx":
        return _is(delta, 1.0) and _is(gamma, 0.0)
    if preset == "xxz":
        return _is(gamma, 0.0)
    if preset == "xyz":
        return not _is(delta, 0.0) and -1.0 - _EXACT <= gamma <= 1.0 + _EXACT
    if preset == "xx":
        return _is(delta, 0.0) and _is(gamma, 0.0)
    if preset == "xy":
        return _is(delta, 0.0) and -1.0 - _EXACT <= gamma <= 1.0 + _EXACT
    if preset == "tfi":
        return _is(delta, 0.0) and (_is(gamma, 1.0) or _is(gamma, -1.0))
    raise ConfigurationError(f"unknown model preset {preset!r}; choose from {', '.join(PRESETS)}")


def check_preset(preset: str, gamma: float, delta: float) -> None:
    """Raise :class:`ModelValidationError` unless (gamma, delta) fit the preset row."""
    if not _row_holds(preset, gamma, delta):
        raise ModelValidationError(
            f"gamma={gamma:g}, delta={delta:g} violates model row [{PRESET_ROWS[preset]}]"
        )


@dataclass(frozen=True)
class SpinModel:
    n: int
    J: float = DEFAULT_J
    h: float = DEFAULT_H
    gamma: float = 0.0
    delta: float = 0.0
    preset: Optional[str] = None

    def __post_init__(self):
        if not isinstance(self.n, (int, np.integer)) or not 2 <= self.n <= MAX_QUBITS:
            raise ConfigurationError(f"chain length must be in 2..{MAX_QUBITS}, got {self.n!r}")
        if not -1.0 <= self.gamma <= 1.0:
            raise ConfigurationError(f"gamma must lie in [-1, 1], got {self.gamma}")
        if self.preset is not None:
            if self.preset not in PRESETS:
                raise ConfigurationError(f"unknown model preset {self.preset!r}; choose from {', '.join(PRESETS)}")
            check_preset(self.preset, self.gamma, self.delta)

    @property
    def dim(self) -> int:
        return 1 << self.n

    def as_dict(self) -> dict:
        return {"preset": self.preset, "n": self.n, "J": self.J, "h": self.h,
                "gamma": self.gamma, "delta": self.delta}


def model_from_preset(preset: str, n: int, J: float = DEFAULT_J, h: float = DEFAULT_H,
                      gamma: Optional[float] = None, delta: Optional[float] = None) -> SpinModel:
    """Build a :class:`SpinModel` for a named preset, filling forced anisotropies.

    XXX, XX and TFI need no anisotropy arguments (TFI defaults to gamma=+1);
    XYZ defaults to delta=1.  XXZ needs ``delta`` and XY/XYZ need ``gamma``.
    """
    preset = preset.lower()
    if preset not in PRESETS:
        raise ConfigurationError(f"unknown model preset {preset!r}; choose from {', '.join(PRESETS)}")
    forced_gamma = {"xxx": 0.0, "xx": 0.0, "xxz": 0.0, "tfi": 1.0}
    forced_delta = {"xxx": 1.0, "xx": 0.0, "xy": 0.0, "tfi": 0.0, "xyz": 1.0}
    if gamma is None:
        if preset not in forced_gamma:
            raise ConfigurationError(f"model {preset} needs an explicit gamma [{PRESET_ROWS[preset]}]")
        gamma = forced_gamma[preset]
    if delta is None:
        if preset not in forced_delta:
            raise ConfigurationError(f"model {preset} needs an explicit delta [{PRESET_ROWS[preset]}]")
        delta = forced_delta[preset]
    return SpinModel(n=n, J=float(J), h=float(h), gamma=float(gamma), delta=float(delta), preset=preset)


def build_hamiltonian(model: SpinModel) -> np.ndarray:
    """Dense real symmetric Hamiltonian, assembled bond by bond."""
    n, dim = model.n, model.dim
    idx = np.arange(dim)
    # sigma_z eigenvalue per qubit: +1 for spin down (bit 0), -1 for spin up
    spins = 1 - 2 * ((idx[:, None] >> np.arange(n)) & 1)

    diag = -model.h * spins.sum(axis=1) - model.J * model.delta * (spins[:, :-1] * spins[:, 1:]).sum(axis=1)
    H = np.diag(diag.astype(np.float64))

    # (1+g) XX + (1-g) YY flips both bits of a bond: amplitude 2 between
    # antiparallel pairs and 2g between parallel ones.
    flip_anti = -2.0 * model.J
    flip_par = -2.0 * model.J * model.gamma
    for j in range(n - 1):
        partner = idx ^ (0b11 << j)
        parallel = spins[:, j] == spins[:, j + 1]
        H[idx, partner] += np.where(parallel, flip_par, flip_anti)
    return H


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def ground_energy(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def ground_state(self) -> np.ndarray:
        return self.eigenvectors[:, 0]


def spectrum(H: np.ndarray, residual_tol: float = 1e-9) -> Spectrum:
    """Full eigendecomposition, eigenvalues ascending.

    Degenerate levels are allowed; the eigenbasis inside a degenerate block is
    whatever LAPACK returns.
    """
    H = np.asarray(H)
    if H.ndim != 2 or H.shape[0] != H.shape[1]:
        raise ConfigurationError(f"Hamiltonian must be square, got shape {H.shape}")
    try:
        vals, vecs = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigensolver failed on {H.shape[0]}x{H.shape[0]} matrix: {exc}") from exc
    residual = float(np.max(np.linalg.norm(H @ vecs - vecs * vals, axis=0)))
    ortho = float(np.max(np.abs(vecs.conj().T @ vecs - np.eye(len(vals)))))
    if residual > residual_tol or ortho > residual_tol:
        raise NumericalError(
            f"eigendecomposition inaccurate: max residual {residual:.3g}, orthogonality error {ortho:.3g}"
        )
    return Spectrum(vals, vecs)
