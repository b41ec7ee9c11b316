"""Mean energy, passive states, ergotropy and the variational work cost."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .ansatz import Ansatz, apply_ansatz
from .errors import ArgumentError, NumericalError, UndefinedEfficiencyError
from .hamiltonian import Spectrum
from .statevec import Statevector, expectation


def as_density_matrix(rho, tol: float = 1e-10) -> np.ndarray:
    """Promote a :class:`Statevector` to ``|psi><psi|`` or validate a matrix."""
    if isinstance(rho, Statevector):
        return np.outer(rho.amps, rho.amps.conj())
    rho = np.asarray(rho, dtype=np.complex128)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ArgumentError(f"density matrix must be square, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > 1e-12:
        raise ArgumentError("density matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > tol:
        raise ArgumentError(f"density matrix trace is {np.trace(rho).real:.12g}, expected 1")
    if np.linalg.eigvalsh(rho)[0] < -tol:
        raise ArgumentError("density matrix has a negative eigenvalue")
    return rho


def _check_dims(rho: np.ndarray, spec: Spectrum) -> None:
    if rho.shape[0] != len(spec.eigenvalues):
        raise ArgumentError(f"state dimension {rho.shape[0]} does not match spectrum size {len(spec.eigenvalues)}")


def _populations(rho: np.ndarray) -> np.ndarray:
    return np.sort(np.clip(np.linalg.eigvalsh(rho), 0.0, None))[::-1]


def passive_state(rho, spec: Spectrum) -> np.ndarray:
    """Largest population on the lowest level, and so on down the ladder."""
    rho = as_density_matrix(rho)
    _check_dims(rho, spec)
    p = _populations(rho)
    V = spec.eigenvectors
    return (V * p) @ V.conj().T


@dataclass(frozen=True)
class WorkReport:
    mean_energy: float
    passive_energy: float
    ergotropy: float


def ergotropy(rho, H: np.ndarray, spec: Spectrum) -> WorkReport:
    rho = as_density_matrix(rho)
    _check_dims(rho, spec)
    mean = float(np.real(np.trace(np.asarray(H) @ rho)))
    passive = float(np.dot(_populations(rho), spec.eigenvalues))
    erg = mean - passive
    if erg < -1e-10:
        raise NumericalError(f"negative ergotropy {erg:.3g}: spectrum and state are inconsistent")
    erg = max(erg, 0.0)
    return WorkReport(mean, passive, erg)


def gibbs_state(spec: Spectrum, beta: float) -> np.ndarray:
    w = np.exp(-beta * (spec.eigenvalues - spec.eigenvalues[0]))
    w /= w.sum()
    V = spec.eigenvectors
    return (V * w) @ V.conj().T


def cost_work(theta: Sequence[float], ansatz: Ansatz, input_state: Statevector, H: np.ndarray) -> float:
    """W(theta) = E_rho - <psi(theta)|H|psi(theta)>, by direct circuit simulation.

    This is the reference path; the optimizer evaluates the same quantity with
    the compiled kernels (see :class:`ergovqe.optimizer.CostContext`).
    """
    e_rho = expectation(input_state, H)
    psi = apply_ansatz(input_state.copy(), ansatz, theta)
    return e_rho - expectation(psi, H)


def efficiency(mean_work: float, erg: float, overshoot: float = 1e-9) -> float:
    """eta = <W> / ergotropy, clipped to 1 when rounding pushes it just above."""
    if not erg > 0:
        raise UndefinedEfficiencyError(f"efficiency undefined for ergotropy {erg!r} (battery already passive)")
    eta = mean_work / erg
    if 1.0 < eta <= 1.0 + overshoot:
        eta = 1.0
    return eta
