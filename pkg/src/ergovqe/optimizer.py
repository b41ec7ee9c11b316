"""Fixed-step gradient ascent of the work cost with parameter-shift gradients."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .ansatz import Ansatz
from .errors import ArgumentError, ConfigurationError, NumericalError
from .statevec import Statevector, expectation

GRADIENT_METHODS = ("parameter-shift", "finite-difference")


@dataclass(frozen=True)
class OptimizerConfig:
    step_size: float = 0.1
    max_iters: int = 500
    convergence_tol: float = 1e-6
    convergence_window: int = 10
    gradient_method: str = "parameter-shift"
    fd_epsilon: float = 1e-5

    def __post_init__(self):
        if not self.step_size > 0:
            raise ConfigurationError(f"step size must be positive, got {self.step_size}")
        if self.max_iters < 1:
            raise ConfigurationError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.convergence_tol > 0:
            raise ConfigurationError(f"convergence tolerance must be positive, got {self.convergence_tol}")
        if self.convergence_window < 1:
            raise ConfigurationError(f"convergence window must be >= 1, got {self.convergence_window}")
        if self.gradient_method not in GRADIENT_METHODS:
            raise ConfigurationError(f"gradient method must be one of {GRADIENT_METHODS}, got {self.gradient_method!r}")
        if not self.fd_epsilon > 0:
            raise ConfigurationError(f"fd_epsilon must be positive, got {self.fd_epsilon}")

    def as_dict(self) -> dict:
        return asdict(self)


class CostContext:
    """Everything needed to evaluate W(theta) for one (ansatz, input, H) triple.

    The CNOT block of the ansatz is a basis permutation ``P``, so
    ``<P phi|H|P phi> = <phi|P^T H P|phi>``.  The conjugated Hamiltonian is
    stored once in CSR form and the kernels only apply the rotation layer.
    """

    def __init__(self, ansatz: Ansatz, input_state: Statevector, H: np.ndarray):
        H = np.asarray(H, dtype=np.float64)
        if H.shape != (input_state.dim, input_state.dim):
            raise ArgumentError(f"Hamiltonian shape {H.shape} does not match {input_state.n}-qubit input")
        if ansatz.n != input_state.n:
            raise ArgumentError(f"ansatz has {ansatz.n} qubits, input state {input_state.n}")
        self.ansatz = ansatz
        self.n = ansatz.n
        self.e_ref = expectation(input_state, H)

        parts = [input_state.amps.real]
        if not input_state.is_real():
            parts.append(input_state.amps.imag)
        self.psi0 = np.ascontiguousarray(np.stack(parts), dtype=np.float64)

        inv = np.argsort(ansatz.permutation())
        conj = H[np.ix_(inv, inv)]
        rows, cols = np.nonzero(conj)
        self.data = np.ascontiguousarray(conj[rows, cols])
        self.indices = np.ascontiguousarray(cols, dtype=np.intc)
        self.indptr = np.concatenate(([0], np.cumsum(np.bincount(rows, minlength=len(conj))))).astype(np.intp)

    def kernel_args(self):
        return self.psi0, self.data, self.indices, self.indptr

    def _theta(self, theta) -> np.ndarray:
        theta = np.asarray(theta, dtype=np.float64)
        if theta.shape != (self.n,):
            raise ArgumentError(f"expected {self.n} parameters, got shape {theta.shape}")
        return theta

    def work(self, theta: Sequence[float], kernels=None) -> float:
        k = kernels or _kernels
        return self.e_ref - k.energy(*self.kernel_args(), self._theta(theta))

    def works(self, thetas, kernels=None) -> np.ndarray:
        """W for each row of ``thetas``."""
        thetas = np.atleast_2d(np.asarray(thetas, dtype=np.float64))
        return self.e_ref - (kernels or _kernels).energies(*self.kernel_args(), thetas)

    def gradients(self, thetas, kernels=None) -> np.ndarray:
        """Parameter-shift gradient for each row of ``thetas``."""
        thetas = np.atleast_2d(np.asarray(thetas, dtype=np.float64))
        return (kernels or _kernels).shift_gradients(*self.kernel_args(), thetas)


def gradient(theta: Sequence[float], ctx: CostContext, method: str = "parameter-shift",
             fd_epsilon: float = 1e-5, kernels=None) -> np.ndarray:
    """dW/dtheta.

    ``parameter-shift`` evaluates ``W(theta + pi/4 e_j) - W(theta - pi/4 e_j)``,
    exact for ``exp(-i theta sigma_y)`` rotations.  ``finite-difference`` is the
    central difference with step ``fd_epsilon`` and exists as a cross-check.
    """
    theta = ctx._theta(theta)
    if method == "parameter-shift":
        return (kernels or _kernels).shift_gradient(*ctx.kernel_args(), theta)
    if method == "finite-difference":
        return finite_difference_gradient(theta, ctx, fd_epsilon, kernels)
    raise ArgumentError(f"gradient method must be one of {GRADIENT_METHODS}, got {method!r}")


def finite_difference_gradient(theta, ctx: CostContext, eps: float = 1e-5, kernels=None) -> np.ndarray:
    theta = ctx._theta(theta)
    out = np.empty(ctx.n)
    for j in range(ctx.n):
        e = np.zeros(ctx.n)
        e[j] = eps
        out[j] = (ctx.work(theta + e, kernels) - ctx.work(theta - e, kernels)) / (2 * eps)
    return out


@dataclass
class OptimizeResult:
    theta_opt: np.ndarray
    w_opt: float
    theta_history: np.ndarray  # (iterations + 1, n); row 0 is the start
    work_history: np.ndarray   # (iterations + 1,)
    converged: bool
    iterations: int


def _ascend_python(theta0, ctx, config, kernels):
    # general loop, used for finite-difference gradients
    thetas = [theta0.copy()]
    works = [ctx.work(theta0, kernels)]
    converged = False
    w = config.convergence_window
    for t in range(1, config.max_iters + 1):
        g = gradient(thetas[-1], ctx, config.gradient_method, config.fd_epsilon, kernels)
        if not np.all(np.isfinite(g)):
            return np.array(thetas), np.array(works), t - 1, False, False
        thetas.append(thetas[-1] + config.step_size * g)
        works.append(ctx.work(thetas[-1], kernels))
        if not math.isfinite(works[-1]):
            return np.array(thetas), np.array(works), t, False, False
        if t >= w and np.max(np.abs(np.diff(works[-w - 1:]))) < config.convergence_tol:
            converged = True
            break
    return np.array(thetas), np.array(works), len(works) - 1, converged, True


def ascend(theta0: Sequence[float], ctx: CostContext, config: OptimizerConfig = OptimizerConfig(),
           kernels=None) -> OptimizeResult:
    """Iterate ``theta <- theta + k * grad W`` until W plateaus.

    Converged means every one of the last ``convergence_window`` changes of W
    is below ``convergence_tol``; otherwise the run stops at ``max_iters``.
    """
    theta0 = ctx._theta(theta0).copy()
    k = kernels or _kernels
    if config.gradient_method == "parameter-shift":
        works, thetas, iters, converged, finite = k.ascend(
            *ctx.kernel_args(), ctx.e_ref, theta0, config.step_size, config.max_iters,
            config.convergence_tol, config.convergence_window)
    else:
        thetas, works, iters, converged, finite = _ascend_python(theta0, ctx, config, k)
    if not finite:
        raise NumericalError(f"non-finite work or gradient at iteration {iters}",
                             trajectory=(thetas, works))
    return OptimizeResult(thetas[-1].copy(), float(works[-1]), thetas, works, bool(converged), int(iters))
