"""Single-layer hardware-efficient ansatze: y-rotations then a CNOT pattern."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ArgumentError, ConfigurationError
from .statevec import MAX_QUBITS, Statevector, apply_cnot, apply_ry, cnot_permutation

CONNECTIVITIES = ("nc", "lin", "ring", "ota", "ata")


def connectivity_edges(tag: str, n: int) -> list[tuple[int, int]]:
    """Ordered (control, target) pairs, 1-based, in application order."""
    if tag == "nc":
        return []
    if tag == "lin":
        return [(i, i + 1) for i in range(1, n)]
    if tag == "ring":
        return [(i, i + 1) for i in range(1, n)] + [(n, 1)]
    if tag == "ota":
        return [(1, j) for j in range(2, n + 1)]
    if tag == "ata":
        return [(k, j) for k in range(1, n + 1) for j in range(k + 1, n + 1)]
    raise ArgumentError(f"unknown connectivity {tag!r}; choose from {', '.join(CONNECTIVITIES)}")


@dataclass(frozen=True)
class Ansatz:
    n: int
    connectivity: str
    edges: tuple[tuple[int, int], ...]

    @property
    def n_params(self) -> int:
        return self.n

    @property
    def cnot_count(self) -> int:
        return len(self.edges)

    def permutation(self) -> np.ndarray:
        """Index map ``s`` with ``U_cnot psi == psi[s]`` for the whole CNOT block."""
        perm = np.arange(1 << self.n)
        for k, j in self.edges:
            perm = perm[cnot_permutation(self.n, k, j)]
        return perm


def build_ansatz(connectivity: str, n: int) -> Ansatz:
    if connectivity not in CONNECTIVITIES:
        raise ArgumentError(f"unknown connectivity {connectivity!r}; choose from {', '.join(CONNECTIVITIES)}")
    least = 1 if connectivity == "nc" else 2
    if not least <= n <= MAX_QUBITS:
        raise ConfigurationError(f"{connectivity} ansatz needs {least}..{MAX_QUBITS} qubits, got {n}")
    return Ansatz(n, connectivity, tuple(connectivity_edges(connectivity, n)))


def apply_ansatz(state: Statevector, ansatz: Ansatz, theta: Sequence[float]) -> Statevector:
    """Apply U(theta) in place: every R_y first, then the CNOTs in edge order."""
    theta = np.asarray(theta, dtype=np.float64)
    if theta.shape != (ansatz.n_params,):
        raise ArgumentError(f"ansatz takes {ansatz.n_params} parameters, got shape {theta.shape}")
    if state.n != ansatz.n:
        raise ArgumentError(f"state has {state.n} qubits, ansatz {ansatz.n}")
    for m in range(1, ansatz.n + 1):
        apply_ry(state, m, theta[m - 1])
    for k, j in ansatz.edges:
        apply_cnot(state, k, j)
    return state
