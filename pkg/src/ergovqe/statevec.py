"""Dense pure-state simulation of a few qubits.

Conventions used throughout the package:

* qubits are labelled ``1..n``; qubit ``m`` is bit ``m - 1`` of the basis
  index (little-endian, qubit 1 least significant);
* bit value 0 is spin down (sigma_z = +1), bit value 1 is spin up
  (sigma_z = -1).  With ``h > 0`` the field term ``-h sigma_z`` therefore
  raises the energy of up spins, and the all-up input is a charged battery;
* ``R_y(theta) = exp(-i theta sigma_y)`` (no factor 1/2), so
  ``R_y(theta)|down> = cos(theta)|down> + sin(theta)|up>``;
* the CNOT control is active on spin *down* (bit 0).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import ArgumentError, ConfigurationError

MAX_QUBITS = 12
UP = 1
DOWN = 0

_SPIN_CHARS = {"u": UP, "d": DOWN, "1": UP, "0": DOWN, "↑": UP, "↓": DOWN}


@dataclass
class Statevector:
    n: int
    amps: np.ndarray

    def __post_init__(self):
        self.amps = np.asarray(self.amps, dtype=np.complex128)
        if self.amps.shape != (1 << self.n,):
            raise ArgumentError(f"expected {1 << self.n} amplitudes for n={self.n}, got {self.amps.shape}")

    @property
    def dim(self) -> int:
        return 1 << self.n

    def norm(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def copy(self) -> "Statevector":
        return Statevector(self.n, self.amps.copy())

    def is_real(self) -> bool:
        return not np.any(self.amps.imag)


def _check_n(n: int) -> None:
    if not isinstance(n, (int, np.integer)) or not 1 <= n <= MAX_QUBITS:
        raise ConfigurationError(f"qubit count must be in 1..{MAX_QUBITS}, got {n!r}")


def _parse_bits(n: int, bits) -> list[int]:
    if isinstance(bits, str):
        try:
            parsed = [_SPIN_CHARS[ch] for ch in bits.lower()]
        except KeyError as exc:
            raise ArgumentError(f"unknown spin symbol {exc.args[0]!r} in {bits!r}") from None
    else:
        parsed = [int(b) for b in bits]
        if any(b not in (0, 1) for b in parsed):
            raise ArgumentError(f"bits must be 0 (down) or 1 (up), got {list(bits)!r}")
    if len(parsed) != n:
        raise ArgumentError(f"need {n} spins, got {len(parsed)}")
    return parsed


def basis_index(bits: Sequence[int]) -> int:
    """Basis index of a spin pattern given in qubit order (``bits[0]`` is qubit 1)."""
    return sum(b << q for q, b in enumerate(bits))


def init_basis_state(n: int, bits) -> Statevector:
    """Product basis state.

    ``bits`` lists the spins of qubits ``1..n`` either as 0/1 (down/up) or as a
    string such as ``"uud"``.
    """
    _check_n(n)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[basis_index(_parse_bits(n, bits))] = 1.0
    return Statevector(n, amps)


def all_up(n: int) -> Statevector:
    """The fully charged input ``|up ... up>``."""
    return init_basis_state(n, [UP] * n)


def _check_qubit(state: Statevector, m: int) -> None:
    if not isinstance(m, (int, np.integer)) or not 1 <= m <= state.n:
        raise ArgumentError(f"qubit index must be in 1..{state.n}, got {m!r}")


def apply_ry(state: Statevector, m: int, theta: float) -> Statevector:
    """Rotate qubit ``m`` by ``exp(-i theta sigma_y)`` in place; returns ``state``."""
    _check_qubit(state, m)
    c, s = np.cos(theta), np.sin(theta)
    view = state.amps.reshape(-1, 2, 1 << (m - 1))
    down = view[:, 0, :].copy()
    up = view[:, 1, :]
    view[:, 0, :] = c * down - s * up
    view[:, 1, :] = s * down + c * up
    return state


def cnot_permutation(n: int, k: int, j: int) -> np.ndarray:
    """Index map ``p`` with ``(CNOT psi)[i] == psi[p[i]]``; an involution."""
    idx = np.arange(1 << n)
    active = ((idx >> (k - 1)) & 1) == DOWN
    return np.where(active, idx ^ (1 << (j - 1)), idx)


def apply_cnot(state: Statevector, k: int, j: int) -> Statevector:
    """CNOT with control ``k`` (active on spin down) and target ``j``, in place."""
    _check_qubit(state, k)
    _check_qubit(state, j)
    if k == j:
        raise ArgumentError(f"control and target must differ, got {k} twice")
    # swap target-down / target-up amplitudes where the control bit is down
    lo, hi = min(k, j) - 1, max(k, j) - 1
    view = state.amps.reshape(-1, 2, 1 << (hi - lo - 1), 2, 1 << lo)
    if k - 1 == lo:
        # control is the low bit, target the high one
        a = view[:, 0, :, DOWN, :].copy()
        view[:, 0, :, DOWN, :] = view[:, 1, :, DOWN, :]
        view[:, 1, :, DOWN, :] = a
    else:
        a = view[:, DOWN, :, 0, :].copy()
        view[:, DOWN, :, 0, :] = view[:, DOWN, :, 1, :]
        view[:, DOWN, :, 1, :] = a
    return state


def expectation(state: Statevector, H: np.ndarray, tol: float = 1e-10) -> float:
    """``<psi|H|psi>`` for a dense Hermitian ``H``; rejects a sizeable imaginary part."""
    H = np.asarray(H)
    if H.shape != (state.dim, state.dim):
        raise ArgumentError(f"operator shape {H.shape} does not match state dimension {state.dim}")
    value = np.vdot(state.amps, H @ state.amps)
    if abs(value.imag) > tol:
        raise ArgumentError(f"expectation has imaginary part {value.imag:.3g}; operator not Hermitian?")
    return float(value.real)
