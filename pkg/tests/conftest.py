import numpy as np
import pytest

from ergovqe.hamiltonian import build_hamiltonian, model_from_preset, spectrum

ACCEPTANCE_LINES: list[str] = []

# Pauli matrices indexed by bit value (0 = spin down, 1 = spin up)
I2 = np.eye(2)
SX = np.array([[0.0, 1.0], [1.0, 0.0]])
SY = np.array([[0.0, -1j], [1j, 0.0]])
SZ = np.diag([1.0, -1.0])


def kron_site(op, site, n):
    """``op`` on qubit ``site`` (1-based), qubit 1 being the rightmost Kronecker factor."""
    out = np.eye(1)
    for q in range(n, 0, -1):
        out = np.kron(out, op if q == site else I2)
    return out


def kron_hamiltonian(n, J, h, gamma, delta):
    """Term-by-term Kronecker construction used as an oracle for the bond-wise builder."""
    H = np.zeros((2**n, 2**n), dtype=complex)
    for j in range(1, n + 1):
        H -= h * kron_site(SZ, j, n)
    for j in range(1, n):
        H -= J * ((1 + gamma) * kron_site(SX, j, n) @ kron_site(SX, j + 1, n)
                  + (1 - gamma) * kron_site(SY, j, n) @ kron_site(SY, j + 1, n)
                  + delta * kron_site(SZ, j, n) @ kron_site(SZ, j + 1, n))
    return H


def haar_unitary(dim, rng):
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


@pytest.fixture
def xx2():
    model = model_from_preset("xx", 2)
    H = build_hamiltonian(model)
    return model, H, spectrum(H)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def acceptance_report():
    def record(number, title, passed, detail):
        line = f"[{'PASS' if passed else 'FAIL'}] criterion {number:>2}: {title} -- {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
