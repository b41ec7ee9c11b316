"""Built-in self-check suite run by ``ergovqe validate``."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .ansatz import CONNECTIVITIES, build_ansatz
from .ergotropy import cost_work, ergotropy
from .experiment import initial_theta
from .hamiltonian import SpinModel, build_hamiltonian, model_from_preset, spectrum
from .optimizer import CostContext, ascend, finite_difference_gradient, gradient
from .statevec import Statevector, all_up, apply_cnot, apply_ry, init_basis_state

FAULTS = ("h-sign",)


@dataclass(frozen=True)
class Check:
    name: str
    measured: str
    target: str
    passed: bool


def _xx2(fault: Optional[str]) -> SpinModel:
    model = model_from_preset("xx", 2)
    if fault == "h-sign":
        model = SpinModel(2, model.J, -model.h, model.gamma, model.delta, model.preset)
    return model


def check_spectrum(fault=None) -> Check:
    H = build_hamiltonian(_xx2(fault))
    spec = spectrum(H)
    err = float(np.max(np.abs(spec.eigenvalues - [-2.0, -1.0, 1.0, 2.0])))
    # level labels: |up up> at +1, |down down> at -1, singlet ground state
    up_up = float(H[3, 3])
    down_down = float(H[0, 0])
    singlet = np.array([0.0, 1.0, -1.0, 0.0]) / np.sqrt(2)
    overlap = float(abs(singlet @ spec.ground_state) ** 2)
    err = max(err, abs(up_up - 1.0), abs(down_down + 1.0), 1.0 - overlap)
    return Check("XX N=2 spectrum and level labels",
                 f"E={np.round(spec.eigenvalues, 12).tolist()} <uu|H|uu>={up_up:g} <dd|H|dd>={down_down:g}",
                 "{-2,-1,1,2}, +1, -1 (1e-9)", err < 1e-9)


def check_ergotropy(fault=None) -> Check:
    H = build_hamiltonian(_xx2(fault))
    rep = ergotropy(all_up(2), H, spectrum(H))
    ok = abs(rep.mean_energy - 1.0) < 1e-9 and abs(rep.ergotropy - 3.0) < 1e-9
    return Check("all-up energy and ergotropy", f"E_rho={rep.mean_energy:.12g} erg={rep.ergotropy:.12g}",
                 "1.0, 3.0 (1e-9)", ok)


def _random_case(rng):
    preset = rng.choice(["xxx", "xxz", "xyz", "xx", "xy", "tfi"])
    n = int(rng.integers(2, 5))
    kw = {}
    if preset in ("xxz", "xyz"):
        kw["delta"] = float(rng.uniform(0.1, 1.5)) * rng.choice([-1, 1])
    if preset in ("xy", "xyz"):
        kw["gamma"] = float(rng.uniform(-1, 1))
    if preset == "tfi":
        kw["gamma"] = float(rng.choice([-1.0, 1.0]))
    model = model_from_preset(preset, n, **kw)
    conn = str(rng.choice(CONNECTIVITIES))
    return model, build_ansatz(conn, n), rng.uniform(-np.pi, np.pi, n)


def check_gradient(fault=None, cases: int = 25) -> Check:
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(cases):
        model, ans, theta = _random_case(rng)
        ctx = CostContext(ans, all_up(model.n), build_hamiltonian(model))
        diff = gradient(theta, ctx) - finite_difference_gradient(theta, ctx, 1e-5)
        worst = max(worst, float(np.max(np.abs(diff))))
    return Check("parameter shift vs finite difference", f"max |diff|={worst:.3g}", "< 1e-6", worst < 1e-6)


def check_kernel_vs_circuit(fault=None, cases: int = 25) -> Check:
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(cases):
        model, ans, theta = _random_case(rng)
        H = build_hamiltonian(model)
        state = init_basis_state(model.n, rng.integers(0, 2, model.n))
        ctx = CostContext(ans, state, H)
        for kern in _kernels.available_backends().values():
            worst = max(worst, abs(ctx.work(theta, kern) - cost_work(theta, ans, state, H)))
    return Check(f"kernel cost vs circuit simulation ({', '.join(_kernels.available_backends())})",
                 f"max |diff|={worst:.3g}", "< 1e-10", worst < 1e-10)


def check_norm(fault=None) -> Check:
    rng = np.random.default_rng(11)
    worst = 0.0
    for n in range(2, 7):
        amps = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
        state = Statevector(n, amps / np.linalg.norm(amps))
        for _ in range(100):
            if rng.random() < 0.5:
                apply_ry(state, int(rng.integers(1, n + 1)), float(rng.uniform(-np.pi, np.pi)))
            else:
                k, j = rng.choice(np.arange(1, n + 1), size=2, replace=False)
                apply_cnot(state, int(k), int(j))
        worst = max(worst, abs(1.0 - state.norm()))
    return Check("norm after 100 random gates (n=2..6)", f"max |1-norm|={worst:.3g}", "< 1e-10", worst < 1e-10)


def check_nc_optimum(fault=None, seeds: int = 10) -> Check:
    model = _xx2(fault)
    H = build_hamiltonian(model)
    ctx = CostContext(build_ansatz("nc", 2), all_up(2), H)
    finals = [ascend(initial_theta((0, i), 2), ctx).w_opt for i in range(seeds)]
    err = float(np.max(np.abs(np.array(finals) - 2.25)))
    return Check("XX N=2 nc ascent optimum", f"W in [{min(finals):.9f}, {max(finals):.9f}]", "2.25 +- 1e-3",
                 err < 1e-3)


CHECKS: tuple[Callable[..., Check], ...] = (
    check_spectrum, check_ergotropy, check_gradient, check_kernel_vs_circuit, check_norm, check_nc_optimum,
)


def run_validation(fault: Optional[str] = None) -> list[Check]:
    """Run every check; ``fault`` injects a known defect as a negative control."""
    if fault is not None and fault not in FAULTS:
        raise ValueError(f"unknown fault {fault!r}; choose from {FAULTS}")
    return [check(fault) for check in CHECKS]
