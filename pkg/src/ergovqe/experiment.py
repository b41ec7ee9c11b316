"""Monte Carlo ensembles of optimizations, parameter sweeps and 2-qubit landscapes.

Randomness: trial ``i`` draws its starting angles uniformly from ``[0, pi]^n``
with ``numpy.random.default_rng([seed, *stream, i])``.  Sweeps use
``stream = (point_index,)``, so every connectivity at one sweep point starts
from the same angles, and fresh angles are drawn at each point.  Results
therefore depend only on (seed, stream, trial index), never on scheduling.
"""

from __future__ import annotations

import logging
import os
from concurrent.futures import Executor, ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from .ansatz import build_ansatz
from .errors import ArgumentError, ConfigurationError, NumericalError
from .ergotropy import efficiency, ergotropy
from .hamiltonian import SpinModel, build_hamiltonian, model_from_preset, spectrum
from .optimizer import CostContext, OptimizerConfig, ascend
from .statevec import all_up

log = logging.getLogger(__name__)

DEFAULT_TRIALS = 2000
SWEEP_AXES = ("n", "gamma", "delta")
WORKERS_ENV = "ERGOVQE_WORKERS"


def worker_count() -> int:
    """Worker processes requested through ``ERGOVQE_WORKERS`` (default 1)."""
    raw = os.environ.get(WORKERS_ENV, "1").strip().lower()
    if raw in ("max", "all", "0"):
        return os.cpu_count() or 1
    try:
        count = int(raw)
    except ValueError:
        raise ConfigurationError(f"{WORKERS_ENV} must be an integer or 'max', got {raw!r}") from None
    return max(1, count)


def initial_theta(key: Sequence[int], n: int) -> np.ndarray:
    return np.random.default_rng(list(key)).uniform(0.0, np.pi, n)


@dataclass
class TrialEnsemble:
    model: SpinModel
    connectivity: str
    M: int
    seed: int
    stream: tuple
    ergotropy: float
    mean_energy: float
    per_iteration_mean: np.ndarray
    per_iteration_std: np.ndarray
    final_values: np.ndarray
    iterations: np.ndarray
    converged: np.ndarray
    config: OptimizerConfig = field(default_factory=OptimizerConfig)

    @property
    def final_mean(self) -> float:
        return float(np.mean(self.final_values))

    @property
    def final_std(self) -> float:
        return float(np.std(self.final_values))

    @property
    def efficiency(self) -> float:
        return efficiency(self.final_mean, self.ergotropy)

    @property
    def converged_fraction(self) -> float:
        return float(np.mean(self.converged))


def _run_chunk(ctx: CostContext, config: OptimizerConfig, prefix: tuple, indices: Sequence[int]):
    out = []
    for i in indices:
        key = (*prefix, i)
        try:
            res = ascend(initial_theta(key, ctx.n), ctx, config)
        except NumericalError as exc:
            raise NumericalError(f"trial {i} (rng key {key}) failed: {exc}", exc.trajectory) from exc
        out.append((res.work_history, res.iterations, res.converged))
    return out


def _chunks(M: int, parts: int) -> list[range]:
    size = -(-M // parts)
    return [range(lo, min(lo + size, M)) for lo in range(0, M, size)]


def _pad(histories: Sequence[np.ndarray]) -> np.ndarray:
    # hold each trial's final value so every iteration averages over all M trials
    length = max(len(h) for h in histories)
    table = np.empty((len(histories), length))
    for row, h in zip(table, histories):
        row[: len(h)] = h
        row[len(h):] = h[-1]
    return table


def run_trials(model: SpinModel, connectivity: str, M: int = DEFAULT_TRIALS, seed: int = 0,
               opt_config: OptimizerConfig = OptimizerConfig(), stream: Sequence[int] = (),
               executor: Optional[Executor] = None) -> TrialEnsemble:
    """Optimize from ``M`` random starts and collect per-iteration statistics.

    Unconverged trials (hit ``max_iters``) contribute their last value; the
    fraction that converged is kept on the result.
    """
    if M < 1:
        raise ConfigurationError(f"trial count must be >= 1, got {M}")
    H = build_hamiltonian(model)
    spec = spectrum(H)
    state = all_up(model.n)
    report = ergotropy(state, H, spec)
    ctx = CostContext(build_ansatz(connectivity, model.n), state, H)
    prefix = (int(seed), *map(int, stream))

    workers = worker_count()
    if M > 1 and (executor is not None or workers > 1):
        # chunking only affects wall time; rows come back in trial order
        parts = _chunks(M, min(M, 4 * workers))
        args = zip(*[(ctx, opt_config, prefix, p) for p in parts])
        if executor is None:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                results = list(pool.map(_run_chunk, *args))
        else:
            results = list(executor.map(_run_chunk, *args))
        rows = [r for chunk in results for r in chunk]
    else:
        rows = _run_chunk(ctx, opt_config, prefix, range(M))

    table = _pad([r[0] for r in rows])
    ens = TrialEnsemble(
        model=model, connectivity=connectivity, M=M, seed=int(seed), stream=tuple(stream),
        ergotropy=report.ergotropy, mean_energy=report.mean_energy,
        per_iteration_mean=table.mean(axis=0), per_iteration_std=table.std(axis=0),
        final_values=table[:, -1].copy(),
        iterations=np.array([r[1] for r in rows]), converged=np.array([r[2] for r in rows]),
        config=opt_config,
    )
    if ens.final_mean > ens.ergotropy + 1e-9:
        raise NumericalError(f"mean work {ens.final_mean} exceeds ergotropy {ens.ergotropy}")
    log.debug("%s/%s n=%d: <W>=%.6f converged %.1f%%", model.preset, connectivity, model.n,
              ens.final_mean, 100 * ens.converged_fraction)
    return ens


@dataclass(frozen=True)
class SweepRecord:
    preset: Optional[str]
    n: int
    J: float
    h: float
    gamma: float
    delta: float
    connectivity: str
    M: int
    seed: int
    ergotropy: float
    mean_work: float
    std_work: float
    eta: float
    converged_fraction: float = 1.0

    CSV_COLUMNS = ("preset", "n", "J", "h", "gamma", "delta", "connectivity", "M", "seed",
                   "ergotropy", "mean_work", "std_work", "eta")


def _template_dict(template) -> dict:
    if isinstance(template, SpinModel):
        return template.as_dict()
    if isinstance(template, Mapping):
        return dict(template)
    raise ArgumentError(f"model template must be a SpinModel or mapping, got {type(template).__name__}")


def sweep_models(model_template, axis: str, values: Sequence[float]) -> list[SpinModel]:
    """Validate every sweep point up front; raises before any optimization runs."""
    if axis not in SWEEP_AXES:
        raise ConfigurationError(f"sweep axis must be one of {SWEEP_AXES}, got {axis!r}")
    if len(values) == 0:
        raise ConfigurationError("sweep needs at least one value")
    base = _template_dict(model_template)
    preset = base.pop("preset", None)
    models = []
    for v in values:
        point = dict(base)
        point[axis] = int(round(v)) if axis == "n" else float(v)
        if axis == "n" and abs(point["n"] - v) > 1e-9:
            raise ConfigurationError(f"chain length must be an integer, got {v}")
        if preset is None:
            models.append(SpinModel(**point))
        else:
            models.append(model_from_preset(preset, **point))
    return models


def sweep(model_template, connectivities: Sequence[str], axis: str, values: Sequence[float],
          M: int = DEFAULT_TRIALS, seed: int = 0,
          opt_config: OptimizerConfig = OptimizerConfig()) -> list[SweepRecord]:
    """One record per (axis value, connectivity), in that nesting order."""
    models = sweep_models(model_template, axis, values)
    for c in connectivities:
        build_ansatz(c, 2)  # reject unknown tags before the long run
    workers = worker_count()
    pool = ProcessPoolExecutor(max_workers=workers) if workers > 1 else None
    records = []
    try:
        for p, model in enumerate(models):
            for c in connectivities:
                ens = run_trials(model, c, M, seed, opt_config, stream=(p,), executor=pool)
                records.append(SweepRecord(
                    preset=model.preset, n=model.n, J=model.J, h=model.h, gamma=model.gamma,
                    delta=model.delta, connectivity=c, M=M, seed=seed, ergotropy=ens.ergotropy,
                    mean_work=ens.final_mean, std_work=ens.final_std, eta=ens.efficiency,
                    converged_fraction=ens.converged_fraction,
                ))
                log.info("%s %s=%s %s: eta=%.4f", model.preset, axis, getattr(model, axis), c, records[-1].eta)
    finally:
        if pool is not None:
            pool.shutdown()
    return records


def frange(start: float, stop: float, step: float) -> list[float]:
    """Inclusive arithmetic range, robust to rounding (``frange(-1, 1, 0.25)`` has 9 points)."""
    if step <= 0:
        raise ConfigurationError(f"sweep step must be positive, got {step}")
    if stop < start:
        raise ConfigurationError(f"sweep range is empty: from {start} to {stop}")
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + i * step, 12) for i in range(count)]


@dataclass
class LandscapeGrid:
    model: SpinModel
    connectivity: str
    theta1: np.ndarray
    theta2: np.ndarray
    W: np.ndarray          # W[i, j] at (theta1[i], theta2[j])
    gradient: np.ndarray   # (R, R, 2)
    ergotropy: float
    trajectories: list = field(default_factory=list)  # OptimizeResult per requested start

    @property
    def resolution(self) -> int:
        return len(self.theta1)


def landscape_grid(model: SpinModel, connectivity: str, resolution: int = 101,
                   trajectories: int = 0, seed: int = 0,
                   opt_config: OptimizerConfig = OptimizerConfig()) -> LandscapeGrid:
    """W and its gradient on a uniform grid over ``[0, pi]^2`` (endpoints included).

    Trajectory ``i`` starts where trial ``i`` of ``run_trials(..., seed)`` would.
    """
    if model.n != 2:
        raise ArgumentError(f"landscapes need exactly 2 qubits, got n={model.n}")
    if resolution < 2:
        raise ArgumentError(f"grid resolution must be >= 2, got {resolution}")
    H = build_hamiltonian(model)
    state = all_up(2)
    report = ergotropy(state, H, spectrum(H))
    ctx = CostContext(build_ansatz(connectivity, 2), state, H)
    axis = np.linspace(0.0, np.pi, resolution)
    t1, t2 = np.meshgrid(axis, axis, indexing="ij")
    points = np.column_stack([t1.ravel(), t2.ravel()])
    W = ctx.works(points).reshape(resolution, resolution)
    grad = ctx.gradients(points).reshape(resolution, resolution, 2)
    paths = [ascend(initial_theta((seed, i), 2), ctx, opt_config) for i in range(trajectories)]
    return LandscapeGrid(model, connectivity, axis, axis.copy(), W, grad, report.ergotropy, paths)
