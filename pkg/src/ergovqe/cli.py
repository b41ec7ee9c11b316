"""Command-line entry point: ``ergovqe {ergotropy,optimize,sweep,landscape,validate}``.

Exit codes: 0 success, 1 usage or validation error, 2 numerical failure, 3 I/O.
Set ``ERGOVQE_WORKERS`` to run trials in several processes; it changes wall
time only, never the numbers written.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, _kernels
from .ansatz import CONNECTIVITIES
from .errors import ErgoError, NumericalError
from .ergotropy import ergotropy
from .experiment import (DEFAULT_TRIALS, SWEEP_AXES, SweepRecord, frange, landscape_grid, run_trials,
                         sweep)
from .hamiltonian import PRESETS, build_hamiltonian, model_from_preset, spectrum
from .optimizer import OptimizerConfig
from .output import csv_text, dumps_json, write_files
from .statevec import all_up
from .validation import FAULTS, run_validation

log = logging.getLogger("ergovqe")

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _model_args() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("model")
    g.add_argument("--model", choices=PRESETS, default="xx", help="Hamiltonian preset (default: xx)")
    g.add_argument("--n", type=int, default=2, help="number of qubits (default: 2)")
    g.add_argument("--j", type=float, default=-1.0, help="coupling J (default: -1.0)")
    g.add_argument("--h", type=float, default=0.5, help="field h (default: 0.5)")
    g.add_argument("--gamma", type=float, help="anisotropy gamma (forced by some presets)")
    g.add_argument("--delta", type=float, help="anisotropy delta (forced by some presets)")
    return p


def _run_args() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("run")
    g.add_argument("--ansatz", action="append", choices=CONNECTIVITIES,
                   help="connectivity; repeat for several")
    g.add_argument("--trials", type=int, default=DEFAULT_TRIALS, help="random starts M (default: 2000)")
    g.add_argument("--seed", type=int, default=0, help="master seed (default: 0)")
    g.add_argument("--step-size", type=float, default=0.1, help="ascent step k (default: 0.1)")
    g.add_argument("--max-iters", type=int, default=500)
    g.add_argument("--tol", type=float, default=1e-6, help="plateau tolerance on |dW|")
    g.add_argument("--window", type=int, default=10, help="plateau window in iterations")
    return p


def _out_args(default: str | None) -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    g = p.add_argument_group("output")
    g.add_argument("--out", default=default, help=f"output path (default: {default or 'stdout'})")
    g.add_argument("--format", choices=("csv", "json"), default="csv")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="ergovqe", description="Variational work extraction from spin-chain batteries.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sub.add_parser("ergotropy", parents=[_model_args(), _out_args(None)],
                   help="mean energy, ergotropy and spectrum of the all-up input")
    sub.add_parser("optimize", parents=[_model_args(), _run_args(), _out_args("optimize.csv")],
                   help="ensemble of gradient ascents; convergence table and summary")
    sp = sub.add_parser("sweep", parents=[_model_args(), _run_args(), _out_args("sweep.csv")],
                        help="efficiency over n, gamma or delta")
    sp.add_argument("--axis", choices=SWEEP_AXES, required=True)
    sp.add_argument("--from", dest="start", type=float, required=True)
    sp.add_argument("--to", dest="stop", type=float, required=True)
    sp.add_argument("--step", type=float, default=1.0)
    lp = sub.add_parser("landscape", parents=[_model_args(), _run_args(), _out_args("landscape.csv")],
                        help="W and gradient on a grid over [0, pi]^2 (n=2 only)")
    lp.add_argument("--grid", type=int, default=101, help="points per axis (default: 101)")
    lp.add_argument("--trajectories", type=int, default=0, help="ascent paths to record alongside")
    vp = sub.add_parser("validate", help="run the built-in self-check suite")
    vp.add_argument("--inject-fault", choices=FAULTS, help="negative control: deliberately break the model")
    return parser


def _model(args):
    return model_from_preset(args.model, args.n, args.j, args.h, args.gamma, args.delta)


def _opt_config(args) -> OptimizerConfig:
    return OptimizerConfig(step_size=args.step_size, max_iters=args.max_iters,
                           convergence_tol=args.tol, convergence_window=args.window)


def _config_echo(args, **extra) -> dict:
    # everything needed to rerun; output paths are deliberately left out
    echo = {"command": args.command, "version": __version__, "kernel_backend": _kernels.BACKEND,
            "model": args.model, "n": args.n, "J": args.j, "h": args.h, "gamma": args.gamma,
            "delta": args.delta, "input": "all-up", "init": "uniform[0,pi] per parameter"}
    if hasattr(args, "trials"):
        echo.update(ansatz=args.ansatz, trials=args.trials, seed=args.seed, optimizer=_opt_config(args).as_dict(),
                    rng="numpy default_rng(SeedSequence([seed, *stream, trial]))")
        if args.trials < DEFAULT_TRIALS:
            echo["note"] = f"M={args.trials} is below the reference ensemble size {DEFAULT_TRIALS}"
    echo.update(extra)
    return echo


def _table(columns, rows, config, fmt) -> str:
    if fmt == "json":
        return dumps_json({"config": config, "columns": list(columns), "rows": [list(r) for r in rows]})
    return csv_text(columns, rows, config)


def _tagged(path: Path, tag: str, many: bool) -> Path:
    return path.with_name(f"{path.stem}_{tag}{path.suffix}") if many else path


def cmd_ergotropy(args) -> int:
    model = _model(args)
    H = build_hamiltonian(model)
    spec = spectrum(H)
    rep = ergotropy(all_up(model.n), H, spec)
    result = {**model.as_dict(), "mean_energy": rep.mean_energy, "passive_energy": rep.passive_energy,
              "ground_energy": spec.ground_energy, "ergotropy": rep.ergotropy,
              "spectrum": spec.eigenvalues}
    print(f"model={model.preset} n={model.n} J={model.J:g} h={model.h:g} gamma={model.gamma:g} delta={model.delta:g}")
    print(f"E_rho={rep.mean_energy:.12g}  E_ground={spec.ground_energy:.12g}  ergotropy={rep.ergotropy:.12g}")
    print("spectrum: " + " ".join(f"{e:.12g}" for e in spec.eigenvalues))
    if args.out:
        if args.format == "json":
            text = dumps_json({"config": _config_echo(args), "result": result})
        else:
            cols = ["preset", "n", "J", "h", "gamma", "delta", "mean_energy", "passive_energy",
                    "ground_energy", "ergotropy", "spectrum"]
            row = [result[c] for c in cols[:-1]] + [" ".join(format(e, ".17g") for e in spec.eigenvalues)]
            text = csv_text(cols, [row], _config_echo(args))
        write_files({args.out: text})
    return EXIT_OK


def cmd_optimize(args) -> int:
    model = _model(args)
    config = _opt_config(args)
    tags = args.ansatz or ["nc"]
    out = Path(args.out)
    files, summary = {}, {}
    for tag in tags:
        ens = run_trials(model, tag, args.trials, args.seed, config)
        rows = [(t, m, s) for t, (m, s) in enumerate(zip(ens.per_iteration_mean, ens.per_iteration_std))]
        echo = _config_echo(args, connectivity=tag)
        files[_tagged(out, tag, len(tags) > 1)] = _table(("iteration", "mean_W", "std_W"), rows, echo, args.format)
        summary[tag] = {"final_mean": ens.final_mean, "final_std": ens.final_std,
                        "ergotropy": ens.ergotropy, "mean_energy": ens.mean_energy,
                        "efficiency": ens.efficiency, "converged_fraction": ens.converged_fraction,
                        "max_final": float(np.max(ens.final_values)), "min_final": float(np.min(ens.final_values)),
                        "mean_iterations": float(np.mean(ens.iterations)), "M": ens.M, "seed": ens.seed}
        print(f"{tag}: <W>={ens.final_mean:.9f} std={ens.final_std:.3g} erg={ens.ergotropy:.9g} "
              f"eta={ens.efficiency:.6f} converged={100 * ens.converged_fraction:.1f}%")
    files[out.with_suffix(".summary.json")] = dumps_json({"config": _config_echo(args, ansatz=tags),
                                                          "results": summary})
    write_files(files)
    return EXIT_OK


def cmd_sweep(args) -> int:
    if args.axis == "n":
        values = [int(round(v)) for v in frange(args.start, args.stop, args.step)]
    else:
        values = frange(args.start, args.stop, args.step)
    template = {"preset": args.model, "n": args.n, "J": args.j, "h": args.h,
                "gamma": args.gamma, "delta": args.delta}
    tags = args.ansatz or list(CONNECTIVITIES)
    records = sweep(template, tags, args.axis, values, args.trials, args.seed, _opt_config(args))
    echo = _config_echo(args, ansatz=tags, axis=args.axis, values=values,
                        streams="fresh starts per sweep point: stream=(point_index,)")
    rows = [[getattr(r, c) for c in SweepRecord.CSV_COLUMNS] for r in records]
    write_files({args.out: _table(SweepRecord.CSV_COLUMNS, rows, echo, args.format)})
    for r in records:
        print(f"{args.axis}={getattr(r, args.axis)!s:>6} {r.connectivity:>4}: eta={r.eta:.4f} "
              f"<W>={r.mean_work:.6f} erg={r.ergotropy:.6f}")
    return EXIT_OK


def cmd_landscape(args) -> int:
    model = _model(args)
    tags = args.ansatz or ["nc"]
    out = Path(args.out)
    files = {}
    for tag in tags:
        grid = landscape_grid(model, tag, args.grid, args.trajectories, args.seed, _opt_config(args))
        echo = _config_echo(args, connectivity=tag, grid=args.grid, trajectories=args.trajectories)
        rows = [(grid.theta1[i], grid.theta2[j], grid.W[i, j], grid.gradient[i, j, 0], grid.gradient[i, j, 1])
                for i in range(grid.resolution) for j in range(grid.resolution)]
        path = _tagged(out, tag, len(tags) > 1)
        files[path] = _table(("theta1", "theta2", "W", "grad1", "grad2"), rows, echo, args.format)
        if grid.trajectories:
            trows = [(tid, step, th[0], th[1], w)
                     for tid, res in enumerate(grid.trajectories)
                     for step, (th, w) in enumerate(zip(res.theta_history, res.work_history))]
            files[path.with_suffix(".trajectories" + path.suffix)] = _table(
                ("trajectory_id", "step", "theta1", "theta2", "W"), trows, echo, args.format)
        finals = ", ".join(f"{r.w_opt:.6f}" for r in grid.trajectories)
        print(f"{tag}: grid max W={grid.W.max():.6f} erg={grid.ergotropy:.6f}"
              + (f" trajectories end at [{finals}]" if finals else ""))
    write_files(files)
    return EXIT_OK


def cmd_validate(args) -> int:
    checks = run_validation(args.inject_fault)
    width = max(len(c.name) for c in checks)
    for c in checks:
        print(f"{'PASS' if c.passed else 'FAIL'}  {c.name:<{width}}  {c.measured}  [target {c.target}]")
    failed = sum(not c.passed for c in checks)
    print(f"{len(checks) - failed}/{len(checks)} checks passed (kernel backend: {_kernels.BACKEND})")
    return EXIT_OK if failed == 0 else EXIT_NUMERICAL


COMMANDS = {"ergotropy": cmd_ergotropy, "optimize": cmd_optimize, "sweep": cmd_sweep,
            "landscape": cmd_landscape, "validate": cmd_validate}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return COMMANDS[args.command](args)
    except NumericalError as exc:
        print(f"ergovqe: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ErgoError as exc:
        print(f"ergovqe: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"ergovqe: I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
