"""Compare the compiled and numpy kernel backends on full gradient ascents.

    python benchmarks/bench_kernels.py [--repeats 20] [--sizes 4 6 8]

For each (n, ansatz) the same starting angles are ascended with both backends;
the table reports the mean wall time per ascent, the speedup, and the largest
difference between the two work histories.
"""

import argparse
import time

import numpy as np

from ergovqe._kernels import available_backends
from ergovqe.ansatz import build_ansatz
from ergovqe.experiment import initial_theta
from ergovqe.hamiltonian import build_hamiltonian, model_from_preset
from ergovqe.optimizer import CostContext, OptimizerConfig, ascend
from ergovqe.statevec import all_up


def time_backend(kernels, ctx, starts, config):
    histories = []
    t0 = time.perf_counter()
    for theta0 in starts:
        histories.append(ascend(theta0, ctx, config, kernels=kernels).work_history)
    return (time.perf_counter() - t0) / len(starts), histories


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sizes", type=int, nargs="+", default=[4, 6, 8])
    p.add_argument("--ansatz", nargs="+", default=["nc", "lin", "ata"])
    p.add_argument("--model", default="xxx")
    p.add_argument("--repeats", type=int, default=20, help="ascents per cell")
    args = p.parse_args(argv)

    backends = available_backends()
    if "cython" not in backends:
        print("compiled extension not built; only the numpy backend is available")
    config = OptimizerConfig()
    print(f"{'n':>3} {'ansatz':>6} {'iters':>6} " + " ".join(f"{name + ' ms':>10}" for name in backends)
          + f" {'speedup':>8} {'max diff':>9}")
    for n in args.sizes:
        H = build_hamiltonian(model_from_preset(args.model, n))
        for tag in args.ansatz:
            ctx = CostContext(build_ansatz(tag, n), all_up(n), H)
            starts = [initial_theta((0, i), n) for i in range(args.repeats)]
            results = {name: time_backend(k, ctx, starts, config) for name, k in backends.items()}
            iters = np.mean([len(h) - 1 for h in results["python"][1]])
            cells = " ".join(f"{1e3 * results[name][0]:>10.3f}" for name in backends)
            if "cython" in results:
                speedup = results["python"][0] / results["cython"][0]
                diff = max(float(np.max(np.abs(a[:min(len(a), len(b))] - b[:min(len(a), len(b))])))
                           for a, b in zip(results["python"][1], results["cython"][1]))
                print(f"{n:>3} {tag:>6} {iters:>6.0f} {cells} {speedup:>7.1f}x {diff:>9.1e}")
            else:
                print(f"{n:>3} {tag:>6} {iters:>6.0f} {cells}")


if __name__ == "__main__":
    main()
