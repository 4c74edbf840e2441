"""Compare the compiled and numpy kernels on trajectory workloads.

    python benchmarks/bench_kernels.py [--points 2001 20001] [--repeat 5]
"""
import argparse
import timeit

import numpy as np

from milburnosc.backend import available_backends, get_kernels
from milburnosc.evolution import _prepare
from milburnosc.normal_modes import SystemParams, derive_modes


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, nargs="+", default=[2001, 20001, 200001])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)

    modes = derive_modes(SystemParams(1.0, 0.5, 0.45, 100.0))
    backends = available_backends()
    if "cython" not in backends:
        print("compiled extension not built; timing numpy only")
    print(f"{'points':>8} {'op':<22} " + " ".join(f"{b:>12}" for b in backends) + "  speedup  max|diff|")
    for n in args.points:
        U, M, rates, t = _prepare(modes, np.linspace(0.0, 100.0, n), "milburn", None, None)
        for op in ("evolve_batch", "trajectory_invariants"):
            times, outs = [], []
            for b in backends:
                fn = getattr(get_kernels(b), op)
                outs.append(fn(U, M, rates, t))
                best = min(timeit.repeat(lambda: fn(U, M, rates, t), number=1, repeat=args.repeat))
                times.append(best)
            diff = float(np.max(np.abs(outs[0] - outs[-1])))
            speed = times[-1] / times[0] if len(times) > 1 else 1.0
            cells = " ".join(f"{1e3 * x:10.2f}ms" for x in times)
            print(f"{n:>8} {op:<22} {cells}  {speed:6.1f}x  {diff:.2e}")


if __name__ == "__main__":
    main()
