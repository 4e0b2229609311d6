"""
Benchmark the numba kernels against their pure-numpy fallbacks.

    python3 benchmarks/bench_kernels.py --n 100000 --width 24 --repeat 5

Each kernel runs once untimed per backend (to trigger compilation), then
``--repeat`` timed calls; the best time is reported together with the
largest relative disagreement between the two backends.
"""

import argparse
import time

import numpy as np

from randlen import _kernels


def _inputs(n, width, seed):
    rng = np.random.default_rng(seed)
    innov = 1.0 / rng.standard_exponential(n)
    values = 1.0 / rng.standard_exponential((n, width))
    z = np.linspace(1.0, 2.0, width)
    n_terms = rng.integers(1, width + 1, size=n)
    return innov, values, z, n_terms


def _best(fn, repeat):
    fn()
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def _rel_diff(a, b):
    a = np.atleast_1d(np.asarray(a, dtype=np.float64))
    b = np.atleast_1d(np.asarray(b, dtype=np.float64))
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(b), 1e-300)))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.split("\n\n")[0])
    ap.add_argument("--n", type=int, default=100_000, help="path length / rows")
    ap.add_argument("--width", type=int, default=24, help="array width for row aggregates")
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)

    if _kernels.numba_impl is None:
        raise SystemExit("numba is not installed; nothing to compare")
    innov, values, z, n_terms = _inputs(args.n, args.width, args.seed)
    cases = {
        "armax_core": lambda b: b.armax_core(innov, 0.5),
        "moving_max": lambda b: b.moving_max(innov, 4),
        "row_aggregates": lambda b: b.row_aggregates(values, z, n_terms),
        "running_max": lambda b: b.running_max(innov),
    }

    print(f"n={args.n} width={args.width} repeat={args.repeat}")
    print(f"{'kernel':<16}{'numpy [ms]':>12}{'numba [ms]':>12}{'speedup':>10}{'max rel diff':>14}")
    for name, call in cases.items():
        t_np = _best(lambda: call(_kernels.numpy_impl), args.repeat)
        t_nb = _best(lambda: call(_kernels.numba_impl), args.repeat)
        a, b = call(_kernels.numpy_impl), call(_kernels.numba_impl)
        if isinstance(a, tuple):
            diff = max(_rel_diff(x, y) for x, y in zip(a, b))
        else:
            diff = _rel_diff(a, b)
        print(f"{name:<16}{t_np * 1e3:>12.2f}{t_nb * 1e3:>12.2f}{t_np / t_nb:>10.1f}{diff:>14.2e}")


if __name__ == "__main__":
    main()
