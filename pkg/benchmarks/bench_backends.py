"""Time the numba kernels against their pure-numpy fallbacks.

Run: python3 benchmarks/bench_backends.py [--repeats N]

Each kernel is warmed up first so numba's compilation cost stays out of
the timings, then the median of N runs is reported for both paths along
with the speedup.  Inputs are seeded, so repeated invocations time the
same work.
"""

import argparse
import time

import numpy as np

from commbound import _kernels, stream
from commbound._backend import HAVE_NUMBA


def median_time(fn, args, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(*args)
        times.append(time.perf_counter() - t0)
    return sorted(times)[len(times) // 2]


def row(label, numba_fn, python_fn, args, repeats):
    numba_fn(*args)
    python_fn(*args)
    t_numba = median_time(numba_fn, args, repeats)
    t_python = median_time(python_fn, args, repeats)
    print(
        "%-28s %12.6f %12.6f %9.1fx"
        % (label, t_python * 1e3, t_numba * 1e3, t_python / t_numba)
    )


def hermitian(n, rng):
    m = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return (m + m.conj().T) / 2.0


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeats", type=int, default=7, help="timed runs per kernel")
    args = parser.parse_args()

    if not HAVE_NUMBA:
        print("numba is not installed; nothing to compare")
        return

    rng = stream(0, 0)
    print("%-28s %12s %12s %9s" % ("kernel", "numpy (ms)", "numba (ms)", "speedup"))
    for dim in (2, 4, 8, 16):
        mats = [hermitian(dim, rng) for _ in range(200)]

        def sweep_numba(ms):
            for m in ms:
                _kernels.jacobi_eigh_numba(m)

        def sweep_python(ms):
            for m in ms:
                _kernels.jacobi_eigh_python(m)

        row("jacobi_eigh dim=%d x200" % dim, sweep_numba, sweep_python, (mats,), args.repeats)

    for n in (2048, 4096):
        vals = np.exp(1j * rng.uniform(0.0, 2.0 * np.pi, n))
        row(
            "best_by_offset n=%d" % n,
            _kernels.best_by_offset_numba,
            _kernels.best_by_offset_python,
            (vals, n // 2),
            args.repeats,
        )

    row(
        "sqrt_series_sums n=100000",
        _kernels.sqrt_series_sums_numba,
        _kernels.sqrt_series_sums_python,
        (100000,),
        args.repeats,
    )


if __name__ == "__main__":
    main()
