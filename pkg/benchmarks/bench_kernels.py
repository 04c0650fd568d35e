"""Time the numba kernels against their numpy twins.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from sepcheck import _jit, _kernels


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t)
    return best, out


def cases(rng):
    # Random weak orders rarely satisfy the axioms, so scans would stop at
    # once; additive tables make the scans run to completion.
    def additive(shape):
        u = sum(
            rng.integers(-4, 5, size=(shape[0], k)).reshape(
                (shape[0],) + (1,) * pos + (k,) + (1,) * (len(shape) - pos - 2)
            )
            for pos, k in enumerate(shape[1:])
        )
        flat = u.ravel()
        return np.unique(-flat, return_inverse=True)[1].reshape(shape).astype(np.int64)

    R = additive((3, 4, 4, 4)).reshape(3, 4, 16)
    yield "oi_scan 3x4x(16)", lambda b: _kernels.oi_scan(R, b)
    F = additive((4, 4, 4, 4)).reshape(4, 4, 16)
    yield "si_scan 4x4x(16)", lambda b: _kernels.si_scan(F, b)
    shape = (2, 3, 3)
    Rf = additive(shape).reshape(2, 9)
    repl = _kernels.replacement_table(shape[1:])
    yield "ji_scan 2x(3x3)", lambda b: _kernels.ji_scan(Rf, repl, b)
    rows = rng.integers(-1, 2, size=(24, 8))
    yield "balanced_search 24 rows, len 4", lambda b: _kernels.balanced_search(rows, 12, 4, b)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _jit.HAVE_NUMBA:
        print("numba is not installed; only the numpy backend is available")
    rng = np.random.default_rng(0)
    print(f"{'kernel':34s} {'numba [ms]':>12s} {'numpy [ms]':>12s} {'speedup':>8s}")
    for name, fn in cases(rng):
        fn("numba")  # compile outside the timing
        tn, a = _time(lambda: fn("numba"), args.repeat)
        tp, b = _time(lambda: fn("numpy"), args.repeat)
        same = (a is None and b is None) or (a is not None and b is not None and np.array_equal(a, b))
        print(f"{name:34s} {tn * 1e3:12.3f} {tp * 1e3:12.3f} {tp / tn:8.1f}" + ("" if same else "  MISMATCH"))


if __name__ == "__main__":
    main()
