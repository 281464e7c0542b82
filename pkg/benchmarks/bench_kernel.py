"""Compare the compiled and pure-Python smoothing kernels.

    python3 benchmarks/bench_kernel.py [--repeat 3]

Both kernels must produce identical histograms; the script exits 1 otherwise.
"""

from __future__ import annotations

import argparse
import sys
import time

from lattice_skein import _pykernel, kernel

CASES = [
    ("full", 3, 3),
    ("full", 4, 4),
    ("full", 3, 6),
    ("restricted", 6, 4),
    ("restricted", 8, 3),
]


def _time(fn, m, n, total, repeat):
    best = float("inf")
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn(m, n, 0, total, False)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    if kernel.BACKEND != "cython":
        print("compiled kernel not built; run `python3 setup.py build_ext --inplace`", file=sys.stderr)
        return 1
    fast = kernel._impl
    ok = True
    print(f"{'mode':10s} {'L(m,n)':8s} {'states':>9s} {'python s':>9s} {'cython s':>9s} {'speedup':>8s}")
    for mode, m, n in CASES:
        total = 2 ** (m * n) if mode == "full" else (n + 1) ** m
        name = f"accumulate_{mode}"
        slow_t, slow = _time(getattr(_pykernel, name), m, n, total, 1)
        fast_t, quick = _time(getattr(fast, name), m, n, total, args.repeat)
        ok &= slow == quick
        print(f"{mode:10s} L({m},{n})   {total:9d} {slow_t:9.3f} {fast_t:9.4f} {slow_t / fast_t:7.1f}x"
              + ("" if slow == quick else "  MISMATCH"))
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
