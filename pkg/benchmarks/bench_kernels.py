"""Compiled vs pure-Python kernel timings.

Run with ``python3 benchmarks/bench_kernels.py``. Each kernel is timed on both
backends with identical inputs; outputs are checked for agreement first.
"""
import argparse
import time

import numpy as np

from phikcorr import _pykernels
from phikcorr.numerics import RngStream

try:
    from phikcorr import _kernels
except ImportError:  # extension not built
    _kernels = None


def _best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def _cases(n_tables):
    edges = np.linspace(-5.0, 5.0, 21)
    fine = np.linspace(-5.0, 5.0, 201)
    rng = RngStream(7).generator()
    tables = rng.multinomial(100, np.full(400, 1 / 400), size=n_tables).reshape(n_tables, 20, 20)
    rows = np.array([5, 8, 4, 6, 7, 5, 9, 6, 3, 7] * 2, dtype=np.int64)
    cols = np.array([6, 6, 7, 5, 6, 6, 7, 5, 6, 6] * 2, dtype=np.int64)

    def bvn(mod):
        return lambda: mod.bvnu_grid(edges, edges, 0.6)

    def bvn_fine(mod):
        return lambda: mod.bvnu_grid(fine, fine, 0.6)

    def gstat(mod):
        return lambda: mod.g_stat_batch(tables)

    def pate(mod):
        def run():
            gen = RngStream(3).generator()
            for _ in range(200):
                mod.patefield(rows, cols, gen)
        return run

    return [
        ("bvnu_grid 21x21 edges", bvn),
        ("bvnu_grid 201x201 edges", bvn_fine),
        (f"g_stat_batch {n_tables} x 20x20", gstat),
        ("patefield 200 x 20x20", pate),
    ]


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--tables", type=int, default=2000)
    args = parser.parse_args(argv)
    if _kernels is None:
        print("compiled extension not available; build with `pip install -e . --no-build-isolation`")
        return 1

    edges = np.linspace(-5.0, 5.0, 21)
    assert np.allclose(_kernels.bvnu_grid(edges, edges, 0.6), _pykernels.bvnu_grid(edges, edges, 0.6),
                       rtol=0, atol=1e-15)
    rows = np.array([5, 8, 4, 6], dtype=np.int64)
    cols = np.array([6, 6, 7, 4], dtype=np.int64)
    a = _kernels.patefield(rows, cols, RngStream(1).generator())
    b = _pykernels.patefield(rows, cols, RngStream(1).generator())
    assert np.array_equal(a, b)

    print(f"{'kernel':32s} {'python [ms]':>12s} {'compiled [ms]':>14s} {'speedup':>8s}")
    for name, make in _cases(args.tables):
        t_py = _best_of(make(_pykernels), args.repeat)
        t_c = _best_of(make(_kernels), args.repeat)
        print(f"{name:32s} {1e3 * t_py:12.2f} {1e3 * t_c:14.2f} {t_py / t_c:7.1f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
