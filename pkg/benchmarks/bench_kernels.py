"""Benchmark the compiled census kernels against the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--samples N] [--repeat R]

Both implementations are bit-identical; this only measures speed.  The
compiled module is skipped gracefully when it was not built.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from gaugeorbits import groups
from gaugeorbits._kernels import fallback

try:
    from gaugeorbits._kernels import _core
except ImportError:
    _core = None


def _time(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn()
        best = min(best, time.perf_counter() - t0)
    return best, result


def bench_tuple_masks(samples, repeat):
    spec = groups.group_by_name("S3")
    cent = np.array(spec.element_centralizer_masks, dtype=np.uint64)
    rng = np.random.default_rng(0)
    idx = rng.integers(0, spec.order, size=(samples, 3), dtype=np.int64)
    full = spec.full_mask
    rows = []
    t_py, out_py = _time(lambda: fallback.tuple_masks(cent, idx, full), repeat)
    rows.append(("python", t_py))
    if _core is not None:
        t_cy, out_cy = _time(lambda: _core.tuple_masks(cent, idx, full), repeat)
        assert np.array_equal(out_py, out_cy)
        rows.append(("cython", t_cy))
    return rows


def bench_su2_classify(samples, repeat):
    rng = np.random.default_rng(0)
    q = rng.standard_normal((samples, 2, 4))
    q /= np.sqrt((q * q).sum(axis=2))[:, :, None]
    rows = []
    t_py, out_py = _time(lambda: fallback.su2_classify(q, groups.TAU_AXIS), repeat)
    rows.append(("python", t_py))
    if _core is not None:
        t_cy, out_cy = _time(lambda: _core.su2_classify(q, groups.TAU_AXIS), repeat)
        assert np.array_equal(out_py, out_cy)
        rows.append(("cython", t_cy))
    return rows


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=1_000_000)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    if _core is None:
        print("compiled kernels not built; timing the fallback only")
    for name, bench in [
        ("tuple_masks (S3, n=3)", bench_tuple_masks),
        ("su2_classify (n=2)", bench_su2_classify),
    ]:
        rows = bench(args.samples, args.repeat)
        print(f"\n{name}, {args.samples} samples, best of {args.repeat}:")
        base = rows[0][1]
        for backend, seconds in rows:
            rate = args.samples / seconds / 1e6
            speedup = base / seconds
            print(
                f"  {backend:>7}: {seconds * 1e3:8.2f} ms  "
                f"({rate:7.1f} Msamples/s, {speedup:4.1f}x)"
            )


if __name__ == "__main__":
    main()
