"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py [--repeat 5] [--size 64]

Prints one tab-separated row per kernel: best-of-N seconds for each path and
the speed-up.  The jit path is warmed up once before timing.
"""
import argparse
import time

import numpy as np

from bordermin import kernels


def _best(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def cases(size, rng):
    a = rng.integers(0, 4, size=size).astype(np.int64)
    b = rng.integers(0, 4, size=size).astype(np.int64)
    parts = [rng.integers(0, 4, size=int(rng.integers(size // 4, size // 2))) for _ in range(16)]
    flat = np.concatenate(parts).astype(np.int64)
    offsets = np.cumsum([0] + [len(p) for p in parts]).astype(np.int64)
    score = rng.integers(-1, 20, size=(size, size)).astype(np.int64)
    dep = rng.integers(0, 4, size=4 * size).astype(np.int64)
    seq = dep[np.sort(rng.choice(4 * size, size=size, replace=False))]
    c0 = rng.integers(0, 5, size=4 * size).astype(np.int64)
    c1 = rng.integers(0, 5, size=4 * size).astype(np.int64)
    return [
        ("lcs_table", (a, b)),
        ("suffix_lcs_table", (a, b)),
        ("lcs_matrix", (flat, offsets)),
        ("align_table", (score,)),
        ("reembed_dp", (dep, seq, c0, c1)),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--size", type=int, default=64)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    rng = np.random.default_rng(args.seed)
    print("kernel\tnumpy_s\tnumba_s\tspeedup")
    for name, inputs in cases(args.size, rng):
        py = getattr(kernels, name + "_py")
        jit = getattr(kernels, name + "_jit")
        jit(*inputs)
        t_py = _best(py, inputs, args.repeat)
        t_jit = _best(jit, inputs, args.repeat)
        print(f"{name}\t{t_py:.6f}\t{t_jit:.6f}\t{t_py / t_jit:.1f}x")


if __name__ == "__main__":
    main()
