#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallbacks.

Runs both implementations of the two hot kernels (edge-direction color
histogram, online SOM training) on identical inputs, checks they agree,
and reports best-of-N wall times plus the speedup.

Usage: python3 benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from geomir import _kernels


def best_of(fn, repeats):
    times = []
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def bench_histogram(repeats):
    rng = np.random.default_rng(0)
    h, w = 480, 640
    gx = rng.normal(0.0, 60.0, (h, w))
    gy = rng.normal(0.0, 60.0, (h, w))
    a = rng.uniform(-100.0, 100.0, (h, w))
    b = rng.uniform(-100.0, 100.0, (h, w))
    args = (gx, gy, a, b, 20.0, 8, 8)

    ref = _kernels._edge_color_hist_np(*args)
    out_nb = _kernels._edge_color_hist_nb(*args)  # first call includes JIT compile
    assert np.array_equal(ref, out_nb), "kernel outputs disagree"

    t_np = best_of(lambda: _kernels._edge_color_hist_np(*args), repeats)
    t_nb = best_of(lambda: _kernels._edge_color_hist_nb(*args), repeats)
    return "edge-color histogram (640x480)", t_np, t_nb


def bench_som(repeats):
    rng = np.random.default_rng(1)
    n, dim, nodes, epochs = 500, 576, 100, 5
    data = rng.random((n, dim))
    order = np.concatenate([rng.permutation(n) for _ in range(epochs)])
    total = len(order)
    t = np.arange(total) / max(total - 1, 1)
    alphas = 0.5 * (0.01 / 0.5) ** t
    sigmas = 5.0 * (0.5 / 5.0) ** t
    coords = np.array([(r, c) for r in range(10) for c in range(10)], dtype=np.float64)
    grid_d2 = ((coords[:, None, :] - coords[None, :, :]) ** 2).sum(axis=2)
    init = rng.random((nodes, dim))

    w_np, w_nb = init.copy(), init.copy()
    _kernels._som_train_np(w_np, data, order, alphas, sigmas, grid_d2)
    _kernels._som_train_nb(w_nb, data, order, alphas, sigmas, grid_d2)  # JIT compile
    assert np.allclose(w_np, w_nb, atol=1e-12), "kernel outputs disagree"

    t_np = best_of(
        lambda: _kernels._som_train_np(init.copy(), data, order, alphas, sigmas, grid_d2), repeats
    )
    t_nb = best_of(
        lambda: _kernels._som_train_nb(init.copy(), data, order, alphas, sigmas, grid_d2), repeats
    )
    return f"SOM training ({n}x{dim}, {epochs} epochs, 10x10 grid)", t_np, t_nb


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats (best is kept)")
    args = parser.parse_args()

    if not _kernels.HAVE_NUMBA:
        raise SystemExit("numba is not available; nothing to compare")

    print(f"{'kernel':<50} {'numpy':>10} {'numba':>10} {'speedup':>8}")
    for bench in (bench_histogram, bench_som):
        name, t_np, t_nb = bench(args.repeats)
        print(f"{name:<50} {t_np * 1e3:>8.2f}ms {t_nb * 1e3:>8.2f}ms {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
