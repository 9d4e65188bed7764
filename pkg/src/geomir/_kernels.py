"""Hot numeric kernels.

Each kernel has a numba-compiled version and a pure-numpy fallback that
computes the same thing. Set GEOMIR_NUMBA=0 to force the numpy path
(useful for debugging and for the benchmark in benchmarks/).
"""

import math
import os

import numpy as np

_want_numba = os.environ.get("GEOMIR_NUMBA", "1") != "0"

if _want_numba:
    try:
        from numba import njit

        HAVE_NUMBA = True
    except ImportError:  # pragma: no cover
        HAVE_NUMBA = False
else:
    HAVE_NUMBA = False

USE_NUMBA = HAVE_NUMBA


def _categorize_np(gx, gy, threshold, n_dirs):
    """Vectorized edge-direction categories; n_dirs marks the non-edge class."""
    mag = np.hypot(gx, gy)
    theta = np.arctan2(gy, gx) % math.pi
    theta[theta >= math.pi] = 0.0  # rounding can land exactly on pi; wraps to sector 0
    cat = np.floor(theta / (math.pi / n_dirs)).astype(np.int64)
    np.clip(cat, 0, n_dirs - 1, out=cat)
    cat[mag < threshold] = n_dirs
    return cat


def _chroma_bins_np(a, b, bins_per_axis):
    cell = 256.0 / bins_per_axis
    ia = np.floor((np.clip(a, -128.0, 128.0) + 128.0) / cell).astype(np.int64)
    ib = np.floor((np.clip(b, -128.0, 128.0) + 128.0) / cell).astype(np.int64)
    np.clip(ia, 0, bins_per_axis - 1, out=ia)
    np.clip(ib, 0, bins_per_axis - 1, out=ib)
    return ia * bins_per_axis + ib


def _edge_color_hist_np(gx, gy, a, b, threshold, n_dirs, bins_per_axis):
    cat = _categorize_np(gx, gy, threshold, n_dirs)
    chroma = _chroma_bins_np(a, b, bins_per_axis)
    n_chroma = bins_per_axis * bins_per_axis
    cells = cat.ravel() * n_chroma + chroma.ravel()
    return np.bincount(cells, minlength=(n_dirs + 1) * n_chroma).astype(np.int64)


def _som_train_np(weights, data, order, alphas, sigmas, grid_d2):
    """Online SOM pass; mutates weights. One entry of order/alphas/sigmas per update."""
    for t in range(order.shape[0]):
        x = data[order[t]]
        d2 = ((weights - x) ** 2).sum(axis=1)
        best = int(np.argmin(d2))  # argmin takes the lowest index on ties
        h = alphas[t] * np.exp(-grid_d2[best] / (2.0 * sigmas[t] * sigmas[t]))
        weights += h[:, None] * (x - weights)


if HAVE_NUMBA:

    @njit(cache=True)
    def _edge_color_hist_nb(gx, gy, a, b, threshold, n_dirs, bins_per_axis):
        n_chroma = bins_per_axis * bins_per_axis
        hist = np.zeros((n_dirs + 1) * n_chroma, dtype=np.int64)
        cell = 256.0 / bins_per_axis
        sector = math.pi / n_dirs
        rows, cols = gx.shape
        for r in range(rows):
            for c in range(cols):
                vx = gx[r, c]
                vy = gy[r, c]
                if math.sqrt(vx * vx + vy * vy) < threshold:
                    cat = n_dirs
                else:
                    theta = math.atan2(vy, vx) % math.pi
                    if theta >= math.pi:
                        theta = 0.0
                    cat = int(theta / sector)
                    if cat > n_dirs - 1:
                        cat = n_dirs - 1
                av = a[r, c]
                if av < -128.0:
                    av = -128.0
                elif av > 128.0:
                    av = 128.0
                bv = b[r, c]
                if bv < -128.0:
                    bv = -128.0
                elif bv > 128.0:
                    bv = 128.0
                ia = int((av + 128.0) / cell)
                if ia > bins_per_axis - 1:
                    ia = bins_per_axis - 1
                ib = int((bv + 128.0) / cell)
                if ib > bins_per_axis - 1:
                    ib = bins_per_axis - 1
                hist[cat * n_chroma + ia * bins_per_axis + ib] += 1
        return hist

    @njit(cache=True)
    def _som_train_nb(weights, data, order, alphas, sigmas, grid_d2):
        n_nodes, dim = weights.shape
        for t in range(order.shape[0]):
            x = data[order[t]]
            best = 0
            best_d2 = 1e300
            for i in range(n_nodes):
                d2 = 0.0
                for j in range(dim):
                    diff = weights[i, j] - x[j]
                    d2 += diff * diff
                if d2 < best_d2:
                    best_d2 = d2
                    best = i
            denom = 2.0 * sigmas[t] * sigmas[t]
            for i in range(n_nodes):
                h = alphas[t] * math.exp(-grid_d2[best, i] / denom)
                for j in range(dim):
                    weights[i, j] += h * (x[j] - weights[i, j])


def edge_color_hist(gx, gy, a, b, threshold, n_dirs, bins_per_axis):
    """Raw joint (edge category, chroma bin) counts, length (n_dirs+1)*B^2."""
    if USE_NUMBA:
        return _edge_color_hist_nb(
            np.ascontiguousarray(gx, dtype=np.float64),
            np.ascontiguousarray(gy, dtype=np.float64),
            np.ascontiguousarray(a, dtype=np.float64),
            np.ascontiguousarray(b, dtype=np.float64),
            float(threshold),
            int(n_dirs),
            int(bins_per_axis),
        )
    return _edge_color_hist_np(gx, gy, a, b, float(threshold), int(n_dirs), int(bins_per_axis))


def som_train_inplace(weights, data, order, alphas, sigmas, grid_d2):
    if USE_NUMBA:
        _som_train_nb(weights, data, order, alphas, sigmas, grid_d2)
    else:
        _som_train_np(weights, data, order, alphas, sigmas, grid_d2)
