"""Independent brute-force reference implementations used by the tests.

These deliberately avoid the vectorized code paths in the package: the
co-occurrence oracle is a literal bounds-checked double loop over every
pixel and offset, and the gradient oracle perturbs one parameter at a
time with central differences.
"""

import numpy as np


def brute_force_glcm(grid, offsets, n_levels):
    """Count co-occurrences pair by pair, both directions, then normalize."""
    grid = np.asarray(grid)
    h, w = grid.shape
    counts = np.zeros((n_levels, n_levels), dtype=np.int64)
    for dx, dy in offsets:
        for y in range(h):
            for x in range(w):
                xx, yy = x + dx, y + dy
                if 0 <= xx < w and 0 <= yy < h:
                    i, j = grid[y, x], grid[yy, xx]
                    counts[i, j] += 1
                    counts[j, i] += 1
    total = counts.sum()
    if total == 0:
        raise ValueError("no pixel pairs")
    return counts / float(total)


def central_difference_gradient(loss_fn, params, eps=1e-5):
    """Numerical gradient of ``loss_fn`` at ``params`` (flat array)."""
    params = np.asarray(params, dtype=np.float64)
    grad = np.zeros_like(params)
    for k in range(params.size):
        bumped = params.copy()
        bumped[k] += eps
        hi = loss_fn(bumped)
        bumped[k] -= 2 * eps
        lo = loss_fn(bumped)
        grad[k] = (hi - lo) / (2 * eps)
    return grad
