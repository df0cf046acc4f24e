"""Exact maximum-weight bipartite assignment (O(n^3) Hungarian method).

Potentials-based shortest-augmenting-path formulation with 1-indexed
bookkeeping arrays.  Rectangular inputs are padded to square with
zero-weight dummy rows/columns, which is exact whenever real weights are
nonnegative (the cluster-similarity use case).
"""

from __future__ import annotations

import numpy as np

INF = float("inf")


def _min_assignment_square(cost: np.ndarray) -> list[int]:
    """Column -> row assignment minimizing total cost on a square matrix."""
    n = cost.shape[0]
    u = [0.0] * (n + 1)
    v = [0.0] * (n + 1)
    p = [0] * (n + 1)  # p[j] = row matched to column j (1-indexed, 0 = none)
    way = [0] * (n + 1)
    for i in range(1, n + 1):
        p[0] = i
        j0 = 0
        minv = [INF] * (n + 1)
        used = [False] * (n + 1)
        while True:
            used[j0] = True
            i0 = p[j0]
            delta = INF
            j1 = 0
            for j in range(1, n + 1):
                if used[j]:
                    continue
                cur = cost[i0 - 1, j - 1] - u[i0] - v[j]
                if cur < minv[j]:
                    minv[j] = cur
                    way[j] = j0
                if minv[j] < delta:
                    delta = minv[j]
                    j1 = j
            for j in range(n + 1):
                if used[j]:
                    u[p[j]] += delta
                    v[j] -= delta
                else:
                    minv[j] -= delta
            j0 = j1
            if p[j0] == 0:
                break
        while j0:
            j1 = way[j0]
            p[j0] = p[j1]
            j0 = j1
    return p


def max_assignment(weights: np.ndarray) -> tuple[float, list[tuple[int, int]]]:
    """Maximum-total-weight one-to-one assignment.

    Returns ``(total, pairs)`` where pairs are (row, column) indices into
    the original rectangular matrix; dummy pad assignments are dropped.
    Weights must be finite and nonnegative.
    """
    w = np.asarray(weights, dtype=np.float64)
    if w.ndim != 2:
        raise ValueError(f"expected a 2-d weight matrix, got shape {w.shape}")
    rows, cols = w.shape
    if rows == 0 or cols == 0:
        return 0.0, []
    if not np.all(np.isfinite(w)) or np.any(w < 0):
        raise ValueError("weights must be finite and nonnegative")
    n = max(rows, cols)
    padded = np.zeros((n, n), dtype=np.float64)
    padded[:rows, :cols] = w
    p = _min_assignment_square(-padded)
    pairs = sorted(
        (p[j] - 1, j - 1)
        for j in range(1, n + 1)
        if p[j] - 1 < rows and j - 1 < cols
    )
    total = float(sum(w[i, j] for i, j in pairs))
    return total, pairs
