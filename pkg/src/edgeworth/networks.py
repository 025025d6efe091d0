"""Probability-induced trade networks and simplex grids.

Agent ``i`` is picked with probability ``p_i`` and then meets one of the
other ``n - 1`` agents uniformly, so the pair ``(i, j)`` trades with weight
``(p_i + p_j) / (n - 1)``. Vertices of the simplex give stars, the
barycentre the uniformly weighted complete graph.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionError, ProbabilityError, RangeError

PROB_ATOL = 1e-12


def validate_probabilities(p, atol=PROB_ATOL):
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size < 2:
        raise ProbabilityError(f"need a probability vector with at least 2 entries, got shape {p.shape}")
    if not np.all(np.isfinite(p)) or np.any(p < 0):
        raise ProbabilityError(f"probabilities must be finite and nonnegative: {p}")
    if abs(p.sum() - 1.0) > atol:
        raise ProbabilityError(f"probabilities sum to {p.sum()!r}, expected 1")
    return p


@dataclass(frozen=True, eq=False)
class NetworkSpec:
    probabilities: np.ndarray
    weights: np.ndarray

    @property
    def n(self):
        return self.probabilities.size


def weights_from_probabilities(p):
    """The weighted network induced by picking probabilities ``p``."""
    p = validate_probabilities(p)
    n = p.size
    W = (p[:, None] + p[None, :]) / (n - 1)
    np.fill_diagonal(W, 0.0)
    p = p.copy()
    p.setflags(write=False)
    W.setflags(write=False)
    return NetworkSpec(p, W)


def star(center, n):
    """Probability vector putting all mass on ``center``."""
    if not 0 <= center < n:
        raise IndexError(f"center {center} out of range for {n} agents")
    p = np.zeros(n)
    p[center] = 1.0
    return p


def _compositions(total, parts):
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def simplex_grid(n, resolution):
    """All points ``k / resolution`` of the simplex, lexicographic in ``k``.

    Returns an array of shape ``(C(resolution + n - 1, n - 1), n)``.
    """
    if resolution < 1:
        raise RangeError(f"resolution must be >= 1, got {resolution}")
    if n < 1:
        raise RangeError(f"n must be >= 1, got {n}")
    ks = np.array(list(_compositions(resolution, n)), dtype=float)
    return ks / resolution


def simplex_grid_indices(n, resolution):
    """Integer compositions matching :func:`simplex_grid` row for row."""
    if resolution < 1:
        raise RangeError(f"resolution must be >= 1, got {resolution}")
    return np.array(list(_compositions(resolution, n)), dtype=int)


def barycentric_color(p):
    """RGB for a 3-agent probability vector: agent 1 red, agent 2 blue, agent 3 green."""
    p = np.asarray(p, dtype=float)
    if p.shape != (3,):
        raise DimensionError(f"barycentric colours need exactly 3 probabilities, got shape {p.shape}")
    p = validate_probabilities(p)
    red, blue, green = (int(round(255 * v)) for v in p)
    return red, green, blue
