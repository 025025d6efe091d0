"""Sweeps over the network simplex: the map from networks to equilibria."""

from __future__ import annotations

import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .integrate import integrate
from .networks import barycentric_color, simplex_grid, simplex_grid_indices, weights_from_probabilities

log = logging.getLogger(__name__)


@dataclass(eq=False)
class ManifoldDataset:
    resolution: int
    grid: np.ndarray  # (N, n) probabilities
    compositions: np.ndarray  # (N, n) integers summing to resolution
    records: list  # EquilibriumRecord per grid point
    colors: np.ndarray | None  # (N, 3) RGB, only for 3 agents
    summary: dict

    @property
    def utilities(self):
        return np.array([r.final_utilities for r in self.records])

    @property
    def gains(self):
        return np.array([r.utility_gains for r in self.records])

    @property
    def publishable(self):
        return all(r.status.success for r in self.records)


def default_workers():
    try:
        return max(1, len(os.sched_getaffinity(0)))
    except AttributeError:  # pragma: no cover - not on Linux
        return os.cpu_count() or 1


def _solve_point(args):
    scenario, p = args
    config = scenario.config.replace(stride=max(scenario.config.stride, 10**9))
    _, record = integrate(scenario.initial, scenario.params, weights_from_probabilities(p), config)
    return record


def solve_grid(scenario, grid, workers=None):
    """Integrate every probability vector in ``grid``; results are in grid order."""
    workers = default_workers() if workers is None else max(1, int(workers))
    jobs = [(scenario, p) for p in grid]
    if workers == 1 or len(jobs) < 2:
        return [_solve_point(job) for job in jobs]
    chunk = max(1, len(jobs) // (4 * workers))
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_solve_point, jobs, chunksize=chunk))


def adjacent_pairs(compositions):
    """Index pairs of grid points one lattice move apart (k and k + e_a - e_b)."""
    where = {tuple(k): i for i, k in enumerate(compositions)}
    n = compositions.shape[1]
    pairs = []
    for i, k in enumerate(compositions):
        for a in range(n):
            for b in range(n):
                if a == b or k[b] == 0:
                    continue
                nb = k.copy()
                nb[a] += 1
                nb[b] -= 1
                j = where.get(tuple(nb))
                if j is not None and j > i:
                    pairs.append((i, j))
    return pairs


def vertex_dominance(compositions, utilities, rtol=1e-12):
    """Per agent: is the agent's best equilibrium found at the agent's own star?

    Ties within ``rtol`` count for the vertex (two-agent grids are all one network).
    """
    resolution = int(compositions[0].sum())
    out = []
    for i in range(utilities.shape[1]):
        best = utilities[:, i].max()
        at_vertex = utilities[compositions[:, i] == resolution, i]
        out.append(bool(at_vertex.size and at_vertex[0] >= best - rtol * max(1.0, abs(best))))
    return out


def summarize(grid, compositions, records):
    U = np.array([r.final_utilities for r in records])
    n = grid.shape[1]
    statuses = [str(r.status) for r in records]
    argmax = [int(np.argmax(U[:, i])) for i in range(n)]
    dist = np.sqrt(((U[:, None, :] - U[None, :, :]) ** 2).sum(-1))
    np.fill_diagonal(dist, np.inf)
    pairs = adjacent_pairs(compositions)
    adjacent = max((float(np.linalg.norm(U[i] - U[j])) for i, j in pairs), default=0.0)
    summary = {
        "points": len(records),
        "agents": n,
        "utility_min": [float(v) for v in U.min(axis=0)],
        "utility_max": [float(v) for v in U.max(axis=0)],
        "argmax_index": argmax,
        "argmax_point": [[float(v) for v in grid[j]] for j in argmax],
        "vertex_dominance": vertex_dominance(compositions, U),
        "min_pairwise_distance": float(dist.min()) if len(records) > 1 else None,
        "max_adjacent_distance": adjacent,
        "status_counts": {s: statuses.count(s) for s in sorted(set(statuses))},
        "non_converged": [i for i, r in enumerate(records) if not r.status.success],
    }
    centre = np.flatnonzero(np.all(compositions == compositions[:, :1], axis=1))
    if centre.size:
        g = records[int(centre[0])].utility_gains
        total = float(g.sum())
        summary["barycentre_gain_shares"] = [float(v / total) if total > 0 else None for v in g]
    return summary


def run_sweep(scenario, resolution, workers=None):
    """Solve the scenario's economy on every network of the resolution grid."""
    grid = simplex_grid(scenario.n, resolution)
    compositions = simplex_grid_indices(scenario.n, resolution)
    records = solve_grid(scenario, grid, workers)
    colors = np.array([barycentric_color(p) for p in grid]) if scenario.n == 3 else None
    summary = summarize(grid, compositions, records)
    if summary["non_converged"]:
        log.warning("%d grid points did not converge", len(summary["non_converged"]))
    return ManifoldDataset(resolution, grid, compositions, records, colors, summary)


def refinement_table(scenario, resolutions, workers=None):
    """Max equilibrium-utility jump between adjacent grid points per resolution."""
    rows = []
    for r in resolutions:
        data = run_sweep(scenario, r, workers)
        rows.append((r, data.summary["max_adjacent_distance"], data))
    return rows


__all__ = [
    "ManifoldDataset",
    "adjacent_pairs",
    "refinement_table",
    "run_sweep",
    "solve_grid",
    "summarize",
    "vertex_dominance",
]
