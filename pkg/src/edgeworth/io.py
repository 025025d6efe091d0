"""Flat-file output: CSV tables and JSON summaries with round-trip floats."""

from __future__ import annotations

import csv
import json
from pathlib import Path

import numpy as np


def fmt(value):
    """Shortest decimal that round-trips to the same double."""
    if isinstance(value, (bool, np.bool_)):
        return str(bool(value)).lower()
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if np.isfinite(v) else str(v)
    return obj


def write_json(path, payload):
    Path(path).write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=False) + "\n")


def write_csv(path, header, rows):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow([fmt(v) for v in row])


def state_columns(m, n):
    """``x_<agent>_<good>`` in agent-major order (column-major over the m x n matrix)."""
    return [f"x_{i + 1}_{k + 1}" for i in range(n) for k in range(m)]


def write_trajectory(path, trajectory):
    k, m, n = trajectory.states.shape
    header = ["t", *state_columns(m, n), *[f"U_{i + 1}" for i in range(n)], "potential"]
    rows = (
        [t, *trajectory.states[s].T.ravel(), *trajectory.utilities[s], trajectory.potentials[s]]
        for s, t in enumerate(trajectory.times)
    )
    write_csv(path, header, rows)


def record_payload(record):
    return {
        "status": str(record.status),
        "probabilities": record.network.probabilities,
        "initial": record.initial.entries.T,
        "final": record.final.entries.T,
        "totals": record.final.totals,
        "final_utilities": record.final_utilities,
        "utility_gains": record.utility_gains,
        "mrs_residual": record.mrs_residual,
        "field_norm": record.field_norm,
        "steps": record.steps,
        "elapsed_time": record.elapsed_time,
    }


def write_manifold(path, dataset):
    n = dataset.grid.shape[1]
    header = ["index", *[f"p_{i + 1}" for i in range(n)]]
    if dataset.colors is not None:
        header += ["r", "g", "b"]
    header += [f"u_star_{i + 1}" for i in range(n)]
    header += [f"gain_{i + 1}" for i in range(n)]
    header += ["mrs_residual", "steps", "status"]
    rows = []
    for idx, (p, rec) in enumerate(zip(dataset.grid, dataset.records)):
        row = [idx, *p]
        if dataset.colors is not None:
            row += [int(c) for c in dataset.colors[idx]]
        row += [*rec.final_utilities, *rec.utility_gains, rec.mrs_residual, rec.steps, str(rec.status)]
        rows.append(row)
    write_csv(path, header, rows)
