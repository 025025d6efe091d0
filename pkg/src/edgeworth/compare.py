"""Fair trading versus the Walrasian benchmark in a 2x2 economy."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .economy import mrs_dispersion, utilities
from .errors import DimensionError
from .integrate import equal_gains_check, integrate
from .networks import weights_from_probabilities
from .oracles import walras_two_agent_cd


@dataclass(eq=False)
class Comparison:
    walras: object  # WalrasResult
    walras_utilities: np.ndarray
    walras_path: np.ndarray  # (k, m, n) straight segment in goods space
    walras_path_utilities: np.ndarray  # (k, n)
    trajectory: object
    record: object
    report: dict


def _slope_stats(U):
    d = np.diff(U - U[0], axis=0)
    # tiny late-stage steps carry only round-off
    moving = np.abs(d[:, 0]) > 1e-9 * max(1.0, float(np.abs(U).max()))
    if not moving.any():
        return {"mean": None, "max_abs_deviation_from_1": None}
    slopes = d[moving, 1] / d[moving, 0]
    return {"mean": float(slopes.mean()), "max_abs_deviation_from_1": float(np.max(np.abs(slopes - 1.0)))}


def walras_compare(scenario, samples=101):
    if (scenario.m, scenario.n) != (2, 2):
        raise DimensionError(f"Walras comparison needs 2 goods and 2 agents, got m={scenario.m}, n={scenario.n}")
    walras = walras_two_agent_cd(scenario.initial, scenario.params)
    path = walras.path(samples)
    A = scenario.params.exponents
    path_u = np.prod(path ** A[None], axis=1)
    trajectory, record = integrate(
        scenario.initial, scenario.params, weights_from_probabilities([0.5, 0.5]), scenario.config
    )
    w_alloc = walras.allocation
    w_util = utilities(w_alloc, scenario.params)
    walras_trade = float(np.linalg.norm(w_alloc.entries - scenario.initial.entries))
    gains = equal_gains_check(trajectory)
    report = {
        "fair_status": str(record.status),
        "fair_final": record.final.entries.T,
        "fair_utilities": record.final_utilities,
        "fair_gains": record.utility_gains,
        "fair_steps": record.steps,
        "fair_utility_slope": _slope_stats(trajectory.utilities),
        "fair_equal_gains": {
            "max_deviation": gains.max_deviation,
            "relative_deviation": gains.relative_deviation,
            "passed": gains.passed,
        },
        "walras_price_ratio": walras.price_ratio,
        "walras_final": w_alloc.entries.T,
        "walras_utilities": w_util,
        "walras_gains": w_util - utilities(scenario.initial, scenario.params),
        "walras_mrs_residual": mrs_dispersion(w_alloc, scenario.params),
        "walras_utility_slope": _slope_stats(path_u),
        "goods_distance": float(np.linalg.norm(record.final.entries - w_alloc.entries)),
        "utility_distance": float(np.linalg.norm(record.final_utilities - w_util)),
        "fair_trades": record.steps > 0,
        "walras_trades": walras_trade > 1e-12 * float(np.abs(scenario.initial.entries).max()),
    }
    return Comparison(walras, w_util, path, path_u, trajectory, record, report)
