"""Independent references for the trade dynamics.

Closed forms for the two-agent, two-good Cobb-Douglas economy (Walrasian
equilibrium and contract curve) and a randomized search for Pareto
improvements around an allocation. None of these touch the integrator.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .economy import Allocation, UtilityParams
from .errors import DimensionError, RangeError


def _require_2x2(shape, what):
    if tuple(shape) != (2, 2):
        raise DimensionError(f"{what} must describe 2 goods and 2 agents, got shape {tuple(shape)}")


def cd_demands(endowments, params, prices):
    """Cobb-Douglas demands at an arbitrary price vector, ``(m, n)``."""
    E = np.asarray(endowments.entries if isinstance(endowments, Allocation) else endowments, dtype=float)
    prices = np.asarray(prices, dtype=float)
    wealth = prices @ E
    return params.exponents * wealth[None, :] / prices[:, None]


@dataclass(frozen=True, eq=False)
class WalrasResult:
    price_ratio: float  # price of good 1 in units of good 2
    allocation: Allocation
    path_endpoints: tuple  # (endowment, equilibrium) as (m, n) arrays

    def path(self, samples=50):
        """The straight segment in goods space, ``(samples, m, n)``."""
        s = np.linspace(0.0, 1.0, samples)[:, None, None]
        start, end = self.path_endpoints
        return start + s * (end - start)


def walras_two_agent_cd(endowments, params):
    """Competitive equilibrium of a 2x2 Cobb-Douglas exchange economy.

    With good 2 as numeraire, market clearing for good 1 gives
    ``p1 = sum_i a_i w_i2 / sum_i (1 - a_i) w_i1`` where ``a_i`` is agent
    ``i``'s exponent on good 1.
    """
    _require_2x2(endowments.entries.shape, "endowments")
    _require_2x2(params.exponents.shape, "params")
    E = endowments.entries
    if np.any(E <= 0):
        raise RangeError("endowments must be strictly positive")
    a = params.exponents[0]
    p1 = float(np.sum(a * E[1]) / np.sum((1.0 - a) * E[0]))
    X = cd_demands(E, params, (p1, 1.0))
    alloc = Allocation(X, endowments.totals)
    return WalrasResult(p1, alloc, (E.copy(), X))


def contract_curve_two_agent_cd(params, totals, share):
    """Point of the 2x2 contract curve where agent 1 holds ``share`` of good 1.

    Equal marginal rates of substitution fix agent 1's good-2 holding in
    closed form; with equal exponents the curve is the box diagonal.
    """
    _require_2x2(params.exponents.shape, "params")
    if not 0.0 < share < 1.0:
        raise RangeError(f"share must lie in (0, 1), got {share!r}")
    T1, T2 = (float(v) for v in totals)
    a1, a2 = params.exponents[0]
    x11 = share * T1
    x21 = T1 - x11
    c1 = a1 / ((1.0 - a1) * x11)
    c2 = a2 / ((1.0 - a2) * x21)
    x12 = c2 * T2 / (c1 + c2)
    return Allocation(np.array([[x11, x21], [x12, T2 - x12]]), (T1, T2))


@dataclass(frozen=True)
class ParetoSearchReport:
    improvement_found: bool
    samples: int
    feasible_samples: int
    best_min_gain: float  # largest worst-off utility change seen
    witness: np.ndarray | None  # perturbation achieving an improvement


def brute_force_pareto_check(allocation, params, radius, samples, seed, slack=1e-12, batch=4096):
    """Search random zero-sum perturbations for a weak Pareto improvement.

    Perturbations are drawn uniformly from the ball of Frobenius radius
    ``radius`` inside the zero-sum subspace. A perturbation improves when no
    agent loses more than ``slack`` and some agent gains more than ``slack``.
    Uses a counter-based generator so results do not depend on batching.
    """
    if not isinstance(params, UtilityParams):
        raise TypeError("params must be UtilityParams")
    X = allocation.entries
    m, n = X.shape
    A = params.exponents
    U0 = np.prod(X**A, axis=0)
    rng = np.random.Generator(np.random.Philox(seed))
    dim = (n - 1) * m

    found = False
    witness = None
    best = -np.inf
    feasible = 0
    drawn = 0
    while drawn < samples and radius > 0:
        size = min(batch, samples - drawn)
        drawn += size
        D = rng.standard_normal((size, m, n))
        D -= D.mean(axis=2, keepdims=True)
        D /= np.linalg.norm(D.reshape(size, -1), axis=1)[:, None, None]
        r = radius * rng.random(size) ** (1.0 / dim)
        Y = X[None] + r[:, None, None] * D
        ok = np.all(Y >= 0, axis=(1, 2))
        feasible += int(ok.sum())
        if not ok.any():
            continue
        Y = Y[ok]
        dU = np.prod(Y ** A[None], axis=1) - U0[None]
        worst = dU.min(axis=1)
        best = max(best, float(worst.max()))
        hits = (worst >= -slack) & (dU.max(axis=1) > slack)
        if hits.any():
            found = True
            witness = Y[np.argmax(hits)] - X
            break
    if radius <= 0:
        feasible = samples
    return ParetoSearchReport(found, samples, feasible, best if np.isfinite(best) else 0.0, witness)
