"""Instantaneous fair-trade directions and the trading-axiom diagnostics.

A bilateral fair trade gives agent ``i`` the rejection of her gradient from
the sum of both gradients. That choice is orthogonal to the summed gradient,
so both parties gain marginal utility at the same rate. On a network each
agent's trade is the weighted sum of her bilateral trades.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import BoundaryError, DimensionError, NetworkError

ANGLE_TOL = 1e-8
NULLSPACE_RTOL = 1e-10


def _pair(mu_i, mu_j):
    a = np.asarray(mu_i, dtype=float)
    b = np.asarray(mu_j, dtype=float)
    if a.ndim != 1 or a.size == 0 or a.shape != b.shape:
        raise DimensionError(f"gradient vectors must be non-empty and equal length: {a.shape}, {b.shape}")
    return a, b


def gradient_angle(mu_i, mu_j):
    """Angle in radians between two gradient vectors, accurate near zero."""
    a, b = _pair(mu_i, mu_j)
    chord = np.linalg.norm(a / np.linalg.norm(a) - b / np.linalg.norm(b))
    return float(2.0 * np.arcsin(min(0.5 * chord, 1.0)))


def pairwise_fair_direction(mu_i, mu_j, angle_tol=ANGLE_TOL):
    """Agent ``i``'s trade when matched with ``j``.

    Returns the zero vector when the gradients are parallel to within
    ``angle_tol`` radians.
    """
    a, b = _pair(mu_i, mu_j)
    if gradient_angle(a, b) < angle_tol:
        return np.zeros_like(a)
    s = a + b
    return a - (a @ s) / (s @ s) * s


def pairwise_additive_inverse_check(mu_i, mu_j, atol=1e-12):
    """True when the two sides of a bilateral fair trade cancel exactly."""
    total = pairwise_fair_direction(mu_i, mu_j) + pairwise_fair_direction(mu_j, mu_i)
    return bool(np.all(np.abs(total) <= atol))


@dataclass(frozen=True, eq=False)
class TradeField:
    """Instantaneous trades, ``(m, n)``; column ``i`` is agent ``i``'s trade."""

    directions: np.ndarray

    @property
    def norm(self):
        return float(np.linalg.norm(self.directions))

    def agent(self, i):
        return self.directions[:, i]

    @property
    def zero_sum_residual(self):
        return float(np.max(np.abs(self.directions.sum(axis=1))))


def validate_weights(weights, n=None, atol=1e-12):
    W = np.asarray(weights, dtype=float)
    if W.ndim != 2 or W.shape[0] != W.shape[1]:
        raise NetworkError(f"weights must be square, got shape {W.shape}")
    if n is not None and W.shape[0] != n:
        raise DimensionError(f"weights are {W.shape[0]}x{W.shape[0]} but there are {n} agents")
    if np.any(W < 0):
        raise NetworkError("weights must be nonnegative")
    if np.any(np.abs(np.diag(W)) > atol):
        raise NetworkError("weights must have a zero diagonal")
    if np.any(np.abs(W - W.T) > atol):
        raise NetworkError("weights must be symmetric")
    return W


def network_trade_field(gradients, weights, angle_tol=ANGLE_TOL):
    """Weighted sum of bilateral fair trades for every agent."""
    M = np.asarray(gradients, dtype=float)
    if M.ndim != 2:
        raise DimensionError(f"gradients must be an (m, n) matrix, got shape {M.shape}")
    if np.any(M <= 0):
        raise BoundaryError("gradients must be strictly positive")
    W = validate_weights(weights, M.shape[1])
    return TradeField(kernels.trade_field(M, W, angle_tol))


@dataclass(frozen=True, eq=False)
class MultilateralSolution:
    nullspace_dimension: int
    basis: list  # each (n, m): row i is agent i's trade
    trade_exists: bool
    agent_spaces: list  # per agent, (m, d_i) basis of its pairwise-orthogonal subspace


def _nullspace(A, rtol=NULLSPACE_RTOL):
    rows, cols = A.shape
    if rows == 0:
        return np.eye(cols)
    _, s, vt = np.linalg.svd(A)
    cutoff = rtol * s[0] if s.size else 0.0
    rank = int(np.sum(s > cutoff))
    return vt[rank:].T


def multilateral_fair_solver(gradients, rtol=NULLSPACE_RTOL):
    """Joint fair trades for all agents at once, without a network.

    Solves ``(mu_i + mu_j) . f_i = 0`` for every ordered pair together with
    ``sum_i f_i = 0``. A nonzero solution exists generically only when the
    number of goods exceeds the number of agents (or with two agents).
    """
    M = np.asarray(gradients, dtype=float)
    if M.ndim != 2 or M.shape[0] < 2 or M.shape[1] < 2:
        raise DimensionError(f"need an (m>=2, n>=2) gradient matrix, got shape {M.shape}")
    if np.any(M <= 0):
        raise BoundaryError("gradients must be strictly positive")
    m, n = M.shape

    # unknown vector is (f_1, ..., f_n) stacked, f_i occupying columns i*m:(i+1)*m
    rows = []
    agent_spaces = []
    for i in range(n):
        sums = np.array([M[:, i] + M[:, j] for j in range(n) if j != i])
        agent_spaces.append(_nullspace(sums, rtol))
        for s in sums:
            row = np.zeros(n * m)
            row[i * m : (i + 1) * m] = s
            rows.append(row)
    for k in range(m):
        row = np.zeros(n * m)
        row[k::m] = 1.0
        rows.append(row)

    null = _nullspace(np.array(rows), rtol)
    basis = [null[:, c].reshape(n, m) for c in range(null.shape[1])]
    exists = any(np.linalg.norm(b) > 0 for b in basis)
    return MultilateralSolution(null.shape[1], basis, exists, agent_spaces)


@dataclass(frozen=True)
class InvariantReport:
    zero_sum_residual: float
    utility_rates: tuple  # mu_i . f_i per agent
    positive_gradient_ok: bool
    trade_required: bool  # some gradient pair is not parallel
    trade_ok: bool | None  # None when no trade is required

    @property
    def ok(self):
        return self.positive_gradient_ok and self.trade_ok is not False


def invariant_report(gradients, field, angle_tol=ANGLE_TOL, rate_tol=1e-12):
    """Check zero sum, positive gradient and trade on an instantaneous field."""
    M = np.asarray(gradients, dtype=float)
    F = field.directions if isinstance(field, TradeField) else np.asarray(field, dtype=float)
    if M.shape != F.shape:
        raise DimensionError(f"gradients {M.shape} and field {F.shape} differ in shape")
    rates = np.sum(M * F, axis=0)
    n = M.shape[1]
    required = bool(n > 1 and np.max(kernels.pair_angles(M)) > angle_tol)
    trade_ok = bool(np.any(F != 0.0)) if required else None
    return InvariantReport(
        zero_sum_residual=float(np.max(np.abs(F.sum(axis=1)))),
        utility_rates=tuple(float(r) for r in rates),
        positive_gradient_ok=bool(np.all(rates >= -rate_tol)),
        trade_required=required,
        trade_ok=trade_ok,
    )
