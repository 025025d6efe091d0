"""Pure-exchange economy: allocations, Cobb-Douglas utilities and Pareto residuals.

Allocations are ``(m, n)`` arrays: one row per good, one column per agent.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .errors import BoundaryError, DimensionError

BOUNDARY_FLOOR = 1e-9
CONSERVATION_RTOL = 1e-9


def _as_vector(values, name):
    arr = np.asarray(values, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"{name} must be a non-empty vector, got shape {arr.shape}")
    return arr


def _check_exponents(alpha):
    if np.any(alpha <= 0.0) or np.any(alpha >= 1.0):
        raise ValueError(f"Cobb-Douglas exponents must lie in (0, 1), got {alpha}")
    if abs(alpha.sum() - 1.0) > 1e-12:
        raise ValueError(f"exponents must sum to 1, got sum {alpha.sum()!r}")


@dataclass(frozen=True, eq=False)
class UtilityParams:
    """Per-agent Cobb-Douglas exponents, stored ``(m, n)`` like allocations."""

    exponents: np.ndarray

    def __post_init__(self):
        A = np.array(self.exponents, dtype=float)
        if A.ndim != 2 or A.shape[0] < 2 or A.shape[1] < 1:
            raise DimensionError(f"exponents must be (m>=2, n) array, got shape {A.shape}")
        for i in range(A.shape[1]):
            _check_exponents(A[:, i])
        A.setflags(write=False)
        object.__setattr__(self, "exponents", A)

    @classmethod
    def from_agents(cls, per_agent):
        """Build from one exponent vector per agent."""
        return cls(np.asarray(per_agent, dtype=float).T)

    @classmethod
    def two_goods(cls, alphas):
        """The 2-good case ``U_i = x_1**a_i * x_2**(1 - a_i)``."""
        a = np.asarray(alphas, dtype=float)
        return cls(np.vstack([a, 1.0 - a]))

    @property
    def m(self):
        return self.exponents.shape[0]

    @property
    def n(self):
        return self.exponents.shape[1]

    def agent(self, i):
        return self.exponents[:, i]


@dataclass(frozen=True, eq=False)
class Allocation:
    """Holdings of ``m`` goods by ``n`` agents plus the conserved per-good totals.

    ``totals`` defaults to the row sums of ``entries``. Construction does not
    enforce feasibility; use :func:`feasibility_check` for that.
    """

    entries: np.ndarray
    totals: np.ndarray = field(default=None)

    def __post_init__(self):
        X = np.array(self.entries, dtype=float)
        if X.ndim != 2 or X.shape[0] < 1 or X.shape[1] < 1:
            raise DimensionError(f"allocation must be an (m, n) array, got shape {X.shape}")
        w = X.sum(axis=1) if self.totals is None else np.array(self.totals, dtype=float)
        if w.shape != (X.shape[0],):
            raise DimensionError(f"totals must have length {X.shape[0]}, got shape {w.shape}")
        X.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "entries", X)
        object.__setattr__(self, "totals", w)

    @classmethod
    def from_agents(cls, bundles, totals=None):
        """Build from one goods bundle per agent, e.g. ``[(3, 1), (1, 3)]``."""
        return cls(np.asarray(bundles, dtype=float).T, totals)

    @property
    def m(self):
        return self.entries.shape[0]

    @property
    def n(self):
        return self.entries.shape[1]

    def bundle(self, i):
        return self.entries[:, i]

    def with_entries(self, entries):
        """Same totals, new holdings."""
        return Allocation(entries, self.totals)


def _check_pair(X, params):
    if X.shape != params.exponents.shape:
        raise DimensionError(
            f"allocation shape {X.shape} does not match exponents {params.exponents.shape}"
        )


def eval_utility(bundle, agent_exponents):
    """Cobb-Douglas utility of one bundle; zero on the boundary."""
    x = _as_vector(bundle, "bundle")
    alpha = _as_vector(agent_exponents, "exponents")
    if x.shape != alpha.shape:
        raise DimensionError(f"bundle length {x.size} != exponent length {alpha.size}")
    _check_exponents(alpha)
    if np.any(x < 0):
        raise BoundaryError(f"negative holdings {x}")
    return float(np.prod(x**alpha))


def eval_gradient(bundle, agent_exponents, floor=BOUNDARY_FLOOR):
    """Marginal utilities ``alpha_k * U(x) / x_k``.

    Raises BoundaryError when any holding is below ``floor``.
    """
    x = _as_vector(bundle, "bundle")
    alpha = _as_vector(agent_exponents, "exponents")
    if x.shape != alpha.shape:
        raise DimensionError(f"bundle length {x.size} != exponent length {alpha.size}")
    _check_exponents(alpha)
    if np.any(x < floor):
        raise BoundaryError(f"holding {x.min()!r} below boundary floor {floor!r}")
    return alpha * np.prod(x**alpha) / x


def utilities(allocation, params):
    """Utility of every agent, length ``n``."""
    X = allocation.entries
    _check_pair(X, params)
    if np.any(X < 0):
        raise BoundaryError("negative holdings in allocation")
    return kernels.utilities(X, params.exponents)


def gradient_matrix(allocation, params, floor=BOUNDARY_FLOOR):
    """``(m, n)`` matrix of marginal utilities, column ``i`` for agent ``i``."""
    X = allocation.entries
    _check_pair(X, params)
    if X.min() < floor:
        raise BoundaryError(f"holding {X.min()!r} below boundary floor {floor!r}")
    return kernels.gradients(X, params.exponents)


def gradient_dispersion(M):
    """Max over column pairs of ``1 - cos`` between gradient vectors.

    Computed as half the squared chord between unit vectors, which stays
    accurate for nearly parallel gradients.
    """
    M = np.asarray(M, dtype=float)
    unit = M / np.linalg.norm(M, axis=0)
    n = M.shape[1]
    worst = 0.0
    for i in range(n):
        d = unit[:, i + 1 :] - unit[:, i : i + 1]
        if d.size:
            worst = max(worst, 0.5 * float(np.max(np.sum(d * d, axis=0))))
    return worst


def mrs_dispersion(allocation, params):
    """Pareto residual: 0 exactly when all gradients are pairwise proportional."""
    return gradient_dispersion(gradient_matrix(allocation, params))


def potential(allocation, params):
    """Sum of all agents' utilities."""
    return float(np.sum(utilities(allocation, params)))


@dataclass(frozen=True)
class FeasibilityReport:
    feasible: bool
    negative_entries: list  # (good, agent, value)
    total_violations: list  # (good, relative residual)

    def __bool__(self):
        return self.feasible


def feasibility_check(allocation, rtol=CONSERVATION_RTOL):
    """Membership in the simplotope: nonnegative entries, per-good totals preserved."""
    X = allocation.entries
    negatives = [(int(k), int(i), float(X[k, i])) for k, i in zip(*np.nonzero(X < 0))]
    violations = []
    for k, (row_sum, total) in enumerate(zip(X.sum(axis=1), allocation.totals)):
        residual = abs(row_sum - total) / max(abs(total), np.finfo(float).tiny)
        if residual > rtol:
            violations.append((k, float(residual)))
    return FeasibilityReport(not negatives and not violations, negatives, violations)
