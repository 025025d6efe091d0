"""Adaptive integration of the network trade dynamics to a Pareto-optimal rest point.

The scheme is the Dormand-Prince 5(4) embedded pair with a proportional
step controller. Trial steps whose stages leave the interior are halved;
accepted steps never decrease total or individual utility beyond rounding.
"""

from __future__ import annotations

import dataclasses
import enum
import logging
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .dynamics import ANGLE_TOL, InvariantReport, invariant_report
from .economy import Allocation, UtilityParams, gradient_dispersion
from .errors import BoundaryApproachError, BoundaryError, DimensionError, IntegrationError
from .networks import NetworkSpec

log = logging.getLogger(__name__)

# Controller constants for a 5(4) pair.
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_MAX_REJECTIONS = 200
# Utility drops larger than this (relative to max(1, value)) reject the step.
_MONOTONE_SLACK = 1e-12


class Status(str, enum.Enum):
    CONVERGED = "Converged"
    ALREADY_OPTIMAL = "AlreadyOptimal"
    MAX_STEPS = "MaxStepsReached"
    BOUNDARY = "BoundaryApproach"

    def __str__(self):
        return self.value

    @property
    def success(self):
        return self in (Status.CONVERGED, Status.ALREADY_OPTIMAL)


@dataclass(frozen=True)
class IntegratorConfig:
    initial_step: float = 1e-2
    relative_error_target: float = 1e-10
    stop_field_norm: float = 1e-8
    stop_mrs_dispersion: float = 1e-6
    max_time: float = 1e6
    max_steps: int = 2_000_000
    boundary_floor: float = 1e-9
    time_scale: float = 1.0
    stride: int = 1
    max_halvings: int = 40

    def __post_init__(self):
        for name in (
            "initial_step",
            "relative_error_target",
            "stop_field_norm",
            "stop_mrs_dispersion",
            "max_time",
            "boundary_floor",
            "time_scale",
        ):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValueError(f"{name} must be finite and > 0, got {value!r}")
        if self.max_steps < 1:
            raise ValueError(f"max_steps must be >= 1, got {self.max_steps}")
        if self.stride < 1:
            raise ValueError(f"stride must be >= 1, got {self.stride}")
        if self.max_halvings < 0:
            raise ValueError(f"max_halvings must be >= 0, got {self.max_halvings}")

    def replace(self, **changes):
        return dataclasses.replace(self, **changes)


@dataclass(frozen=True, eq=False)
class StepResult:
    state: Allocation
    step_size: float  # accepted
    next_step: float  # controller proposal
    error_ratio: float
    halvings: int
    rejections: int
    slope: np.ndarray = field(repr=False)  # field at the new state, reused by the next step


@dataclass(eq=False)
class Trajectory:
    times: np.ndarray  # (k,)
    states: np.ndarray  # (k, m, n)
    utilities: np.ndarray  # (k, n)
    potentials: np.ndarray  # (k,)
    diagnostics: list  # InvariantReport per sample
    # Extremes over every accepted step, not just the stored samples.
    worst_potential_drop: float = 0.0
    worst_utility_drop: float = 0.0
    max_total_drift: float = 0.0
    steps: int = 0

    def __len__(self):
        return self.times.size

    def allocation(self, k, totals=None):
        return Allocation(self.states[k], totals)


@dataclass(eq=False)
class EquilibriumRecord:
    network: NetworkSpec
    initial: Allocation
    final: Allocation
    final_utilities: np.ndarray
    utility_gains: np.ndarray
    mrs_residual: float
    field_norm: float
    steps: int
    elapsed_time: float
    status: Status


def _field_norm(slope, speed):
    return float(np.linalg.norm(slope)) / speed


def _check_inputs(state, params, network, config):
    X = np.ascontiguousarray(state.entries, dtype=float)
    if X.shape != params.exponents.shape:
        raise DimensionError(f"allocation {X.shape} does not match exponents {params.exponents.shape}")
    if network.weights.shape != (X.shape[1], X.shape[1]):
        raise DimensionError(f"network has {network.n} agents, allocation has {X.shape[1]}")
    if X.min() <= config.boundary_floor:
        raise BoundaryError(
            f"initial holding {X.min()!r} not above boundary floor {config.boundary_floor!r}"
        )
    return X, np.ascontiguousarray(params.exponents), np.ascontiguousarray(network.weights)


def _slope(X, A, W, config):
    k, ok = kernels.rhs(X, A, W, ANGLE_TOL, config.time_scale, config.boundary_floor)
    if not ok:
        raise BoundaryError("state at or below boundary floor")
    return k


def _advance(X, k1, h, A, W, U_prev, config):
    """Take one accepted step from ``X``; returns ``(y, k_new, U_new, h, h_next, ratio, halvings, rejections)``."""
    halvings = 0
    rejections = 0
    pot_prev = U_prev.sum()
    while True:
        y, k_new, ratio, ok = kernels.dp_trial(
            X, k1, A, W, h,
            config.relative_error_target, ANGLE_TOL, config.time_scale, config.boundary_floor,
        )
        if not ok:
            halvings += 1
            if halvings > config.max_halvings:
                raise BoundaryApproachError(
                    f"state kept leaving the interior after {config.max_halvings} halvings"
                )
            h *= 0.5
            continue
        if ratio > 1.0 or not np.isfinite(ratio):
            rejections += 1
            factor = _MIN_FACTOR if not np.isfinite(ratio) else max(_MIN_FACTOR, _SAFETY * ratio**-0.2)
            h *= factor
        else:
            U = kernels.utilities(y, A)
            pot = U.sum()
            drop_ok = pot >= pot_prev - _MONOTONE_SLACK * max(1.0, abs(pot_prev)) and np.all(
                U >= U_prev - _MONOTONE_SLACK * np.maximum(1.0, np.abs(U_prev))
            )
            if drop_ok:
                grow = _MAX_FACTOR if ratio == 0.0 else min(_MAX_FACTOR, _SAFETY * ratio**-0.2)
                return y, k_new, U, h, h * grow, ratio, halvings, rejections
            rejections += 1
            h *= 0.5
        if rejections > _MAX_REJECTIONS or h <= 1e-300:
            raise IntegrationError(f"step-size control stalled (h={h!r}, rejections={rejections})")


def step(state, params, network, config=None, h=None, slope=None):
    """Advance ``state`` by one accepted adaptive step.

    ``h`` defaults to ``config.initial_step``; ``slope`` may carry the field at
    ``state`` from a previous step to save one evaluation.
    """
    config = config or IntegratorConfig()
    X, A, W = _check_inputs(state, params, network, config)
    k1 = _slope(X, A, W, config) if slope is None else slope
    U = kernels.utilities(X, A)
    y, k_new, _, h_used, h_next, ratio, halvings, rejections = _advance(
        X, k1, config.initial_step if h is None else h, A, W, U, config
    )
    return StepResult(state.with_entries(y), h_used, h_next, ratio, halvings, rejections, k_new)


def _converged(X, slope, A, config):
    norm = _field_norm(slope, config.time_scale)
    if norm >= config.stop_field_norm:
        return False, norm, None
    mrs = gradient_dispersion(kernels.gradients(X, A))
    return mrs <= config.stop_mrs_dispersion, norm, mrs


def integrate(initial, params, network, config=None):
    """Integrate from ``initial`` on ``network`` until the field vanishes.

    Returns ``(Trajectory, EquilibriumRecord)``. Convergence requires both the
    field norm below ``stop_field_norm`` and the gradient dispersion below
    ``stop_mrs_dispersion``.
    """
    config = config or IntegratorConfig()
    if not isinstance(params, UtilityParams):
        raise TypeError("params must be UtilityParams")
    X, A, W = _check_inputs(initial, params, network, config)
    totals = np.asarray(initial.totals, dtype=float)
    speed = config.time_scale

    U0 = kernels.utilities(X, A)
    k = _slope(X, A, W, config)

    times, states, utils, pots, diags = [], [], [], [], []

    def record(t, Y, U, slope):
        times.append(t)
        states.append(Y.copy())
        utils.append(U.copy())
        pots.append(float(U.sum()))
        diags.append(invariant_report(kernels.gradients(Y, A), slope / speed))

    record(0.0, X, U0, k)
    done, norm, mrs = _converged(X, k, A, config)
    status = Status.ALREADY_OPTIMAL if done else None

    t = 0.0
    h = config.initial_step
    n_steps = 0
    U = U0
    worst_pot = 0.0
    worst_u = 0.0
    drift = 0.0
    last_recorded = 0

    while status is None:
        if n_steps >= config.max_steps or t >= config.max_time:
            status = Status.MAX_STEPS
            break
        try:
            y, k_new, U_new, h_used, h, _, _, _ = _advance(X, k, h, A, W, U, config)
        except BoundaryApproachError as exc:
            log.warning("boundary approach at t=%g: %s", t, exc)
            status = Status.BOUNDARY
            break
        t += h_used
        n_steps += 1
        worst_pot = min(worst_pot, float(U_new.sum() - U.sum()))
        worst_u = min(worst_u, float(np.min(U_new - U)))
        drift = max(drift, float(np.max(np.abs(y.sum(axis=1) - totals) / np.abs(totals))))
        X, k, U = y, k_new, U_new
        done, norm, mrs = _converged(X, k, A, config)
        if done:
            status = Status.CONVERGED
        if done or n_steps % config.stride == 0:
            record(t, X, U, k)
            last_recorded = n_steps

    if last_recorded != n_steps:
        record(t, X, U, k)
    if mrs is None:
        mrs = gradient_dispersion(kernels.gradients(X, A))
    if norm is None:
        norm = _field_norm(k, speed)

    trajectory = Trajectory(
        times=np.array(times),
        states=np.array(states),
        utilities=np.array(utils),
        potentials=np.array(pots),
        diagnostics=diags,
        worst_potential_drop=worst_pot,
        worst_utility_drop=worst_u,
        max_total_drift=drift,
        steps=n_steps,
    )
    final = Allocation(X, totals)
    record_ = EquilibriumRecord(
        network=network,
        initial=initial,
        final=final,
        final_utilities=U.copy(),
        utility_gains=U - U0,
        mrs_residual=float(mrs),
        field_norm=float(norm),
        steps=n_steps,
        elapsed_time=t,
        status=status,
    )
    return trajectory, record_


def integrate_to_equilibrium(scenario, config=None):
    """Run a scenario's initial allocation on its network to equilibrium."""
    return integrate(
        scenario.initial, scenario.params, scenario.network, config or scenario.config
    )


@dataclass(frozen=True)
class EqualGainsReport:
    max_deviation: float
    total_gain: float
    relative_deviation: float
    passed: bool


def equal_gains_check(trajectory, rtol=1e-6):
    """Two-agent fair paths move along the 45 degree line in utility space."""
    U = trajectory.utilities
    if U.ndim != 2 or U.shape[1] != 2:
        raise DimensionError(f"equal-gains check needs a 2-agent trajectory, got {U.shape[1]} agents")
    gains = U - U[0]
    deviation = float(np.max(np.abs(gains[:, 0] - gains[:, 1])))
    total = float(gains[-1].sum())
    if total <= 0.0:
        return EqualGainsReport(deviation, total, 0.0 if deviation == 0.0 else np.inf, deviation == 0.0)
    rel = deviation / total
    return EqualGainsReport(deviation, total, rel, rel <= rtol)


def trajectory_report(trajectory, atol_pot=1e-10, atol_u=1e-8, rtol_total=1e-9):
    """Conservation and monotonicity over a whole run."""
    return {
        "max_total_drift": trajectory.max_total_drift,
        "worst_potential_drop": trajectory.worst_potential_drop,
        "worst_utility_drop": trajectory.worst_utility_drop,
        "conservation_ok": trajectory.max_total_drift <= rtol_total,
        "potential_monotone": trajectory.worst_potential_drop >= -atol_pot,
        "utilities_monotone": trajectory.worst_utility_drop >= -atol_u,
        "axioms_ok": all(isinstance(d, InvariantReport) and d.ok for d in trajectory.diagnostics),
    }
