"""Vectorised numpy kernels.

Array convention throughout: allocations, exponents and gradients are
``(m, n)`` with goods on rows and agents on columns; weights are ``(n, n)``.
"""

import numpy as np

from ._tableau import A21, A31, A32, A41, A42, A43, A51, A52, A53, A54
from ._tableau import A61, A62, A63, A64, A65, B1, B3, B4, B5, B6
from ._tableau import E1, E3, E4, E5, E6, E7


def utilities(X, A):
    return np.prod(X ** A, axis=0)


def gradients(X, A):
    return A * utilities(X, A) / X


def pair_angles(M):
    """Angles between every pair of columns of ``M``, shape ``(n, n)``."""
    unit = M / np.sqrt(np.sum(M * M, axis=0))
    chord = np.sqrt(np.sum((unit[:, :, None] - unit[:, None, :]) ** 2, axis=0))
    return 2.0 * np.arcsin(np.minimum(0.5 * chord, 1.0))


def trade_field(M, W, angle_tol):
    S = M[:, :, None] + M[:, None, :]
    coef = np.einsum("ki,kij->ij", M, S) / np.einsum("kij,kij->ij", S, S)
    G = M[:, :, None] - coef[None, :, :] * S
    G[:, pair_angles(M) < angle_tol] = 0.0
    # f'(mu_j, mu_i) = -f'(mu_i, mu_j) analytically; enforce it bitwise
    G = 0.5 * (G - G.transpose(0, 2, 1))
    return np.einsum("ij,kij->ki", W, G)


def rhs(X, A, W, angle_tol, speed, floor):
    if X.min() <= floor:
        return np.zeros_like(X), False
    return speed * trade_field(gradients(X, A), W, angle_tol), True


def dp_trial(X, k1, A, W, h, rtol, angle_tol, speed, floor):
    """One Dormand-Prince 5(4) trial step.

    Returns ``(y5, k7, err_ratio, ok)``; ``ok`` is False when any stage state
    falls to the boundary floor, in which case the other outputs are junk.
    """
    k2, ok = rhs(X + h * (A21 * k1), A, W, angle_tol, speed, floor)
    if not ok:
        return X, k1, np.inf, False
    k3, ok = rhs(X + h * (A31 * k1 + A32 * k2), A, W, angle_tol, speed, floor)
    if not ok:
        return X, k1, np.inf, False
    k4, ok = rhs(X + h * (A41 * k1 + A42 * k2 + A43 * k3), A, W, angle_tol, speed, floor)
    if not ok:
        return X, k1, np.inf, False
    k5, ok = rhs(
        X + h * (A51 * k1 + A52 * k2 + A53 * k3 + A54 * k4), A, W, angle_tol, speed, floor
    )
    if not ok:
        return X, k1, np.inf, False
    k6, ok = rhs(
        X + h * (A61 * k1 + A62 * k2 + A63 * k3 + A64 * k4 + A65 * k5),
        A, W, angle_tol, speed, floor,
    )
    if not ok:
        return X, k1, np.inf, False
    y5 = X + h * (B1 * k1 + B3 * k3 + B4 * k4 + B5 * k5 + B6 * k6)
    k7, ok = rhs(y5, A, W, angle_tol, speed, floor)
    if not ok:
        return X, k1, np.inf, False
    err = h * (E1 * k1 + E3 * k3 + E4 * k4 + E5 * k5 + E6 * k6 + E7 * k7)
    scale = rtol * np.maximum(np.abs(X), np.abs(y5))
    return y5, k7, float(np.max(np.abs(err) / scale)), True
