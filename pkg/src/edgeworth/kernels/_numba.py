"""Loop kernels compiled with numba.

Same signatures and results as :mod:`edgeworth.kernels._numpy`; pairwise
terms are formed once per unordered pair and scattered with opposite signs.
"""

import math

import numpy as np
from numba import njit

from ._tableau import A21, A31, A32, A41, A42, A43, A51, A52, A53, A54
from ._tableau import A61, A62, A63, A64, A65, B1, B3, B4, B5, B6
from ._tableau import E1, E3, E4, E5, E6, E7

_jit = njit(cache=True, nogil=True)


@_jit
def utilities(X, A):
    m, n = X.shape
    U = np.ones(n)
    for i in range(n):
        for k in range(m):
            U[i] *= X[k, i] ** A[k, i]
    return U


@_jit
def gradients(X, A):
    m, n = X.shape
    U = utilities(X, A)
    M = np.empty((m, n))
    for i in range(n):
        for k in range(m):
            M[k, i] = A[k, i] * U[i] / X[k, i]
    return M


@_jit
def _angle(M, i, j, ni, nj):
    chord = 0.0
    for k in range(M.shape[0]):
        d = M[k, i] / ni - M[k, j] / nj
        chord += d * d
    return 2.0 * math.asin(min(0.5 * math.sqrt(chord), 1.0))


@_jit
def pair_angles(M):
    m, n = M.shape
    norms = np.sqrt(np.sum(M * M, axis=0))
    out = np.zeros((n, n))
    for i in range(n):
        for j in range(i + 1, n):
            a = _angle(M, i, j, norms[i], norms[j])
            out[i, j] = a
            out[j, i] = a
    return out


@_jit
def trade_field(M, W, angle_tol):
    m, n = M.shape
    norms = np.sqrt(np.sum(M * M, axis=0))
    F = np.zeros((m, n))
    for i in range(n):
        for j in range(i + 1, n):
            w = W[i, j]
            if w == 0.0:
                continue
            if _angle(M, i, j, norms[i], norms[j]) < angle_tol:
                continue
            dot = 0.0
            ss = 0.0
            for k in range(m):
                s = M[k, i] + M[k, j]
                dot += M[k, i] * s
                ss += s * s
            c = dot / ss
            for k in range(m):
                g = M[k, i] - c * (M[k, i] + M[k, j])
                F[k, i] += w * g
                F[k, j] -= w * g
    return F


@_jit
def rhs(X, A, W, angle_tol, speed, floor):
    if X.min() <= floor:
        return np.zeros_like(X), False
    return speed * trade_field(gradients(X, A), W, angle_tol), True


@_jit
def dp_trial(X, k1, A, W, h, rtol, angle_tol, speed, floor):
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
    ratio = 0.0
    m, n = X.shape
    for i in range(n):
        for k in range(m):
            e = h * (
                E1 * k1[k, i] + E3 * k3[k, i] + E4 * k4[k, i]
                + E5 * k5[k, i] + E6 * k6[k, i] + E7 * k7[k, i]
            )
            s = rtol * max(abs(X[k, i]), abs(y5[k, i]))
            r = abs(e) / s
            if r > ratio:
                ratio = r
    return y5, k7, ratio, True
