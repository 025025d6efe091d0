"""Hot numeric kernels with two interchangeable backends.

The numba backend is used when numba imports cleanly and the environment
variable ``EDGEWORTH_DISABLE_JIT`` is unset or ``0``. Otherwise the pure
numpy backend is used. Both are always importable as ``numpy_backend`` and
(when available) ``numba_backend`` so they can be compared directly.
"""

import os

from . import _numpy as numpy_backend

try:
    from . import _numba as numba_backend
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba_backend = None

JIT_DISABLED = os.environ.get("EDGEWORTH_DISABLE_JIT", "0").strip().lower() not in ("", "0", "false", "no")

if numba_backend is None or JIT_DISABLED:
    active = numpy_backend
    BACKEND = "numpy"
else:
    active = numba_backend
    BACKEND = "numba"

utilities = active.utilities
gradients = active.gradients
pair_angles = active.pair_angles
trade_field = active.trade_field
rhs = active.rhs
dp_trial = active.dp_trial

__all__ = [
    "BACKEND",
    "active",
    "numpy_backend",
    "numba_backend",
    "utilities",
    "gradients",
    "pair_angles",
    "trade_field",
    "rhs",
    "dp_trial",
]
