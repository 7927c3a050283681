"""Small numerical kernels shared by the transport, topology and quantum modules."""

from __future__ import annotations

from typing import Callable

import numpy as np

TWO_PI = 2.0 * np.pi


def wrap_angle(x, period: float = TWO_PI):
    """Reduce angles to ``[0, period)``.

    ``np.mod`` can return ``period`` itself for tiny negative inputs; those are
    folded back to zero so the half-open interval is honoured.
    """
    r = np.mod(x, period)
    r = np.where(r >= period, 0.0, r)
    if np.ndim(r) == 0:
        return float(r)
    return r


def wrapped_difference(x, y, period: float = TWO_PI):
    """Signed distance ``x - y`` on the circle, in ``[-period/2, period/2)``."""
    return np.mod(np.asarray(x) - np.asarray(y) + 0.5 * period, period) - 0.5 * period


def periodic_trapezoid(f: Callable[[np.ndarray], np.ndarray], n: int) -> float:
    """Composite trapezoid rule for a 1-periodic integrand on ``[0, 1)``.

    On a periodic domain the end-point weights merge, so this is the plain mean
    of ``n`` equispaced samples. Spectrally accurate for smooth integrands.
    """
    if n < 1:
        raise ValueError("n must be positive")
    t = np.arange(n) / n
    return float(np.sum(f(t)) / n)


def rk4(
    f: Callable[[float, np.ndarray], np.ndarray],
    y0,
    t0: float,
    t1: float,
    steps: int,
) -> np.ndarray:
    """Classical fixed-step fourth-order Runge-Kutta from ``t0`` to ``t1``."""
    if steps < 1:
        raise ValueError("steps must be positive")
    y = np.array(y0, dtype=complex)
    h = (t1 - t0) / steps
    for k in range(steps):
        t = t0 + k * h
        k1 = f(t, y)
        k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
        k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
        k4 = f(t + h, y + h * k3)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
    return y
