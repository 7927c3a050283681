"""Parallel transport of tangent vectors around closed loops on the torus.

A loop is a pair of callables ``t -> theta(t)``, ``t -> psi(t)`` on ``[0, 1]``
together with their analytic derivatives. The holonomy angle is the loop
integral of the frame connection, ``gamma = int sin(psi) dtheta``; a vector
carried once around the loop comes back rotated clockwise by ``gamma`` in the
``(e_theta, e_psi)`` frame.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .geometry import SQRT2, GaugeField
from .numerics import TWO_PI, periodic_trapezoid, rk4, wrap_angle

CLOSURE_TOL = 1e-9


class TangentVec(NamedTuple):
    v_theta: float
    v_psi: float

    @property
    def norm(self) -> float:
        return float(np.hypot(self.v_theta, self.v_psi))


class ComplexComp(NamedTuple):
    v_plus: complex
    v_minus: complex


@dataclass(frozen=True)
class HolonomyResult:
    gamma_raw: float
    gamma_mod: float
    rotation: np.ndarray


class OpenPathError(ValueError):
    """The path does not close up to whole turns of both angles."""


def _const(c):
    return lambda t: c + 0.0 * np.asarray(t, dtype=float)


@dataclass(frozen=True)
class ClosedPath:
    """A loop ``t in [0, 1] -> (theta(t), psi(t))``.

    The derivative callables must be exact; nothing here differentiates
    ``theta``/``psi`` numerically. All four callables are vectorised over ``t``.
    """

    theta: Callable
    psi: Callable
    dtheta: Callable
    dpsi: Callable
    winding_theta: int = 0
    winding_psi: int = 0

    def __post_init__(self):
        for name, fn, w in (("theta", self.theta, self.winding_theta), ("psi", self.psi, self.winding_psi)):
            gap = float(fn(1.0) - fn(0.0)) - TWO_PI * w
            if not abs(gap) <= CLOSURE_TOL * max(1.0, abs(TWO_PI * w)):
                raise OpenPathError(f"{name}(1) - {name}(0) differs from 2*pi*{w} by {gap:.3e}")

    def reversed(self) -> "ClosedPath":
        th, ps, dth, dps = self.theta, self.psi, self.dtheta, self.dpsi
        return ClosedPath(
            lambda t: th(1.0 - np.asarray(t, dtype=float)),
            lambda t: ps(1.0 - np.asarray(t, dtype=float)),
            lambda t: -dth(1.0 - np.asarray(t, dtype=float)),
            lambda t: -dps(1.0 - np.asarray(t, dtype=float)),
            -self.winding_theta,
            -self.winding_psi,
        )


def point_loop(theta0: float, psi0: float) -> ClosedPath:
    return ClosedPath(_const(theta0), _const(psi0), _const(0.0), _const(0.0))


def latitude_loop(psi0: float, turns: int = 1, theta0: float = 0.0) -> ClosedPath:
    """``psi`` held at ``psi0`` while ``theta`` makes ``turns`` full turns."""
    return ClosedPath(
        lambda t: theta0 + TWO_PI * turns * np.asarray(t, dtype=float),
        _const(psi0),
        _const(TWO_PI * turns),
        _const(0.0),
        winding_theta=turns,
    )


def fourier_loop(
    theta0: float,
    psi0: float,
    winding_theta: int,
    winding_psi: int,
    theta_terms=(),
    psi_terms=(),
) -> ClosedPath:
    """Linear winding plus a finite sine series ``sum amp sin(2 pi k t + phase)``.

    ``*_terms`` are sequences of ``(amp, k, phase)`` with integer ``k >= 1``.
    """

    def build(x0, w, terms):
        terms = tuple((float(a), int(k), float(ph)) for a, k, ph in terms)

        def f(t):
            t = np.asarray(t, dtype=float)
            out = x0 + TWO_PI * w * t
            for a, k, ph in terms:
                out = out + a * (np.sin(TWO_PI * k * t + ph) - np.sin(ph))
            return out

        def df(t):
            t = np.asarray(t, dtype=float)
            out = TWO_PI * w + 0.0 * t
            for a, k, ph in terms:
                out = out + a * TWO_PI * k * np.cos(TWO_PI * k * t + ph)
            return out

        return f, df

    th, dth = build(theta0, winding_theta, theta_terms)
    ps, dps = build(psi0, winding_psi, psi_terms)
    return ClosedPath(th, ps, dth, dps, winding_theta, winding_psi)


def random_loop(rng: np.random.Generator, n_terms: int = 2, amplitude: float = 0.4) -> ClosedPath:
    """A smooth random loop with small integer windings, for property sweeps."""
    wt = int(rng.integers(-1, 3))
    wp = int(rng.integers(-1, 2))

    def terms():
        return [(rng.uniform(-amplitude, amplitude), k, rng.uniform(0, TWO_PI)) for k in range(1, n_terms + 1)]

    return fourier_loop(rng.uniform(0, TWO_PI), rng.uniform(0, TWO_PI), wt, wp, terms(), terms())


def to_complex(v: TangentVec) -> ComplexComp:
    v_plus = complex(v.v_theta, -v.v_psi) / SQRT2
    return ComplexComp(v_plus, v_plus.conjugate())


def from_complex(c: ComplexComp) -> TangentVec:
    """Real components of ``v+ e+ + v- e-``; assumes ``v- = conj(v+)``."""
    return TangentVec(float(SQRT2 * c.v_plus.real), float(-SQRT2 * c.v_plus.imag))


def rotation_matrix(gamma: float) -> np.ndarray:
    c, s = np.cos(gamma), np.sin(gamma)
    return np.array([[c, s], [-s, c]])


def rotate_by_holonomy(gamma: float, v0: TangentVec) -> TangentVec:
    """Clockwise rotation by ``gamma`` in the ``(e_theta, e_psi)`` frame."""
    w = rotation_matrix(gamma) @ np.array([v0.v_theta, v0.v_psi])
    return TangentVec(float(w[0]), float(w[1]))


def _result(gamma: float) -> HolonomyResult:
    return HolonomyResult(gamma, wrap_angle(gamma), rotation_matrix(gamma))


def holonomy(path: ClosedPath, quad_steps: int = 1024) -> HolonomyResult:
    """Holonomy angle ``int_0^1 sin(psi(t)) theta'(t) dt`` by periodic trapezoid."""
    if quad_steps < 16:
        raise ValueError(f"quad_steps must be >= 16, got {quad_steps}")
    gamma = periodic_trapezoid(lambda t: np.sin(path.psi(t)) * path.dtheta(t), quad_steps)
    return _result(gamma)


def holonomy_after_gauge(path: ClosedPath, chi: GaugeField, quad_steps: int = 1024) -> HolonomyResult:
    """Loop integral of the gauge-transformed connection ``A + d chi``."""
    if quad_steps < 16:
        raise ValueError(f"quad_steps must be >= 16, got {quad_steps}")

    def integrand(t):
        th, ps = path.theta(t), path.psi(t)
        dth, dps = path.dtheta(t), path.dpsi(t)
        return np.sin(ps) * dth + chi.d_theta(th, ps) * dth + chi.d_psi(th, ps) * dps

    return _result(periodic_trapezoid(integrand, quad_steps))


def transport_plus(path: ClosedPath, v_plus0: complex, ode_steps: int = 4096) -> complex:
    """Integrate ``dv+/dt = i sin(psi) theta' v+`` once around the loop with RK4."""
    if ode_steps < 64:
        raise ValueError(f"ode_steps must be >= 64, got {ode_steps}")

    def rhs(t, y):
        return 1j * np.sin(path.psi(t)) * path.dtheta(t) * y

    return complex(rk4(rhs, v_plus0, 0.0, 1.0, ode_steps))


def parallel_transport(path: ClosedPath, v0: TangentVec, ode_steps: int = 4096) -> TangentVec:
    """Carry ``v0`` once around ``path`` and return its final frame components."""
    c = to_complex(v0)
    v_plus = transport_plus(path, c.v_plus, ode_steps)
    return from_complex(ComplexComp(v_plus, v_plus.conjugate()))
