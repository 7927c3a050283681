"""Torus embedding, orthonormal frames, connection and curvature forms.

Everything here is closed form. Angles may be scalars or broadcastable numpy
arrays; vector-valued results carry the Cartesian components on the last axis.
The ``*_fd`` functions are finite-difference oracles kept separate from the
closed forms they check.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .numerics import TWO_PI, wrap_angle

SQRT2 = np.sqrt(2.0)
FD_STEP = 1e-5


@dataclass(frozen=True)
class TorusShape:
    """Tube radius ``a`` and centre-line radius ``b`` of a ring torus."""

    a: float
    b: float

    def __post_init__(self):
        if not (np.isfinite(self.a) and np.isfinite(self.b)):
            raise ValueError("torus radii must be finite")
        if not self.b > self.a > 0:
            raise ValueError(f"need b > a > 0, got a={self.a}, b={self.b}")


@dataclass(frozen=True)
class ParamPoint:
    """A point ``(theta, psi)`` of the torus chart, stored in ``[0, 2pi)``."""

    theta: float
    psi: float

    def __post_init__(self):
        object.__setattr__(self, "theta", wrap_angle(float(self.theta)))
        object.__setattr__(self, "psi", wrap_angle(float(self.psi)))

    def __iter__(self):
        yield self.theta
        yield self.psi


class Frame(NamedTuple):
    e_theta: np.ndarray
    e_psi: np.ndarray
    e_perp: np.ndarray
    h_theta: np.ndarray
    h_psi: np.ndarray


class ComplexFrame(NamedTuple):
    e_plus: np.ndarray
    e_minus: np.ndarray


class OneFormSample(NamedTuple):
    """Coefficients of ``a_theta dtheta + a_psi dpsi``."""

    a_theta: np.ndarray
    a_psi: np.ndarray


class TwoFormSample(NamedTuple):
    """Coefficient of ``dtheta ^ dpsi``."""

    f_theta_psi: np.ndarray


def _stack(*components):
    return np.stack(np.broadcast_arrays(*components), axis=-1)


def embed(shape: TorusShape, theta, psi) -> np.ndarray:
    r = shape.b + shape.a * np.cos(psi)
    return _stack(r * np.cos(theta), r * np.sin(theta), shape.a * np.sin(psi))


def frame(shape: TorusShape, theta, psi) -> Frame:
    """Unit tangents along the coordinate lines, outward normal and scale factors."""
    theta = np.asarray(theta, dtype=float)
    psi = np.asarray(psi, dtype=float)
    ct, st = np.cos(theta), np.sin(theta)
    cp, sp = np.cos(psi), np.sin(psi)
    zero = np.zeros(np.broadcast(theta, psi).shape)
    e_theta = _stack(-st + zero, ct + zero, zero)
    e_psi = _stack(-sp * ct, -sp * st, cp + zero)
    e_perp = np.cross(e_theta, e_psi)
    h_theta = shape.b + shape.a * cp + zero
    h_psi = shape.a + zero
    return Frame(e_theta, e_psi, e_perp, h_theta, h_psi)


def complex_frame(theta, psi) -> ComplexFrame:
    # the orthonormal frame does not depend on the radii
    f = frame(TorusShape(1.0, 2.0), theta, psi)
    e_plus = (f.e_theta + 1j * f.e_psi) / SQRT2
    return ComplexFrame(e_plus, np.conj(e_plus))


def connection(theta, psi) -> OneFormSample:
    """The frame connection ``i e+^* . de+ = sin(psi) dtheta``."""
    psi = np.asarray(psi, dtype=float)
    zero = np.zeros(np.broadcast(np.asarray(theta), psi).shape)
    return OneFormSample(np.sin(psi) + zero, zero)


def curvature(theta, psi) -> TwoFormSample:
    """``F = dA = -cos(psi) dtheta ^ dpsi``."""
    psi = np.asarray(psi, dtype=float)
    zero = np.zeros(np.broadcast(np.asarray(theta), psi).shape)
    return TwoFormSample(-np.cos(psi) + zero)


def vector_potential(shape: TorusShape, theta, psi) -> np.ndarray:
    """Connection as a tangent vector field: ``sin(psi)/h_theta e_theta``."""
    f = frame(shape, theta, psi)
    return (np.sin(psi) / f.h_theta)[..., None] * f.e_theta


def curvature_vector(shape: TorusShape, theta, psi) -> np.ndarray:
    """Curvature as a normal vector field: ``-cos(psi)/(h_theta h_psi) e_perp``."""
    f = frame(shape, theta, psi)
    return (-np.cos(psi) / (f.h_theta * f.h_psi))[..., None] * f.e_perp


def gaussian_curvature(shape: TorusShape, theta, psi):
    psi = np.asarray(psi, dtype=float)
    zero = np.zeros(np.broadcast(np.asarray(theta), psi).shape)
    return np.cos(psi) / (shape.a * (shape.b + shape.a * np.cos(psi))) + zero


def area_elements(shape: TorusShape, theta, psi):
    """Coefficients of ``dtheta dpsi`` for the torus area and its Gauss-map image.

    Their ratio is the Gaussian curvature.
    """
    psi = np.asarray(psi, dtype=float)
    zero = np.zeros(np.broadcast(np.asarray(theta), psi).shape)
    cp = np.cos(psi)
    return shape.a * (shape.b + shape.a * cp) + zero, cp + zero


@dataclass(frozen=True)
class GaugeField:
    """A scalar gauge function with its analytic partial derivatives.

    Each callable maps ``(theta, psi)`` arrays to arrays. ``winding_theta`` and
    ``winding_psi`` record how much ``value`` grows, in units of ``2pi``, per
    turn of each angle; both are zero for a single-valued function.
    """

    value: Callable
    d_theta: Callable
    d_psi: Callable
    winding_theta: int = 0
    winding_psi: int = 0

    @classmethod
    def constant(cls, c: float = 0.0) -> "GaugeField":
        z = lambda th, ps: np.zeros(np.broadcast(np.asarray(th), np.asarray(ps)).shape)
        return cls(lambda th, ps: c + z(th, ps), z, z)

    @classmethod
    def theta(cls) -> "GaugeField":
        """``chi = theta``: multivalued, one unit of winding along theta."""
        z = lambda th, ps: np.zeros(np.broadcast(np.asarray(th), np.asarray(ps)).shape)
        return cls(
            lambda th, ps: np.asarray(th, dtype=float) + z(th, ps),
            lambda th, ps: 1.0 + z(th, ps),
            z,
            winding_theta=1,
        )

    @classmethod
    def fourier(cls, terms) -> "GaugeField":
        """Single-valued ``sum c cos(m theta + n psi + phase)`` over ``(c, m, n, phase)``."""
        terms = tuple((float(c), int(m), int(n), float(ph)) for c, m, n, ph in terms)

        def value(th, ps):
            th, ps = np.broadcast_arrays(np.asarray(th, float), np.asarray(ps, float))
            return sum((c * np.cos(m * th + n * ps + ph) for c, m, n, ph in terms), np.zeros(th.shape))

        def d_theta(th, ps):
            th, ps = np.broadcast_arrays(np.asarray(th, float), np.asarray(ps, float))
            return sum((-c * m * np.sin(m * th + n * ps + ph) for c, m, n, ph in terms), np.zeros(th.shape))

        def d_psi(th, ps):
            th, ps = np.broadcast_arrays(np.asarray(th, float), np.asarray(ps, float))
            return sum((-c * n * np.sin(m * th + n * ps + ph) for c, m, n, ph in terms), np.zeros(th.shape))

        return cls(value, d_theta, d_psi)


def random_gauge(rng: np.random.Generator, n_terms: int = 3, max_freq: int = 2) -> GaugeField:
    terms = []
    for _ in range(n_terms):
        m, n = 0, 0
        while m == 0 and n == 0:
            m, n = rng.integers(-max_freq, max_freq + 1, size=2)
        terms.append((rng.uniform(-1.0, 1.0), m, n, rng.uniform(0.0, TWO_PI)))
    return GaugeField.fourier(terms)


def gauge_transform_connection(theta, psi, chi: GaugeField) -> OneFormSample:
    """Connection after ``e+ -> exp(-i chi) e+``, i.e. ``A + d chi``."""
    a = connection(theta, psi)
    return OneFormSample(a.a_theta + chi.d_theta(theta, psi), a.a_psi + chi.d_psi(theta, psi))


def gauge_rotate_frame(shape: TorusShape, theta, psi, chi):
    """Rotate ``(e_theta, e_psi)`` counterclockwise by ``chi`` about ``e_perp``.

    Equivalent to ``e+ -> exp(-i chi) e+``.
    """
    f = frame(shape, theta, psi)
    c = np.cos(chi)[..., None] if np.ndim(chi) else np.cos(chi)
    s = np.sin(chi)[..., None] if np.ndim(chi) else np.sin(chi)
    return c * f.e_theta + s * f.e_psi, -s * f.e_theta + c * f.e_psi


# --- finite-difference oracles -------------------------------------------------


def connection_fd(theta, psi, h: float = FD_STEP, e_plus: Callable | None = None) -> OneFormSample:
    """``i <e+, d e+>`` with centred differences of the complex frame.

    ``e_plus`` may be any complex unit tangent field ``(theta, psi) -> (..., 3)``;
    the default is the untwisted frame.
    """
    if e_plus is None:
        e_plus = lambda th, ps: complex_frame(th, ps).e_plus
    theta = np.asarray(theta, dtype=float)
    psi = np.asarray(psi, dtype=float)
    e0 = e_plus(theta, psi)
    d_theta = (e_plus(theta + h, psi) - e_plus(theta - h, psi)) / (2 * h)
    d_psi = (e_plus(theta, psi + h) - e_plus(theta, psi - h)) / (2 * h)
    a_theta = 1j * np.sum(np.conj(e0) * d_theta, axis=-1)
    a_psi = 1j * np.sum(np.conj(e0) * d_psi, axis=-1)
    return OneFormSample(a_theta.real, a_psi.real)


def exterior_derivative_fd(one_form: Callable, theta, psi, h: float = FD_STEP) -> TwoFormSample:
    """``d(a_theta dtheta + a_psi dpsi)`` by centred differences.

    ``one_form`` maps ``(theta, psi)`` to an object with ``a_theta``/``a_psi``.
    """
    theta = np.asarray(theta, dtype=float)
    psi = np.asarray(psi, dtype=float)
    da_psi = (one_form(theta + h, psi).a_psi - one_form(theta - h, psi).a_psi) / (2 * h)
    da_theta = (one_form(theta, psi + h).a_theta - one_form(theta, psi - h).a_theta) / (2 * h)
    return TwoFormSample(da_psi - da_theta)


def embed_partials_fd(shape: TorusShape, theta, psi, h: float = FD_STEP):
    """Centred differences of the embedding along theta and psi."""
    d_theta = (embed(shape, theta + h, psi) - embed(shape, theta - h, psi)) / (2 * h)
    d_psi = (embed(shape, theta, psi + h) - embed(shape, theta, psi - h)) / (2 * h)
    return d_theta, d_psi
