"""Spin-1/2 in a torus-shaped magnetic field: eigenstates, Berry phase, adiabatic evolution.

The field traced by ``(theta, psi)`` is the torus embedding with radii
``(alpha, beta)``; the spin couples as ``H = -mu B . sigma`` in units with
``hbar = 1`` unless told otherwise. We follow the ground state.

Eigenvectors from ``eigh`` carry an arbitrary phase. We fix it pointwise by
making one chosen spinor component (the *anchor*) real and positive. The
anchor is picked once per path, as the component of largest modulus at the
start. Because ``|B_perp| >= beta - alpha > 0`` the field direction never
reaches either pole of the Bloch sphere, so neither component ever vanishes
and the anchored gauge is smooth and single-valued on the whole torus.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Callable, NamedTuple

import numpy as np

from .geometry import TorusShape, embed
from .numerics import periodic_trapezoid, wrap_angle
from .transport import ClosedPath

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)

MIN_OVERLAP = 0.99
MIN_ANCHOR = 1e-8
ADIABATIC_RESIDUAL = 1e-2


class GaugeTrackingError(RuntimeError):
    """Eigenstates sampled too coarsely to follow a smooth gauge."""


class AdiabaticityWarning(UserWarning):
    pass


@dataclass(frozen=True)
class FieldParams:
    alpha: float
    beta: float
    mu: float = 1.0
    hbar: float = 1.0

    def __post_init__(self):
        if not self.beta > self.alpha > 0:
            raise ValueError(f"need beta > alpha > 0, got alpha={self.alpha}, beta={self.beta}")
        if not self.mu > 0:
            raise ValueError(f"mu must be positive, got {self.mu}")
        if not self.hbar > 0:
            raise ValueError(f"hbar must be positive, got {self.hbar}")


@dataclass(frozen=True)
class DriveSchedule:
    """Uniform-speed traversal ``t -> path(t / total_time)``."""

    path: ClosedPath
    total_time: float
    steps: int = 16384

    def __post_init__(self):
        if not self.total_time > 0:
            raise ValueError("total_time must be positive")
        if self.steps < 1:
            raise ValueError("steps must be positive")


@dataclass(frozen=True)
class PhaseReport:
    total_phase: float
    dynamical_phase: float
    geometric_phase: float
    residual_nonadiabaticity: float
    max_norm_error: float

    @property
    def adiabatic(self) -> bool:
        return self.residual_nonadiabaticity <= ADIABATIC_RESIDUAL


class BerryPhase(NamedTuple):
    raw: float
    mod: float


class ConnectionValue(NamedTuple):
    value: np.ndarray
    imag_residual: np.ndarray


def b_field(params: FieldParams, theta, psi) -> np.ndarray:
    return embed(TorusShape(params.alpha, params.beta), theta, psi)


def hamiltonian(params: FieldParams, theta, psi) -> np.ndarray:
    b = b_field(params, theta, psi)
    h = b[..., 0, None, None] * SIGMA_X + b[..., 1, None, None] * SIGMA_Y + b[..., 2, None, None] * SIGMA_Z
    return -params.mu * h


def spectral_gap(params: FieldParams, theta, psi):
    return 2.0 * params.mu * np.linalg.norm(b_field(params, theta, psi), axis=-1)


def _anchor(vecs: np.ndarray, anchor: int | None) -> np.ndarray:
    """Phase-fix ``(..., 2)`` spinors so component ``anchor`` is real positive."""
    if anchor is None:
        anchor = np.argmax(np.abs(vecs), axis=-1)
        comp = np.take_along_axis(vecs, anchor[..., None], axis=-1)[..., 0]
    else:
        comp = vecs[..., anchor]
    mag = np.abs(comp)
    if np.any(mag < MIN_ANCHOR):
        raise GaugeTrackingError("anchor component vanishes; gauge is singular here")
    return vecs * (np.conj(comp) / mag)[..., None]


def _eigh(params: FieldParams, theta, psi):
    vals, vecs = np.linalg.eigh(hamiltonian(params, theta, psi))
    # columns are eigenvectors; move the eigen index in front of the component index
    return vals, np.swapaxes(vecs, -1, -2)


def ground_states(params: FieldParams, theta, psi, anchor: int | None = None):
    """Ground energies and anchored ground spinors, vectorised over the angles."""
    vals, vecs = _eigh(params, theta, psi)
    return vals[..., 0], _anchor(vecs[..., 0, :], anchor)


def eigenstates(params: FieldParams, theta: float, psi: float, anchor: int | None = None):
    """``((E_minus, ground), (E_plus, excited))`` at one point.

    ``anchor`` applies to the ground state; the excited state is anchored on
    its own largest component.
    """
    vals, vecs = _eigh(params, theta, psi)
    ground = _anchor(vecs[0], anchor)
    excited = _anchor(vecs[1], None)
    return (float(vals[0]), ground), (float(vals[1]), excited)


def path_anchor(params: FieldParams, path: ClosedPath) -> int:
    _, vecs = _eigh(params, path.theta(0.0), path.psi(0.0))
    return int(np.argmax(np.abs(vecs[0])))


def _states_on_path(params, path, t, anchor, gauge_twist):
    _, states = ground_states(params, path.theta(t), path.psi(t), anchor)
    if gauge_twist is not None:
        states = states * np.exp(1j * np.asarray(gauge_twist(t)))[..., None]
    return states


def _check_overlaps(a: np.ndarray, b: np.ndarray):
    ov = np.abs(np.sum(np.conj(a) * b, axis=-1))
    worst = float(np.min(ov)) if ov.size else 1.0
    if worst < MIN_OVERLAP:
        raise GaugeTrackingError(f"consecutive eigenstate overlap {worst:.4f} < {MIN_OVERLAP}; refine the sampling")


def berry_connection_along(
    params: FieldParams,
    path: ClosedPath,
    t,
    h: float = 1e-5,
    anchor: int | None = None,
    gauge_twist: Callable | None = None,
) -> ConnectionValue:
    """``i <n(t) | dn/dt>`` on the ground state by centred differences in ``t``.

    ``gauge_twist`` optionally re-phases the states by ``exp(i chi(t))`` before
    differentiating. The value is real up to ``O(h^2)``; the discarded imaginary
    part is returned as a diagnostic.
    """
    if anchor is None:
        anchor = path_anchor(params, path)
    t = np.asarray(t, dtype=float)
    n0 = _states_on_path(params, path, t, anchor, gauge_twist)
    n_fwd = _states_on_path(params, path, t + h, anchor, gauge_twist)
    n_bwd = _states_on_path(params, path, t - h, anchor, gauge_twist)
    _check_overlaps(n0, n_fwd)
    _check_overlaps(n_bwd, n0)
    a = 1j * np.sum(np.conj(n0) * (n_fwd - n_bwd), axis=-1) / (2.0 * h)
    return ConnectionValue(a.real, a.imag)


def berry_phase_loop(
    params: FieldParams,
    path: ClosedPath,
    quad_steps: int = 1024,
    h: float = 1e-5,
    anchor: int | None = None,
    gauge_twist: Callable | None = None,
) -> BerryPhase:
    """Ground-state Berry phase as the loop integral of the connection."""
    if quad_steps < 256:
        raise ValueError(f"quad_steps must be >= 256, got {quad_steps}")
    if anchor is None:
        anchor = path_anchor(params, path)
    t = np.arange(quad_steps + 1) / quad_steps
    states = _states_on_path(params, path, t, anchor, gauge_twist)
    _check_overlaps(states[:-1], states[1:])
    raw = periodic_trapezoid(
        lambda s: berry_connection_along(params, path, s, h, anchor, gauge_twist).value, quad_steps
    )
    return BerryPhase(raw, wrap_angle(raw))


def _propagator(params: FieldParams, b: np.ndarray, dt: float) -> np.ndarray:
    # exp(-i H dt / hbar) for H = -mu |B| (b_hat . sigma), in closed form
    mag = np.linalg.norm(b, axis=-1)
    unit = b / mag[..., None]
    phi = params.mu * mag * dt / params.hbar
    n_sigma = unit[..., 0, None, None] * SIGMA_X + unit[..., 1, None, None] * SIGMA_Y + unit[..., 2, None, None] * SIGMA_Z
    return np.cos(phi)[..., None, None] * np.eye(2) + 1j * np.sin(phi)[..., None, None] * n_sigma


def adiabatic_evolve(params: FieldParams, schedule: DriveSchedule):
    """Evolve the initial ground state through one period of the drive.

    Returns the final spinor and a ``PhaseReport``. Each step applies the exact
    propagator of the Hamiltonian frozen at the step midpoint, so the state
    norm is conserved to rounding.
    """
    if schedule.steps < 1024:
        raise ValueError(f"schedule.steps must be >= 1024, got {schedule.steps}")
    path, T, n = schedule.path, schedule.total_time, schedule.steps
    dt = T / n
    anchor = path_anchor(params, path)
    s_mid = (np.arange(n) + 0.5) / n
    props = _propagator(params, b_field(params, path.theta(s_mid), path.psi(s_mid)), dt)

    s_grid = np.arange(n + 1) / n
    energies, _ = ground_states(params, path.theta(s_grid), path.psi(s_grid), anchor)
    dynamical = -float(np.sum(0.5 * (energies[1:] + energies[:-1])) * dt) / params.hbar

    _, start = ground_states(params, path.theta(0.0), path.psi(0.0), anchor)
    _, end = ground_states(params, path.theta(1.0), path.psi(1.0), anchor)
    psi = start.astype(complex)
    max_norm_error = 0.0
    for u in props:
        psi = u @ psi
        max_norm_error = max(max_norm_error, abs(float(np.vdot(psi, psi).real) - 1.0))

    overlap = np.vdot(end, psi)
    total = float(np.angle(overlap))
    residual = float(min(max(1.0 - abs(overlap) ** 2, 0.0), 1.0))
    report = PhaseReport(total, dynamical, wrap_angle(total - dynamical), residual, max_norm_error)
    if not report.adiabatic:
        warnings.warn(
            f"residual non-adiabaticity {residual:.3e} exceeds {ADIABATIC_RESIDUAL}; increase total_time",
            AdiabaticityWarning,
            stacklevel=2,
        )
    return psi, report


def _spherical_excess(c, a, b):
    # signed area of the geodesic triangle (c, a, b) on the unit sphere
    num = np.sum(c * np.cross(a, b), axis=-1)
    den = 1.0 + np.sum(c * a, axis=-1) + np.sum(a * b, axis=-1) + np.sum(b * c, axis=-1)
    return 2.0 * np.arctan2(num, den)


def solid_angle_oracle(params: FieldParams, path: ClosedPath, samples: int = 4096) -> float:
    """Signed solid angle swept by the field direction around the loop.

    Sums the areas of the triangle fan from the loop's mean direction. When the
    mean nearly vanishes (e.g. a great circle) the fan apex falls back to the
    loop's oriented area vector. Defined modulo ``4 pi``.
    """
    if samples < 1024:
        raise ValueError(f"samples must be >= 1024, got {samples}")
    t = np.arange(samples) / samples
    b = b_field(params, path.theta(t), path.psi(t))
    n = b / np.linalg.norm(b, axis=-1, keepdims=True)
    nxt = np.roll(n, -1, axis=0)
    apex = n.mean(axis=0)
    if np.linalg.norm(apex) < 1e-6:
        apex = np.cross(n, nxt).sum(axis=0)
        if np.linalg.norm(apex) < 1e-12:
            return 0.0
    apex = apex / np.linalg.norm(apex)
    return float(np.sum(_spherical_excess(apex, n, nxt)))


def expected_berry_from_solid_angle(omega: float) -> float:
    """Ground-state Berry phase ``-omega/2`` reduced to ``[0, 2pi)``."""
    return wrap_angle(-0.5 * omega)

