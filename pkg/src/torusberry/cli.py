"""Command-line front end: every computation as a deterministic batch run.

Examples::

    torusberry curvature --a 1 --b 2 --grid-n 8 --format csv
    torusberry gauss-bonnet --surface sphere --grid-n 256
    torusberry holonomy --psi0 0.5235987755982988
    torusberry berry --psi0 1.5707963267948966 --total-time 200

Exit codes: 0 success, 2 argument error, 3 numerical non-convergence.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import warnings
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from . import geometry, quantum, topology, transport
from .geometry import TorusShape
from .numerics import TWO_PI, wrapped_difference

EXIT_OK, EXIT_ARGS, EXIT_NUMERIC = 0, 2, 3


class ArgumentError(Exception):
    pass


class NumericalError(Exception):
    pass


@dataclass(frozen=True)
class RunConfig:
    command: str
    a: float = 1.0
    b: float = 2.0
    alpha: float = 1.0
    beta: float = 2.0
    mu: float = 1.0
    grid_n: int = 64
    ode_steps: int = 4096
    quad_steps: int = 1024
    total_time: float = 200.0
    evolve_steps: int = 20000
    psi0: float = 0.0
    surface: str = "torus"
    output_format: str = "json"
    seed: int = 0
    sweep: bool = False
    trials: int = 10
    v0_theta: float = 1.0
    v0_psi: float = 0.0

    def validate(self):
        for flag, value in (
            ("--grid-n", self.grid_n),
            ("--ode-steps", self.ode_steps),
            ("--quad-steps", self.quad_steps),
            ("--evolve-steps", self.evolve_steps),
            ("--trials", self.trials),
        ):
            if value <= 0:
                raise ArgumentError(f"{flag} must be positive (got {value})")
        if not self.total_time > 0:
            raise ArgumentError(f"--total-time must be positive (got {self.total_time})")
        if not np.isfinite(self.psi0):
            raise ArgumentError(f"--psi0-rad must be finite (got {self.psi0})")
        if self.command in ("curvature", "gauss-bonnet", "holonomy", "transport", "gauge-check", "compare"):
            try:
                TorusShape(self.a, self.b)
            except ValueError as exc:
                raise ArgumentError(f"--a/--b: {exc}") from None
        if self.command in ("berry", "compare"):
            try:
                quantum.FieldParams(self.alpha, self.beta, self.mu)
            except ValueError as exc:
                raise ArgumentError(f"--alpha/--beta/--mu: {exc}") from None
        if self.command == "transport" and self.ode_steps < 64:
            raise ArgumentError(f"--ode-steps must be >= 64 (got {self.ode_steps})")
        if self.command in ("holonomy", "transport", "gauge-check", "compare") and self.quad_steps < 16:
            raise ArgumentError(f"--quad-steps must be >= 16 (got {self.quad_steps})")
        if self.command in ("berry", "compare"):
            if self.quad_steps < 256:
                raise ArgumentError(f"--quad-steps must be >= 256 for the Berry phase (got {self.quad_steps})")
            if self.evolve_steps < 1024:
                raise ArgumentError(f"--evolve-steps must be >= 1024 (got {self.evolve_steps})")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ArgumentError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--a", type=float, default=1.0, help="torus tube radius")
    common.add_argument("--b", type=float, default=2.0, help="torus centre-line radius")
    common.add_argument("--alpha", type=float, default=1.0, help="field minor amplitude")
    common.add_argument("--beta", type=float, default=2.0, help="field major amplitude")
    common.add_argument("--mu", type=float, default=1.0, help="magnetic moment")
    common.add_argument("--grid-n", type=int, default=64)
    common.add_argument("--ode-steps", type=int, default=4096)
    common.add_argument("--quad-steps", type=int, default=1024)
    common.add_argument("--total-time", type=float, default=200.0)
    common.add_argument("--evolve-steps", type=int, default=20000, help="Schrodinger time steps")
    common.add_argument("--psi0-rad", "--psi0", dest="psi0", type=float, default=0.0, help="loop latitude, radians")
    common.add_argument("--surface", choices=("torus", "sphere"), default="torus")
    common.add_argument("--format", dest="output_format", choices=("csv", "json"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", type=Path, default=None)

    parser = _Parser(prog="torusberry", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("curvature", parents=[common], help="tabulate K, F and dsigma on a grid")
    sub.add_parser("gauss-bonnet", parents=[common], help="total curvature and genus")
    p = sub.add_parser("holonomy", parents=[common], help="holonomy of a latitude loop")
    p.add_argument("--sweep", action="store_true", help="sweep psi0 over [-pi/2, pi/2] in grid-n rows")
    p = sub.add_parser("transport", parents=[common], help="RK4 parallel transport round a latitude loop")
    p.add_argument("--v0-theta", type=float, default=1.0)
    p.add_argument("--v0-psi", type=float, default=0.0)
    p = sub.add_parser("gauge-check", parents=[common], help="gauge invariance over random gauges and loops")
    p.add_argument("--trials", type=int, default=10)
    sub.add_parser("berry", parents=[common], help="quantum Berry phase: line integral, evolution, solid angle")
    sub.add_parser("compare", parents=[common], help="surface holonomy next to the quantum Berry phase")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    fields = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(args).items() if k in fields})


# --- commands ------------------------------------------------------------------


def cmd_curvature(cfg: RunConfig) -> list[dict]:
    shape = TorusShape(cfg.a, cfg.b)
    step = TWO_PI / cfg.grid_n
    rows = []
    for i in range(cfg.grid_n):
        for j in range(cfg.grid_n):
            th, ps = i * step, j * step
            rows.append(
                {
                    "theta": th,
                    "psi": ps,
                    "K": float(geometry.gaussian_curvature(shape, th, ps)),
                    "F_coefficient": float(geometry.curvature(th, ps).f_theta_psi),
                    "dsigma": float(geometry.area_elements(shape, th, ps)[0]),
                }
            )
    return rows


def cmd_gauss_bonnet(cfg: RunConfig) -> dict:
    if cfg.grid_n < topology.MIN_GRID:
        raise NumericalError(f"--grid-n {cfg.grid_n} is below the minimum {topology.MIN_GRID}")
    if cfg.surface == "sphere":
        surface = topology.sphere_surface()
    else:
        surface = topology.torus_surface(TorusShape(cfg.a, cfg.b))
    report = topology.genus_of(surface, cfg.grid_n)
    if not report.converged:
        raise NumericalError(f"genus estimate {report.genus_estimate!r} is not within {topology.GENUS_TOL} of an integer")
    return asdict(report)


def _holonomy_record(res: transport.HolonomyResult) -> dict:
    r = res.rotation
    return {
        "gamma_raw": res.gamma_raw,
        "gamma_mod": res.gamma_mod,
        "r11": float(r[0, 0]),
        "r12": float(r[0, 1]),
        "r21": float(r[1, 0]),
        "r22": float(r[1, 1]),
    }


def cmd_holonomy(cfg: RunConfig):
    if cfg.sweep:
        rows = []
        for psi0 in np.linspace(-0.5 * np.pi, 0.5 * np.pi, cfg.grid_n):
            res = transport.holonomy(transport.latitude_loop(float(psi0)), cfg.quad_steps)
            rows.append({"psi0": float(psi0), "sin_psi0": float(np.sin(psi0)), **_holonomy_record(res)})
        return rows
    res = transport.holonomy(transport.latitude_loop(cfg.psi0), cfg.quad_steps)
    return {"psi0": cfg.psi0, **_holonomy_record(res)}


def cmd_transport(cfg: RunConfig) -> dict:
    path = transport.latitude_loop(cfg.psi0)
    v0 = transport.TangentVec(cfg.v0_theta, cfg.v0_psi)
    hol = transport.holonomy(path, cfg.quad_steps)
    v = transport.parallel_transport(path, v0, cfg.ode_steps)
    expected = transport.rotate_by_holonomy(hol.gamma_raw, v0)
    return {
        "psi0": cfg.psi0,
        "gamma_raw": hol.gamma_raw,
        "v0_theta": v0.v_theta,
        "v0_psi": v0.v_psi,
        "v_theta": v.v_theta,
        "v_psi": v.v_psi,
        "expected_theta": expected.v_theta,
        "expected_psi": expected.v_psi,
        "defect": float(np.hypot(v.v_theta - expected.v_theta, v.v_psi - expected.v_psi)),
        "norm_drift": abs(v.norm - v0.norm),
    }


def cmd_gauge_check(cfg: RunConfig) -> list[dict]:
    rng = np.random.default_rng(cfg.seed)
    grid = np.linspace(0.0, TWO_PI, 16, endpoint=False)
    th, ps = np.meshgrid(grid, grid, indexing="ij")
    rows = []
    for k in range(cfg.trials):
        chi = geometry.random_gauge(rng)
        path = transport.random_loop(rng)
        gauged = lambda t_, p_: geometry.gauge_transform_connection(t_, p_, chi)
        f_gauged = geometry.exterior_derivative_fd(gauged, th, ps, h=1e-4).f_theta_psi
        f_plain = geometry.curvature(th, ps).f_theta_psi
        h0 = transport.holonomy(path, cfg.quad_steps)
        h1 = transport.holonomy_after_gauge(path, chi, cfg.quad_steps)
        rows.append(
            {
                "trial": k,
                "gauge": "fourier",
                "curvature_deviation": float(np.max(np.abs(f_gauged - f_plain))),
                "holonomy_shift": h1.gamma_raw - h0.gamma_raw,
                "holonomy_mod_shift": float(wrapped_difference(h1.gamma_mod, h0.gamma_mod)),
            }
        )
    path = transport.latitude_loop(cfg.psi0)
    h0 = transport.holonomy(path, cfg.quad_steps)
    h1 = transport.holonomy_after_gauge(path, geometry.GaugeField.theta(), cfg.quad_steps)
    rows.append(
        {
            "trial": cfg.trials,
            "gauge": "theta-winding",
            "curvature_deviation": 0.0,
            "holonomy_shift": h1.gamma_raw - h0.gamma_raw,
            "holonomy_mod_shift": float(wrapped_difference(h1.gamma_mod, h0.gamma_mod)),
        }
    )
    return rows


def _berry_record(cfg: RunConfig) -> dict:
    params = quantum.FieldParams(cfg.alpha, cfg.beta, cfg.mu)
    path = transport.latitude_loop(cfg.psi0)
    try:
        line = quantum.berry_phase_loop(params, path, cfg.quad_steps)
        rng = np.random.default_rng(cfg.seed)
        amp, k, ph = rng.uniform(-1, 1), int(rng.integers(1, 4)), rng.uniform(0, TWO_PI)
        twisted = quantum.berry_phase_loop(
            params, path, cfg.quad_steps, gauge_twist=lambda t: amp * np.sin(TWO_PI * k * t + ph)
        )
    except quantum.GaugeTrackingError as exc:
        raise NumericalError(str(exc)) from None
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", quantum.AdiabaticityWarning)
        _, report = quantum.adiabatic_evolve(
            params, quantum.DriveSchedule(path, cfg.total_time, cfg.evolve_steps)
        )
    omega = quantum.solid_angle_oracle(params, path, max(4096, cfg.quad_steps))
    return {
        "psi0": cfg.psi0,
        "total_time": cfg.total_time,
        "line_integral_gamma": line.mod,
        "line_integral_gamma_raw": line.raw,
        "regauged_gamma": twisted.mod,
        "adiabatic_gamma": report.geometric_phase,
        "adiabatic_minus_line": float(wrapped_difference(report.geometric_phase, line.mod)),
        "total_phase": report.total_phase,
        "dynamical_phase": report.dynamical_phase,
        "residual_nonadiabaticity": report.residual_nonadiabaticity,
        "max_norm_error": report.max_norm_error,
        "nonadiabatic": not report.adiabatic,
        "solid_angle": omega,
        "solid_angle_gamma": quantum.expected_berry_from_solid_angle(omega),
    }


def cmd_berry(cfg: RunConfig) -> dict:
    return _berry_record(cfg)


def cmd_compare(cfg: RunConfig) -> dict:
    hol = transport.holonomy(transport.latitude_loop(cfg.psi0), cfg.quad_steps)
    berry = _berry_record(cfg)
    return {
        "psi0": cfg.psi0,
        "surface_holonomy_gamma_raw": hol.gamma_raw,
        "surface_holonomy_gamma_mod": hol.gamma_mod,
        "quantum_berry_gamma": berry["line_integral_gamma"],
        "quantum_adiabatic_gamma": berry["adiabatic_gamma"],
        "quantum_solid_angle": berry["solid_angle"],
        "note": "distinct quantities: frame holonomy on the (a, b) torus surface vs spin-1/2 Berry phase "
        "of the field direction on the Bloch sphere; no equality is implied",
    }


HANDLERS = {
    "curvature": cmd_curvature,
    "gauss-bonnet": cmd_gauss_bonnet,
    "holonomy": cmd_holonomy,
    "transport": cmd_transport,
    "gauge-check": cmd_gauge_check,
    "berry": cmd_berry,
    "compare": cmd_compare,
}


# --- output ---------------------------------------------------------------------


def render(result, output_format: str) -> str:
    if output_format == "json":
        return json.dumps(result, sort_keys=True, indent=2) + "\n"
    rows = result if isinstance(result, list) else [result]
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    header = list(rows[0].keys()) if rows else []
    writer.writerow(header)
    for row in rows:
        writer.writerow([repr(row[k]) if isinstance(row[k], float) else row[k] for k in header])
    return buf.getvalue()


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = _config(args)
        cfg.validate()
        text = render(HANDLERS[cfg.command](cfg), cfg.output_format)
    except ArgumentError as exc:
        print(f"torusberry: error: {exc}", file=sys.stderr)
        return EXIT_ARGS
    except NumericalError as exc:
        print(f"torusberry: non-convergence: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    if args.out is not None:
        args.out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
