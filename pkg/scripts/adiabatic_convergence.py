"""Adiabatic geometric phase vs the line-integral Berry phase as the drive slows down.

    python scripts/adiabatic_convergence.py --psi0 1.5707963267948966 --times 25 50 100 200 400 800 1600 3200

Prints T, the phase error and T * error; the last column settles to a constant
when the leading non-adiabatic correction is O(1/T).
"""

import argparse

import numpy as np

from torusberry import quantum as q
from torusberry import transport as tr
from torusberry.numerics import wrapped_difference


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--alpha", type=float, default=1.0)
    ap.add_argument("--beta", type=float, default=2.0)
    ap.add_argument("--mu", type=float, default=1.0)
    ap.add_argument("--psi0", type=float, default=np.pi / 2)
    ap.add_argument("--times", type=float, nargs="+", default=[25, 50, 100, 200, 400, 800, 1600, 3200])
    ap.add_argument("--steps-per-time", type=int, default=50)
    args = ap.parse_args()

    params = q.FieldParams(args.alpha, args.beta, args.mu)
    path = tr.latitude_loop(args.psi0)
    line = q.berry_phase_loop(params, path).mod
    omega = q.solid_angle_oracle(params, path)
    print(f"line integral {line:.12f}  -Omega/2 {q.expected_berry_from_solid_angle(omega):.12f}")
    print(f"{'T':>8} {'error':>12} {'T*error':>10} {'1-fidelity':>12}")
    for T in args.times:
        steps = max(1024, int(args.steps_per_time * T))
        _, r = q.adiabatic_evolve(params, q.DriveSchedule(path, T, steps))
        err = float(wrapped_difference(r.geometric_phase, line))
        print(f"{T:8.0f} {err:12.3e} {T * err:10.4f} {r.residual_nonadiabaticity:12.3e}")


if __name__ == "__main__":
    main()
