"""DSN-to-LGMD spike ratio for oblique approaches at several angles.

    python3 scripts/angular_battery.py --angles 0 15 30 --speed 8
"""
from __future__ import annotations

import argparse

from insectvision import stimulus
from insectvision.params import Params
from insectvision.telemetry import run_openloop


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--angles", type=float, nargs="+", default=[0.0, 15.0, 30.0])
    ap.add_argument("--speed", type=float, default=8.0)
    ap.add_argument("--reps", type=int, default=stimulus.REPETITIONS)
    args = ap.parse_args()

    params = Params()
    print(f"{'angle':>6s} {'dsn':>7s} {'lgmd':>7s} {'ratio':>8s}")
    for angle in args.angles:
        dsn = lgmd = 0
        for course in stimulus.gen_repetitions("angular", args.speed, params, n=args.reps,
                                               angle_deg=angle):
            s = run_openloop(course.frames, params, "full").summary()
            dsn += s["spikes_dsn_r"] + s["spikes_dsn_l"]
            lgmd += s["spikes_lgmd1"] + s["spikes_lgmd2"]
        ratio = dsn / lgmd if lgmd else float("inf")
        print(f"{angle:6.1f} {dsn:7d} {lgmd:7d} {ratio:8.2f}")


if __name__ == "__main__":
    main()
