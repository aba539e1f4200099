"""Spike statistics over the open-loop stimulus battery: every course kind at
every grid speed, ten textured repetitions each.

    python3 scripts/openloop_battery.py --model full --csv out/battery.csv
"""
from __future__ import annotations

import argparse
import csv
import sys

from insectvision import stimulus
from insectvision.params import Params
from insectvision.pipeline import Model
from insectvision.telemetry import SPIKE_COLUMNS, run_openloop

KINDS = ("looming", "recession", "trans_r", "trans_l")


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--model", type=Model.parse, default=Model.FULL)
    ap.add_argument("--reps", type=int, default=stimulus.REPETITIONS)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--csv", default=None, help="write one row per course here")
    args = ap.parse_args()

    params = Params() if args.seed is None else Params(rng_seed=args.seed)
    rows = []
    for kind in KINDS:
        for speed in stimulus.SPEED_GRID:
            courses = stimulus.gen_repetitions(kind, speed, params, n=args.reps)
            for rep, course in enumerate(courses):
                s = run_openloop(course.frames, params, args.model).summary()
                rows.append({"kind": kind, "speed": speed, "rep": rep, "frames": len(course), **s})
            tot = {k: sum(r[k] for r in rows[-len(courses):]) for k in SPIKE_COLUMNS}
            print(f"{kind:9s} {speed:5.1f} cm/s  " + "  ".join(f"{k[7:]}={v:5d}" for k, v in tot.items()))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.DictWriter(fh, fieldnames=list(rows[0]))
            w.writeheader()
            w.writerows(rows)
        print(f"wrote {args.csv}", file=sys.stderr)


if __name__ == "__main__":
    main()
