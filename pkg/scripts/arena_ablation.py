"""Run the three behaviour models in the arena on one seed and print the
success rates side by side.

    python3 scripts/arena_ablation.py --minutes 20 --robots 4 --seed 7 --out out/ablation
"""
from __future__ import annotations

import argparse
import time
from pathlib import Path

from insectvision.arena.sim import run_ablation
from insectvision.params import Params
from insectvision.pipeline import Model


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--minutes", type=float, default=20.0)
    ap.add_argument("--robots", type=int, default=4)
    ap.add_argument("--seed", type=int, default=None)
    ap.add_argument("--workers", type=int, default=None)
    ap.add_argument("--out", type=Path, default=None, help="write per-model events/metrics here")
    args = ap.parse_args()

    params = Params()
    t0 = time.perf_counter()
    results = run_ablation(params, args.robots, 60.0 * args.minutes, seed=args.seed,
                           models=tuple(Model), workers=args.workers)
    print(f"{'model':8s} {'CwR':>5s} {'CwP':>5s} {'ALR':>5s} {'ATR':>5s} {'AP':>5s} {'SR1':>7s} {'SR2':>7s}")
    for model, res in results.items():
        c = res.metrics.counts
        sr1 = "NA" if res.metrics.sr1 is None else f"{res.metrics.sr1:.1f}"
        sr2 = "NA" if res.metrics.sr2 is None else f"{res.metrics.sr2:.1f}"
        print(f"{model.value:8s} {c['CwR']:5d} {c['CwP']:5d} {c['ALR']:5d} {c['ATR']:5d} {c['AP']:5d} "
              f"{sr1:>7s} {sr2:>7s}")
        if args.out is not None:
            res.write(args.out / model.value)
    print(f"wall time {time.perf_counter() - t0:.0f} s")


if __name__ == "__main__":
    main()
