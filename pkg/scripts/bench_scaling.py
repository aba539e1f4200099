"""Pipeline throughput at several resolution multipliers.

    python3 scripts/bench_scaling.py --seconds 5 --scales 0.5 1 2
"""
from __future__ import annotations

import argparse

from insectvision.bench import run_bench
from insectvision.params import Params


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seconds", type=float, default=5.0)
    ap.add_argument("--scales", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    args = ap.parse_args()
    for s in args.scales:
        print(f"scale {s:g}: {run_bench(Params(), args.seconds, scale=s)}")


if __name__ == "__main__":
    main()
