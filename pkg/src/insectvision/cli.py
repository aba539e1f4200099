"""Command line entry point: ``insectvision {gen,openloop,arena,bench}``."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import stimulus
from .arena.sim import run_arena
from .bench import run_bench
from .params import Params, ParamsError, load_params, load_params_file
from .pipeline import Model
from .telemetry import run_openloop


def _params(args: argparse.Namespace) -> Params:
    overrides = {}
    if args.seed is not None:
        overrides["rng_seed"] = args.seed
    if args.config:
        return load_params_file(args.config, **overrides)
    return load_params("", **overrides)


def _course_from_args(args: argparse.Namespace, params: Params) -> stimulus.Course:
    phase = 0.0
    if args.rep is not None:
        phases = stimulus.repetition_phases(params.rng_seed, args.rep + 1, params)
        phase = phases[args.rep]
    course = stimulus.gen_course(args.kind, args.speed, params, angle_deg=args.angle, phase=phase)
    course.seed = params.rng_seed
    return course


def cmd_gen(args: argparse.Namespace, params: Params) -> int:
    course = _course_from_args(args, params)
    out = stimulus.write_course(course, args.out_dir, params)
    print(f"wrote {len(course)} frames ({course.label}, {course.speed:g} cm/s) to {out}")
    return 0


def cmd_openloop(args: argparse.Namespace, params: Params) -> int:
    if args.frames:
        frames = stimulus.course_from_dir(args.frames, params)
    elif args.kind:
        frames = _course_from_args(args, params).frames
    else:
        raise ValueError("openloop needs --frames DIR or --kind")
    tel = run_openloop(frames, params, args.model)
    out = tel.write(args.out_dir)
    for k, v in tel.summary().items():
        print(f"{k}={v}")
    print(f"telemetry: {out / 'telemetry.csv'}")
    return 0


def cmd_arena(args: argparse.Namespace, params: Params) -> int:
    if args.robots < 1:
        raise ValueError("--robots must be >= 1")
    if args.duration <= 0:
        raise ValueError("--duration must be > 0")
    result = run_arena(params, args.robots, args.duration, args.model)
    out = result.write(args.out_dir, trajectory=args.trajectory)
    print(f"model={result.model.value} robots={args.robots} duration_s={args.duration:g}")
    for line in result.metrics.summary_lines():
        print(line)
    print(f"events: {out / 'events.csv'}")
    return 0


def cmd_bench(args: argparse.Namespace, params: Params) -> int:
    report = run_bench(params, args.seconds, scale=args.scale, model=args.model)
    print(report)
    return 0


def _add_course_args(p: argparse.ArgumentParser, required: bool) -> None:
    kinds = [k.value for k in stimulus.CourseKind]
    p.add_argument("--kind", choices=kinds, required=required, help="stimulus course type")
    p.add_argument("--speed", type=float, default=8.0, help="target speed in cm/s (default 8)")
    p.add_argument("--angle", type=float, default=0.0, help="approach angle in degrees (angular)")
    p.add_argument("--rep", type=int, default=None,
                   help="repetition index; shifts the wall texture by a seeded offset")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="insectvision",
        description="Spiking looming/translation vision pipeline and multi-robot arena.",
    )
    parser.add_argument("--config", type=Path, help="key=value parameter file")
    parser.add_argument("--seed", type=int, help="override rng_seed")
    parser.add_argument("--out-dir", type=Path, default=Path("out"), help="output directory")
    parser.add_argument("--model", type=Model.parse, default=Model.FULL,
                        metavar="{lgmd2,lgmds,full}", help="which neurons drive behaviour")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="render a stimulus course to PGM frames")
    _add_course_args(g, required=True)
    g.set_defaults(func=cmd_gen)

    o = sub.add_parser("openloop", help="run the pipeline over a frame sequence")
    o.add_argument("--frames", type=Path, help="directory of numbered .pgm frames")
    _add_course_args(o, required=False)
    o.set_defaults(func=cmd_openloop)

    a = sub.add_parser("arena", help="closed-loop multi-robot simulation")
    a.add_argument("--robots", type=int, default=4)
    a.add_argument("--duration", type=float, default=60.0, help="simulated seconds")
    a.add_argument("--trajectory", action="store_true", help="also write trajectory.csv")
    a.set_defaults(func=cmd_arena)

    b = sub.add_parser("bench", help="measure pipeline throughput")
    b.add_argument("--seconds", type=float, default=10.0)
    b.add_argument("--scale", type=float, default=1.0, help="resolution multiplier")
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        params = _params(args)
        return args.func(args, params)
    except (ParamsError, ValueError, OSError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
