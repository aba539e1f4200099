"""Closed-loop multi-robot arena runs.

Every tick is lockstep: all robots render and perceive the same world state,
then all move.  Robots are visited in id order, each owning its own pipeline
and random stream, so a run is a pure function of (params, seed, n_robots,
duration, model).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path
from typing import Callable

import numpy as np

from ..motor import WheelPowers
from ..params import Params
from ..pipeline import Model, RobotBrain
from . import events as ev
from .render import render_pov
from .world import (ArenaWorld, ContactEvent, RobotPose, place_robots, step_kinematics,
                    blocked_ids)


@dataclass
class ArenaResult:
    model: Model
    metrics: ev.ArenaMetrics
    events: list[ev.EventRecord]
    history: ev.ArenaHistory

    @property
    def contacts(self) -> list[ContactEvent]:
        return self.history.contacts

    def write(self, out_dir: str | Path, trajectory: bool = False) -> Path:
        out = Path(out_dir)
        ev.write_text(out / "events.csv", ev.events_to_csv(self.events))
        ev.write_text(out / "metrics.csv", ev.metrics_to_csv(self.metrics))
        if trajectory:
            ev.write_text(out / "trajectory.csv", ev.trajectory_to_csv(self.history))
        return out


def _streams(seed: int, n: int) -> tuple[np.random.Generator, list[np.random.Generator]]:
    root = np.random.SeedSequence(seed)
    place, *robots = root.spawn(n + 1)
    return np.random.default_rng(place), [np.random.default_rng(s) for s in robots]


def run_arena(
    params: Params,
    n_robots: int,
    duration_s: float,
    model: Model | str = Model.FULL,
    *,
    seed: int | None = None,
    start: list[RobotPose] | None = None,
    progress: Callable[[int, int], None] | None = None,
) -> ArenaResult:
    """Simulate ``n_robots`` for ``duration_s`` seconds and classify encounters.

    A robot pushing against a wall or robot starts an avoidance turn on the
    next tick unless it is already turning (bump reflex), so that a stalled
    robot cannot stay pinned forever; reflex turns are not counted as
    perceptual avoidance.  A robot's vision
    pipeline is restarted when each avoidance turn completes.
    """
    model = Model.parse(model)
    if duration_s < 0:
        raise ValueError("duration must be >= 0")
    seed = params.rng_seed if seed is None else seed
    place_rng, robot_rngs = _streams(seed, n_robots)
    robots = list(start) if start is not None else place_robots(params, n_robots, place_rng)
    if len(robots) != n_robots:
        raise ValueError("start poses must match n_robots")
    world = ArenaWorld.empty(params, robots, phase=0.0)
    brains = {rb.id: RobotBrain(params, model, robot_rngs[i]) for i, rb in enumerate(robots)}
    ids = tuple(sorted(brains))

    n_ticks = int(round(duration_s * params.fps))
    poses = np.empty((n_ticks + 1, len(ids), 3))
    triggered = np.zeros((n_ticks, len(ids)), dtype=bool)
    poses[0] = [(world.robot(i).x, world.robot(i).y, world.robot(i).heading) for i in ids]
    contacts: list[ContactEvent] = []
    dt = params.dt_s

    for k in range(n_ticks):
        frames = {rid: render_pov(world, world.robot(rid), params) for rid in ids}
        powers: dict[int, WheelPowers] = {}
        for col, rid in enumerate(ids):
            rec = brains[rid].step(frames[rid])
            powers[rid] = rec.powers
            triggered[k, col] = rec.avoid_triggered
            if rec.behavior.turn_done:
                # the spin floods every temporal buffer with self-induced
                # motion; vision restarts once the maneuver is over
                brains[rid].pipeline.reset()
        world = step_kinematics(world, powers, dt, params)
        # keep time on the tick grid so logs never drift
        world.time_s = (k + 1) * dt
        stamped = [ContactEvent((k + 1) * dt, c.robot_id, c.other_id) for c in world.new_contacts]
        contacts.extend(stamped)
        for rid in sorted(blocked_ids(world, params)):
            brains[rid].force_avoid()
        poses[k + 1] = [(world.robot(i).x, world.robot(i).y, world.robot(i).heading) for i in ids]
        if progress is not None:
            progress(k + 1, n_ticks)

    history = ev.ArenaHistory(dt, ids, poses, triggered, contacts)
    events = ev.classify_encounters(history, params)
    return ArenaResult(model, ev.compute_metrics(events), events, history)


def run_ablation(params: Params, n_robots: int, duration_s: float, seed: int | None = None,
                 models=tuple(Model), workers: int | None = None) -> dict[Model, ArenaResult]:
    """Run each model on the same seed, one process per model."""
    from concurrent.futures import ProcessPoolExecutor

    models = [Model.parse(m) for m in models]
    if workers == 1 or len(models) == 1:
        return {m: run_arena(params, n_robots, duration_s, m, seed=seed) for m in models}
    with ProcessPoolExecutor(max_workers=workers or len(models)) as pool:
        futs = {m: pool.submit(run_arena, params, n_robots, duration_s, m, seed=seed) for m in models}
        return {m: f.result() for m, f in futs.items()}
