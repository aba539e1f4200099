"""Rectangular arena with disc-shaped differential-drive robots."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Mapping, Sequence

import numpy as np

from ..motor import WheelPowers
from ..params import Params

CONTACT_TOL = 1e-6
# a contact episode ends once the gap reopens by this much (cm)
RELEASE_GAP = 0.25


@dataclass(frozen=True)
class RobotPose:
    id: int
    x: float
    y: float
    heading: float  # radians, counter-clockwise from +x

    @property
    def pos(self) -> np.ndarray:
        return np.array([self.x, self.y])


@dataclass(frozen=True)
class ContactEvent:
    time_s: float
    robot_id: int
    other_id: int | None  # None for the arena wall


@dataclass
class ArenaWorld:
    width: float
    height: float
    robots: list[RobotPose]
    time_s: float = 0.0
    texture_period: float = 5.0
    texture_phase: float = 0.0
    # contact episodes currently in progress: (id, other) or (id, None)
    touching: frozenset = frozenset()
    new_contacts: tuple[ContactEvent, ...] = ()

    def __post_init__(self) -> None:
        if self.texture_period <= 0:
            raise ValueError("texture period must be > 0")

    @classmethod
    def empty(cls, params: Params, robots: Sequence[RobotPose] = (), phase: float = 0.0) -> "ArenaWorld":
        return cls(params.arena_w, params.arena_h, list(robots),
                   texture_period=params.texture_period, texture_phase=phase)

    def robot(self, rid: int) -> RobotPose:
        for r in self.robots:
            if r.id == rid:
                return r
        raise KeyError(rid)


def integrate_pose(pose: RobotPose, powers: WheelPowers, dt_s: float, track_width: float) -> RobotPose:
    """Exact arc integration of differential-drive motion."""
    v = 0.5 * (powers.p_r + powers.p_l)
    omega = (powers.p_r - powers.p_l) / track_width
    h0 = pose.heading
    if abs(omega) < 1e-12:
        x = pose.x + v * dt_s * math.cos(h0)
        y = pose.y + v * dt_s * math.sin(h0)
        h1 = h0
    else:
        h1 = h0 + omega * dt_s
        x = pose.x + v / omega * (math.sin(h1) - math.sin(h0))
        y = pose.y - v / omega * (math.cos(h1) - math.cos(h0))
    h1 = math.atan2(math.sin(h1), math.cos(h1))
    return replace(pose, x=x, y=y, heading=h1)


def _max_fraction(p0: np.ndarray, delta: np.ndarray, q: np.ndarray, dist: float) -> float:
    """Largest f in [0, 1] keeping |p0 + f*delta - q| >= dist."""
    a = p0 - q
    ad = float(a @ delta)
    if ad >= 0:
        return 1.0
    aa = float(a @ a)
    dd = float(delta @ delta)
    c = aa - dist * dist
    if c <= 0:
        return 0.0  # already touching and pushing inward
    disc = ad * ad - dd * c
    if disc < 0:
        return 1.0
    f = (-ad - math.sqrt(disc)) / dd
    return min(1.0, max(0.0, f))


def step_kinematics(
    world: ArenaWorld,
    powers: Mapping[int, WheelPowers],
    dt_s: float,
    params: Params,
) -> ArenaWorld:
    """Advance all robots; stop at contact and log new contact episodes."""
    if dt_s <= 0:
        raise ValueError("dt_s must be > 0")
    r = params.robot_radius
    lo_x, hi_x = r, world.width - r
    lo_y, hi_y = r, world.height - r
    t1 = world.time_s + dt_s

    placed: dict[int, RobotPose] = {rb.id: rb for rb in world.robots}
    order = sorted(placed)
    for rid in order:
        old = placed[rid]
        prop = integrate_pose(old, powers.get(rid, WheelPowers(0.0, 0.0)), dt_s, params.track_width)
        px = min(max(prop.x, lo_x), hi_x)
        py = min(max(prop.y, lo_y), hi_y)
        p0 = old.pos
        delta = np.array([px, py]) - p0
        f = 1.0
        for oid in order:
            if oid == rid:
                continue
            f = min(f, _max_fraction(p0, delta, placed[oid].pos, 2 * r))
        end = p0 + f * delta
        placed[rid] = replace(prop, x=float(end[0]), y=float(end[1]))

    touching = set()
    new: list[ContactEvent] = []
    robots = [placed[i] for i in order]
    for i, a in enumerate(robots):
        gap = min(a.x - r, world.width - r - a.x, a.y - r, world.height - r - a.y)
        key = (a.id, None)
        if gap <= CONTACT_TOL or (key in world.touching and gap <= RELEASE_GAP):
            touching.add(key)
            if key not in world.touching:
                new.append(ContactEvent(t1, a.id, None))
        for b in robots[i + 1:]:
            gap = math.hypot(a.x - b.x, a.y - b.y) - 2 * r
            key = (a.id, b.id)
            if gap <= CONTACT_TOL or (key in world.touching and gap <= RELEASE_GAP):
                touching.add(key)
                if key not in world.touching:
                    new.append(ContactEvent(t1, a.id, b.id))

    return replace(world, robots=robots, time_s=t1, touching=frozenset(touching),
                   new_contacts=tuple(new))


def blocked_ids(world: ArenaWorld, params: Params) -> set[int]:
    """Robots touching a wall or robot while heading into it.

    A robot in contact but facing away is free to drive off and is not
    reported.
    """
    r = params.robot_radius
    out: set[int] = set()
    for a in world.robots:
        hx, hy = math.cos(a.heading), math.sin(a.heading)
        normals = []  # unit vectors from the robot towards each contact
        if a.x - r <= CONTACT_TOL:
            normals.append((-1.0, 0.0))
        if world.width - r - a.x <= CONTACT_TOL:
            normals.append((1.0, 0.0))
        if a.y - r <= CONTACT_TOL:
            normals.append((0.0, -1.0))
        if world.height - r - a.y <= CONTACT_TOL:
            normals.append((0.0, 1.0))
        for b in world.robots:
            if b.id == a.id:
                continue
            dist = math.hypot(b.x - a.x, b.y - a.y)
            if dist - 2 * r <= CONTACT_TOL and dist > 0:
                normals.append(((b.x - a.x) / dist, (b.y - a.y) / dist))
        if any(hx * nx + hy * ny > 0 for nx, ny in normals):
            out.add(a.id)
    return out


def place_robots(params: Params, n: int, rng: np.random.Generator, clearance: float = 4.0) -> list[RobotPose]:
    """Random non-overlapping start poses with ``clearance`` cm between rims."""
    r = params.robot_radius
    pitch = 2 * r + clearance
    capacity = int((params.arena_w - 2 * r) // pitch + 1) * int((params.arena_h - 2 * r) // pitch + 1)
    if n < 1:
        raise ValueError("need at least one robot")
    if n > capacity:
        raise ValueError(f"{n} robots exceed arena capacity ({capacity})")
    margin = r + clearance / 2
    poses: list[RobotPose] = []
    for attempt in range(20000):
        if len(poses) == n:
            break
        x = rng.uniform(margin, params.arena_w - margin)
        y = rng.uniform(margin, params.arena_h - margin)
        if all(math.hypot(x - q.x, y - q.y) >= pitch for q in poses):
            poses.append(RobotPose(len(poses), float(x), float(y), float(rng.uniform(-math.pi, math.pi))))
    if len(poses) < n:
        raise ValueError(f"could not place {n} robots")
    return poses
