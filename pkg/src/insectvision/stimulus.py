"""Scripted open-loop stimulus courses rendered from a parked robot's camera.

The viewer sits near one short wall of the arena facing the opposite wall; a
single dark robot moves along a straight line in front of it.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from . import pgm
from .arena.render import camera_origin, render_pov
from .arena.world import ArenaWorld, RobotPose
from .params import Params

SPEED_GRID = (3.0, 6.0, 8.0, 12.0)
REPETITIONS = 10


class CourseKind(enum.Enum):
    LOOMING = "looming"
    RECESSION = "recession"
    TRANS_R = "trans_r"
    TRANS_L = "trans_l"
    ANGULAR = "angular"


@dataclass
class Course:
    kind: CourseKind
    speed: float
    frames: list[np.ndarray]
    target_width_px: np.ndarray
    angle_deg: float = 0.0
    phase: float = 0.0
    seed: int | None = None
    meta: dict = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.frames)

    def __iter__(self) -> Iterator[np.ndarray]:
        return iter(self.frames)

    def __getitem__(self, i):
        return self.frames[i]

    @property
    def label(self) -> str:
        if self.kind is CourseKind.ANGULAR:
            return f"angular{self.angle_deg:+g}"
        return self.kind.value


def viewer_pose(params: Params) -> RobotPose:
    return RobotPose(0, params.arena_w / 2.0, params.robot_radius + 3.0, math.pi / 2.0)


def _sample_path(start: np.ndarray, end: np.ndarray, speed: float, fps: float) -> np.ndarray:
    length = float(np.linalg.norm(end - start))
    step = speed / fps
    n = int(math.floor(length / step + 1e-9)) + 1
    s = np.minimum(np.arange(n) * step, length)
    if s[-1] < length - 1e-9:
        s = np.append(s, length)
    u = (end - start) / length
    return start[None, :] + s[:, None] * u[None, :]


def _width_px(rel_fwd: float, rel_left: float, params: Params) -> float:
    """Image width in pixels of the target disc at camera-relative position."""
    dist = math.hypot(rel_fwd, rel_left)
    r = params.robot_radius
    if dist <= r:
        return float(params.frame_w)
    beta = math.atan2(rel_left, rel_fwd)
    alpha = math.asin(r / dist)
    f = params.focal_px
    lim = math.radians(89.9)

    def col(phi: float) -> float:
        phi = max(-lim, min(lim, phi))
        return min(max(params.frame_w / 2.0 - f * math.tan(phi), 0.0), float(params.frame_w))

    return col(beta - alpha) - col(beta + alpha)


def _render_path(path_rel: np.ndarray, params: Params, phase: float) -> tuple[list[np.ndarray], np.ndarray]:
    """Render the target at camera-relative (forward, left) positions."""
    viewer = viewer_pose(params)
    cam = camera_origin(viewer, params)
    fwd = np.array([math.cos(viewer.heading), math.sin(viewer.heading)])
    left = np.array([-fwd[1], fwd[0]])
    frames, widths = [], []
    for fw, lf in path_rel:
        xy = cam + fw * fwd + lf * left
        world = ArenaWorld.empty(params, [viewer, RobotPose(1, float(xy[0]), float(xy[1]), 0.0)], phase)
        frames.append(render_pov(world, viewer, params))
        widths.append(_width_px(fw, lf, params))
    return frames, np.array(widths)


def gen_course(
    kind: CourseKind | str,
    speed_cm_s: float,
    params: Params,
    angle_deg: float = 0.0,
    phase: float = 0.0,
    start_distance: float | None = None,
) -> Course:
    """Render one course; ``phase`` shifts the wall texture (cm)."""
    kind = CourseKind(kind) if not isinstance(kind, CourseKind) else kind
    if speed_cm_s <= 0:
        raise ValueError("speed must be > 0")
    r = params.robot_radius
    start_d = params.course_start_distance if start_distance is None else start_distance
    contact = np.array([r, 0.0])  # target centre touching the camera

    if kind in (CourseKind.LOOMING, CourseKind.RECESSION, CourseKind.ANGULAR):
        theta = math.radians(angle_deg) if kind is CourseKind.ANGULAR else 0.0
        if abs(angle_deg) > params.fov_deg / 2.0 and kind is CourseKind.ANGULAR:
            raise ValueError(f"angle {angle_deg} outside the field of view")
        start = contact + start_d * np.array([math.cos(theta), math.sin(theta)])
        if start[0] <= 0 or start_d <= 0:
            raise ValueError("trajectory starts behind the viewer")
        path = _sample_path(start, contact, speed_cm_s, params.fps)
        frames, widths = _render_path(path, params, phase)
        if kind is CourseKind.RECESSION:
            frames, widths = frames[::-1], widths[::-1]
    else:
        rng_ = params.course_trans_range
        if rng_ <= r:
            raise ValueError("translation range must clear the viewer")
        half = rng_ * math.tan(math.radians(params.fov_deg) / 2.0) + r + 1.0
        # rightward in the image = from the viewer's left to its right
        path = _sample_path(np.array([rng_, half]), np.array([rng_, -half]), speed_cm_s, params.fps)
        frames, widths = _render_path(path, params, phase)
        if kind is CourseKind.TRANS_L:
            frames = [np.ascontiguousarray(np.fliplr(f)) for f in frames]
    return Course(kind, float(speed_cm_s), frames, widths, angle_deg=float(angle_deg), phase=float(phase))


def repetition_phases(seed: int, n: int, params: Params) -> list[float]:
    """Seeded texture offsets, one per repetition."""
    rng = np.random.default_rng(seed)
    return [float(v) for v in rng.uniform(0.0, params.texture_period, size=n)]


def gen_repetitions(
    kind: CourseKind | str,
    speed_cm_s: float,
    params: Params,
    n: int = REPETITIONS,
    seed: int | None = None,
    angle_deg: float = 0.0,
) -> list[Course]:
    seed = params.rng_seed if seed is None else seed
    courses = []
    for ph in repetition_phases(seed, n, params):
        c = gen_course(kind, speed_cm_s, params, angle_deg=angle_deg, phase=ph)
        c.seed = seed
        courses.append(c)
    return courses


def write_course(course: Course, out_dir: str | Path, params: Params) -> Path:
    """Write numbered binary PGM frames plus ``manifest.txt``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    digits = max(5, len(str(len(course))))
    for i, frame in enumerate(course.frames):
        pgm.write_pgm(out / f"frame_{i:0{digits}d}.pgm", frame)
    lines = [
        f"kind={course.kind.value}",
        f"angle_deg={course.angle_deg!r}",
        f"speed={course.speed!r}",
        f"fps={params.fps!r}",
        f"frame_count={len(course)}",
        f"seed={course.seed if course.seed is not None else params.rng_seed}",
        f"phase={course.phase!r}",
    ]
    (out / "manifest.txt").write_text("\n".join(lines) + "\n")
    return out


def read_manifest(path: str | Path) -> dict[str, str]:
    text = Path(path).read_text()
    return dict(line.split("=", 1) for line in text.splitlines() if "=" in line)


def course_from_dir(directory: str | Path, params: Params) -> Sequence[np.ndarray]:
    return pgm.read_sequence(directory, shape=(params.frame_h, params.frame_w))
