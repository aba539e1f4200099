"""Encounter classification and success-rate metrics for arena runs.

An *encounter* is a bounded episode in which one robot (the viewer) faces a
potential collision.  Robot encounters open when another robot enters the
viewer's proximity disc while inside its field of view; wall encounters open
when the viewer's time-to-contact with a wall drops below a threshold.  Each
encounter closes with exactly one :class:`EventRecord`.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from ..params import Params
from .world import ContactEvent


# a wall encounter ends once time-to-contact exceeds this multiple of the
# opening threshold; the gap keeps steering jitter from splitting one approach
WALL_RELEASE = 2.0


class EventKind(enum.Enum):
    CWR = "CwR"  # collided with a robot
    CWP = "CwP"  # collided with the periphery
    ALR = "ALR"  # avoided a looming robot
    ATR = "ATR"  # avoided (got past) a translating robot
    AP = "AP"    # avoided the periphery


@dataclass(frozen=True, order=True)
class EventRecord:
    time_s: float
    robot_id: int
    other_id: int | None
    kind: EventKind = field(compare=False)

    def sort_key(self) -> tuple:
        return (self.time_s, self.robot_id, -1 if self.other_id is None else self.other_id,
                self.kind.value)


@dataclass
class ArenaHistory:
    """Everything the classifier needs, sampled once per tick.

    ``poses[k]`` is ``(n_robots, 3)`` of x, y, heading after tick ``k``
    (``poses[0]`` is the start).  ``triggered[k - 1]`` marks robots whose
    perception started an avoidance turn during tick ``k``; ``contacts`` holds
    contact-episode onsets stamped with the tick end time.
    """

    dt_s: float
    ids: tuple[int, ...]
    poses: np.ndarray
    triggered: np.ndarray
    contacts: list[ContactEvent]

    @property
    def n_ticks(self) -> int:
        return self.poses.shape[0] - 1


@dataclass(frozen=True)
class ArenaMetrics:
    counts: dict[str, int]
    sr1: float | None
    sr2: float | None

    def summary_lines(self) -> list[str]:
        out = [f"{k.value}={self.counts.get(k.value, 0)}" for k in EventKind]
        out.append(f"SR1={_fmt_rate(self.sr1)}")
        out.append(f"SR2={_fmt_rate(self.sr2)}")
        return out


def _fmt_rate(v: float | None) -> str:
    return "NA" if v is None else f"{v:.2f}"


def compute_metrics(events: Iterable[EventRecord]) -> ArenaMetrics:
    """SR1 = AP/(AP+CwP), SR2 = ALR/(ALR+ATR+CwR), both in percent.

    A ratio with an empty denominator is ``None`` rather than zero.
    """
    counts = {k.value: 0 for k in EventKind}
    for ev in events:
        counts[ev.kind.value] += 1
    d1 = counts["AP"] + counts["CwP"]
    d2 = counts["ALR"] + counts["ATR"] + counts["CwR"]
    sr1 = 100.0 * counts["AP"] / d1 if d1 else None
    sr2 = 100.0 * counts["ALR"] / d2 if d2 else None
    return ArenaMetrics(counts, sr1, sr2)


# -- classification -------------------------------------------------------

@dataclass
class _RobotEncounter:
    looming: bool


def _wrap(a: np.ndarray | float):
    return (a + np.pi) % (2 * np.pi) - np.pi


def wall_time_to_contact(x: float, y: float, heading: float, speed: float, params: Params) -> float:
    """Seconds until the rim touches a wall driving straight at ``speed``."""
    if speed <= 0:
        return math.inf
    r = params.robot_radius
    c, s = math.cos(heading), math.sin(heading)
    dist = math.inf
    if c > 1e-12:
        dist = min(dist, (params.arena_w - r - x) / c)
    elif c < -1e-12:
        dist = min(dist, (x - r) / -c)
    if s > 1e-12:
        dist = min(dist, (params.arena_h - r - y) / s)
    elif s < -1e-12:
        dist = min(dist, (y - r) / -s)
    return max(dist, 0.0) / speed


def classify_encounters(history: ArenaHistory, params: Params) -> list[EventRecord]:
    """Turn a recorded run into Table-II style event records.

    Per tick the classifier applies, in order: contacts (collisions close
    encounters as CwR/CwP), perception-triggered avoidance (closes every open
    encounter of that robot as ALR/ATR/AP), separation or loss of approach
    (with hysteresis for walls), then opens new encounters.  A robot
    encounter is Looming if, at any tick while open, the range closed faster
    than the threshold with the other robot inside the frontal cone and the
    relative motion within that cone of the line of sight.  After a wall encounter closes, the robot
    must back off past the release time-to-contact before another can open.
    Encounters still open at the end close as avoidance outcomes of their
    type.
    """
    p = params
    ids = list(history.ids)
    n = len(ids)
    col = {rid: i for i, rid in enumerate(ids)}
    half_fov = math.radians(p.fov_deg) / 2.0
    cone = math.radians(p.frontal_cone_deg)
    cos_cone = math.cos(cone)
    dt = history.dt_s

    contacts_by_tick: dict[int, list[ContactEvent]] = {}
    for ev in history.contacts:
        k = int(round(ev.time_s / dt))
        contacts_by_tick.setdefault(k, []).append(ev)

    open_robot: dict[tuple[int, int], _RobotEncounter] = {}
    blocked: set[tuple[int, int]] = set()   # pairs that must leave the disc first
    open_wall: set[int] = set()
    wall_blocked: set[int] = set()          # must back off before a new wall encounter
    events: list[EventRecord] = []

    def close_robot(key, t, kind=None):
        enc = open_robot.pop(key)
        if kind is None:
            kind = EventKind.ALR if enc.looming else EventKind.ATR
        events.append(EventRecord(t, ids[key[0]], ids[key[1]], kind))

    for k in range(1, history.n_ticks + 1):
        t = round(k * dt, 9)
        pose = history.poses[k]
        prev = history.poses[k - 1]
        xy = pose[:, :2]
        diff = xy[None, :, :] - xy[:, None, :]                    # [i, j] = j - i
        dist = np.hypot(diff[..., 0], diff[..., 1])
        pdiff = prev[None, :, :2] - prev[:, None, :2]
        prev_dist = np.hypot(pdiff[..., 0], pdiff[..., 1])
        rate = (dist - prev_dist) / dt
        rel_speed = np.hypot(diff[..., 0] - pdiff[..., 0], diff[..., 1] - pdiff[..., 1]) / dt
        bearing = _wrap(np.arctan2(diff[..., 1], diff[..., 0]) - pose[:, 2:3])
        in_fov = np.abs(bearing) <= half_fov
        # closing fast, in front, and along the line of sight (a robot crossing
        # close in front also closes range briefly, but mostly sideways)
        looming_now = ((rate < -p.range_rate_threshold) & (np.abs(bearing) <= cone)
                       & (-rate >= cos_cone * rel_speed))

        # 1. contacts
        for ev in contacts_by_tick.get(k, ()):
            i = col[ev.robot_id]
            if ev.other_id is None:
                open_wall.discard(i)
                wall_blocked.add(i)
                events.append(EventRecord(t, ev.robot_id, None, EventKind.CWP))
                continue
            j = col[ev.other_id]
            for a, b in ((i, j), (j, i)):
                if (a, b) in open_robot:
                    close_robot((a, b), t, EventKind.CWR)
                    blocked.add((a, b))
                elif in_fov[a, b]:
                    events.append(EventRecord(t, ids[a], ids[b], EventKind.CWR))
                    blocked.add((a, b))

        # 2. perception-triggered avoidance
        for i in np.flatnonzero(history.triggered[k - 1]):
            for key in [key for key in open_robot if key[0] == i]:
                close_robot(key, t)
            if i in open_wall:
                open_wall.discard(i)
                wall_blocked.add(i)
                events.append(EventRecord(t, ids[i], None, EventKind.AP))

        # 3. update / separate robot encounters
        for key in list(open_robot):
            a, b = key
            if dist[a, b] > p.encounter_radius:
                close_robot(key, t)
            elif looming_now[a, b]:
                open_robot[key].looming = True
        blocked = {key for key in blocked if dist[key] <= p.encounter_radius}

        # 4. open robot encounters
        for a in range(n):
            for b in range(n):
                if a == b or (a, b) in open_robot or (a, b) in blocked:
                    continue
                if dist[a, b] <= p.encounter_radius and in_fov[a, b]:
                    open_robot[(a, b)] = _RobotEncounter(bool(looming_now[a, b]))
                    blocked.add((a, b))

        # 5. wall encounters
        for i in range(n):
            h = pose[i, 2]
            speed = ((pose[i, 0] - prev[i, 0]) * math.cos(h) + (pose[i, 1] - prev[i, 1]) * math.sin(h)) / dt
            ttc = wall_time_to_contact(pose[i, 0], pose[i, 1], h, speed, p)
            released = ttc > WALL_RELEASE * p.wall_ttc_s
            if released:
                wall_blocked.discard(i)
            if i in open_wall and released:
                open_wall.discard(i)
                events.append(EventRecord(t, ids[i], None, EventKind.AP))
            elif i not in open_wall and i not in wall_blocked and ttc <= p.wall_ttc_s:
                open_wall.add(i)

    t_end = round(history.n_ticks * dt, 9)
    for key in sorted(open_robot):
        close_robot(key, t_end)
    for i in sorted(open_wall):
        events.append(EventRecord(t_end, ids[i], None, EventKind.AP))
    events.sort(key=EventRecord.sort_key)
    return events


# -- CSV ------------------------------------------------------------------

EVENT_COLUMNS = ("time_s", "robot_id", "other_id", "kind")
TRAJECTORY_COLUMNS = ("time_s", "id", "x", "y", "heading")


def events_to_csv(events: Sequence[EventRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(EVENT_COLUMNS)
    for ev in events:
        w.writerow([f"{ev.time_s:.4f}", ev.robot_id, "" if ev.other_id is None else ev.other_id,
                    ev.kind.value])
    return buf.getvalue()


def events_from_csv(text: str) -> list[EventRecord]:
    rows = list(csv.DictReader(io.StringIO(text)))
    return [
        EventRecord(float(r["time_s"]), int(r["robot_id"]),
                    int(r["other_id"]) if r["other_id"] else None, EventKind(r["kind"]))
        for r in rows
    ]


def metrics_to_csv(metrics: ArenaMetrics) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["metric", "value"])
    for k in EventKind:
        w.writerow([k.value, metrics.counts.get(k.value, 0)])
    w.writerow(["SR1", _fmt_rate(metrics.sr1)])
    w.writerow(["SR2", _fmt_rate(metrics.sr2)])
    return buf.getvalue()


def trajectory_to_csv(history: ArenaHistory) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(TRAJECTORY_COLUMNS)
    for k in range(history.poses.shape[0]):
        t = k * history.dt_s
        for i, rid in enumerate(history.ids):
            x, y, h = history.poses[k, i]
            w.writerow([f"{t:.4f}", rid, f"{x:.4f}", f"{y:.4f}", f"{h:.5f}"])
    return buf.getvalue()


def write_text(path: str | Path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    return path
