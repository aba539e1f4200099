"""Raycast renderer for a robot's forward camera.

Each image column is sampled by ``params.supersample`` rays.  Hits are
projected with a pinhole model onto a vertical extent centred on the horizon
row; vertical coverage is fractional, so edges are anti-aliased in both
directions.  Walls carry square-wave stripes indexed by perimeter arc length.
"""
from __future__ import annotations

import numpy as np

from ..params import Params
from .world import ArenaWorld, RobotPose

_MIN_DEPTH = 1e-3


def camera_origin(pose: RobotPose, params: Params) -> np.ndarray:
    """Camera sits on the front rim of the robot."""
    r = params.robot_radius
    return np.array([pose.x + r * np.cos(pose.heading), pose.y + r * np.sin(pose.heading)])


def ray_offsets(params: Params, width: int | None = None) -> np.ndarray:
    """Ray angles relative to the heading; positive is to the left."""
    width = width or params.frame_w
    s = params.supersample
    f = (width / 2.0) / np.tan(np.radians(params.fov_deg) / 2.0)
    u = (np.arange(width * s) + 0.5) / s - width / 2.0
    return -np.arctan(u / f)


def perimeter_arclength(px: np.ndarray, py: np.ndarray, w: float, h: float) -> np.ndarray:
    """Arc length of wall points, counter-clockwise from the (0, 0) corner."""
    eps = 1e-9
    s = np.empty_like(px)
    bottom = py <= eps
    right = ~bottom & (px >= w - eps)
    top = ~bottom & ~right & (py >= h - eps)
    left = ~(bottom | right | top)
    s[bottom] = px[bottom]
    s[right] = w + py[right]
    s[top] = w + h + (w - px[top])
    s[left] = 2 * w + h + (h - py[left])
    return s


def wall_luminance(s: np.ndarray, world: ArenaWorld, params: Params) -> np.ndarray:
    half = world.texture_period / 2.0
    stripe = np.floor((s + world.texture_phase) / half).astype(np.int64) % 2
    return np.where(stripe == 0, float(params.lum_wall_light), float(params.lum_wall_dark))


def _coverage(half_px: np.ndarray, height: int) -> np.ndarray:
    """Fraction of each pixel row covered by [cy - half, cy + half]."""
    cy = height / 2.0
    rows = np.arange(height, dtype=float)
    top = cy - half_px[:, None]
    bot = cy + half_px[:, None]
    cov = np.minimum(rows[None, :] + 1.0, bot) - np.maximum(rows[None, :], top)
    return np.clip(cov, 0.0, 1.0)


def _wall_hits(o: np.ndarray, dx: np.ndarray, dy: np.ndarray, w: float, h: float):
    with np.errstate(divide="ignore", invalid="ignore"):
        tx = np.where(dx > 0, (w - o[0]) / dx, np.where(dx < 0, -o[0] / dx, np.inf))
        ty = np.where(dy > 0, (h - o[1]) / dy, np.where(dy < 0, -o[1] / dy, np.inf))
    t = np.minimum(tx, ty)
    t = np.maximum(t, 0.0)
    px = np.clip(o[0] + t * dx, 0.0, w)
    py = np.clip(o[1] + t * dy, 0.0, h)
    # snap the exit coordinate exactly onto its wall
    px = np.where((tx <= ty) & (dx > 0), w, np.where((tx <= ty) & (dx < 0), 0.0, px))
    py = np.where((ty < tx) & (dy > 0), h, np.where((ty < tx) & (dy < 0), 0.0, py))
    return t, px, py


def render_pov(
    world: ArenaWorld,
    viewer: RobotPose,
    params: Params,
    *,
    as_float: bool = False,
) -> np.ndarray:
    """Synthetic camera frame (``frame_h`` x ``frame_w``, uint8) for ``viewer``."""
    W, H, S = params.frame_w, params.frame_h, params.supersample
    f = params.focal_px
    o = camera_origin(viewer, params)
    off = ray_offsets(params)
    ang = viewer.heading + off
    dx, dy = np.cos(ang), np.sin(ang)
    cos_off = np.cos(off)

    bg = np.where(np.arange(H) < H / 2.0, float(params.lum_ceiling), float(params.lum_floor))
    img = np.broadcast_to(bg, (W * S, H)).copy()

    t_wall, px, py = _wall_hits(o, dx, dy, world.width, world.height)
    z_wall = np.maximum(t_wall * cos_off, _MIN_DEPTH)
    cov = _coverage(f * (params.wall_height / 2.0) / z_wall, H)
    lum = wall_luminance(perimeter_arclength(px, py, world.width, world.height), world, params)
    img += cov * (lum[:, None] - img)

    others = [rb for rb in world.robots if rb.id != viewer.id]
    if others:
        r = params.robot_radius
        centres = np.array([[rb.x, rb.y] for rb in others])
        rel = o[None, :] - centres                                   # (k, 2)
        b = rel[:, 0:1] * dx[None, :] + rel[:, 1:2] * dy[None, :]    # (k, rays)
        c = (rel**2).sum(axis=1)[:, None] - r * r
        disc = b * b - c
        with np.errstate(invalid="ignore"):
            sq = np.sqrt(np.where(disc >= 0, disc, np.nan))
        t = -b - sq
        t = np.where((c <= 0) & (disc >= 0), 0.0, t)   # camera touching the disc
        hit = (disc >= 0) & (t >= 0) & (t < t_wall[None, :])
        t = np.where(hit, t, np.inf)
        # paint far to near so the nearest robot wins
        for k in np.argsort(-np.where(np.isfinite(t), t, -1.0), axis=0, kind="stable"):
            tk = t[k, np.arange(t.shape[1])]
            ok = np.isfinite(tk)
            if not ok.any():
                continue
            z = np.maximum(tk * cos_off, _MIN_DEPTH)
            cov_r = _coverage(f * (params.robot_height / 2.0) / z, H)
            cov_r[~ok] = 0.0
            img += cov_r * (float(params.lum_robot) - img)

    frame = img.reshape(W, S, H).mean(axis=1).T
    if as_float:
        return frame
    return np.clip(np.rint(frame), 0, 255).astype(np.uint8)
