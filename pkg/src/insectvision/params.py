"""Model parameters and simulation constants.

Everything tunable lives on one frozen :class:`Params` value.  Config files
are flat ``key=value`` documents (``#`` starts a comment); omitted keys keep
their defaults.  Kernels are written as rows separated by ``;`` with
comma-separated weights.
"""
from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field, fields
from functools import cached_property
from pathlib import Path

import numpy as np

Kernel = tuple[tuple[float, ...], ...]


class ParamsError(ValueError):
    """Raised for malformed config text or invalid parameter values."""


def gaussian_kernel(size: int, sigma: float) -> Kernel:
    """Normalized isotropic Gaussian kernel of odd side ``size``."""
    r = size // 2
    ax = np.arange(-r, r + 1, dtype=float)
    g = np.exp(-(ax[:, None] ** 2 + ax[None, :] ** 2) / (2.0 * sigma**2))
    g /= g.sum()
    return tuple(tuple(float(v) for v in row) for row in g)


def _binomial3() -> Kernel:
    b = np.array([1.0, 2.0, 1.0])
    k = np.outer(b, b) / 16.0
    return tuple(tuple(float(v) for v in row) for row in k)


# lateral-spread stencil: 4-neighbours 1/4, diagonals 1/8, centre 0
LATERAL_KERNEL: Kernel = (
    (0.125, 0.25, 0.125),
    (0.25, 0.0, 0.25),
    (0.125, 0.25, 0.125),
)


@dataclass(frozen=True)
class Params:
    # retina
    n_i: int = 2
    u: float = 1.0
    # lamina
    w_e: Kernel = field(default_factory=_binomial3)
    w_i: Kernel = field(default_factory=lambda: gaussian_kernel(7, 10.0))
    tau1: float = 1.0
    tau2: float = 100.0
    # medulla
    w_l: Kernel = LATERAL_KERNEL
    w1: float = 0.3
    w2: float = 0.6
    tau_s: float = 200.0
    theta1_lgmd1: float = 1.0
    theta2_lgmd1: float = 1.0
    theta1_lgmd2: float = 0.0
    theta2_lgmd2: float = 1.0
    theta3: float = 0.0
    d: int = 2
    n_c: int = 2
    # lobula + spiking
    k_sig: float = 0.1
    # DSN fields are products of two lamina signals, so they get their own scale
    k_sig_dsn: float = 0.002
    delta_c: float = 0.0
    k_sp: float = 6.0
    t_sp_lgmd: float = 0.7
    t_sp_dsn: float = 0.2
    # recognition and control
    n_sp: int = 6
    n_t: int = 4
    sigma1: float = 15.0
    tau3: float = 10.0
    g_v: float = 1.0
    g_w: float = 1.0
    v_i: float = 10.0
    avoid_turn_radians: float = 3.5
    avoid_speed: float = 35.0
    # camera and platform
    frame_w: int = 99
    frame_h: int = 72
    fps: float = 30.0
    fov_deg: float = 70.0
    robot_diameter: float = 4.0
    robot_height: float = 3.0
    track_width: float = 3.6
    max_speed: float = 35.0
    # arena and rendering
    arena_w: float = 70.0
    arena_h: float = 55.0
    wall_height: float = 10.0
    texture_period: float = 1.0
    lum_robot: int = 40
    lum_wall_dark: int = 120
    lum_wall_light: int = 255
    lum_floor: int = 220
    lum_ceiling: int = 240
    supersample: int = 4
    # encounter classification
    encounter_radius: float = 15.0
    frontal_cone_deg: float = 25.0
    range_rate_threshold: float = 1.0
    wall_ttc_s: float = 1.5
    # open-loop courses
    course_start_distance: float = 40.0
    course_trans_range: float = 10.0
    rng_seed: int = 0

    def __post_init__(self) -> None:
        validate(self)

    # derived quantities -------------------------------------------------
    @property
    def dt_ms(self) -> float:
        return 1000.0 / self.fps

    @property
    def dt_s(self) -> float:
        return 1.0 / self.fps

    @property
    def n_pixels(self) -> int:
        return self.frame_w * self.frame_h

    @property
    def robot_radius(self) -> float:
        return self.robot_diameter / 2.0

    @property
    def focal_px(self) -> float:
        return (self.frame_w / 2.0) / math.tan(math.radians(self.fov_deg) / 2.0)

    @cached_property
    def kernel_e(self) -> np.ndarray:
        return np.asarray(self.w_e, dtype=float)

    @cached_property
    def kernel_i(self) -> np.ndarray:
        return np.asarray(self.w_i, dtype=float)

    @cached_property
    def kernel_l(self) -> np.ndarray:
        return np.asarray(self.w_l, dtype=float)

    @cached_property
    def a_coeffs(self) -> np.ndarray:
        i = np.arange(1, self.n_i + 1, dtype=float)
        return 1.0 / (1.0 + np.exp(self.u * i))

    def replace(self, **changes) -> "Params":
        return dataclasses.replace(self, **changes)


_RANGES: dict[str, tuple[float, float]] = {
    "tau_s": (10.0, 200.0),
    "d": (2, 4),
    "n_c": (2, 4),
    "k_sig": (0.1, 0.6),
    "k_sig_dsn": (1e-4, 0.6),
    "delta_c": (0.0, 1.0),
    "k_sp": (1.0, 6.0),
    "theta1_lgmd1": (0.0, 1.0),
    "theta2_lgmd1": (0.0, 1.0),
    "theta1_lgmd2": (0.0, 1.0),
    "theta2_lgmd2": (0.0, 1.0),
    "t_sp_lgmd": (0.5, 1.0),
    "t_sp_dsn": (0.0, 1.0),
    "supersample": (1, 16),
}

_POSITIVE = (
    "n_i", "tau1", "tau2", "n_sp", "n_t", "tau3", "fps", "fov_deg",
    "frame_w", "frame_h", "arena_w", "arena_h", "robot_diameter",
    "robot_height", "track_width", "max_speed", "avoid_speed", "wall_height",
    "texture_period", "encounter_radius", "wall_ttc_s",
    "course_start_distance", "course_trans_range",
)


def _check_kernel(name: str, k: Kernel, lo: float, hi: float) -> None:
    arr = np.asarray(k, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] % 2 == 0:
        raise ParamsError(f"{name}: kernel must be square with odd side, got {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise ParamsError(f"{name}: non-finite weight")
    if abs(arr.sum() - 1.0) > 1e-9:
        raise ParamsError(f"{name}: weights sum to {arr.sum()!r}, expected 1")
    if arr.min() < lo - 1e-12 or arr.max() > hi + 1e-12:
        raise ParamsError(f"{name}: weights must lie in [{lo}, {hi}]")


def validate(p: Params) -> None:
    for name in _POSITIVE:
        if not getattr(p, name) > 0:
            raise ParamsError(f"{name}: must be > 0, got {getattr(p, name)!r}")
    for name, (lo, hi) in _RANGES.items():
        v = getattr(p, name)
        if not lo <= v <= hi:
            raise ParamsError(f"{name}: {v!r} outside [{lo}, {hi}]")
    if p.tau1 >= p.tau2:
        raise ParamsError(f"tau1: {p.tau1!r} must be < tau2 ({p.tau2!r})")
    if p.t_sp_dsn >= p.t_sp_lgmd:
        raise ParamsError("t_sp_dsn: must be below t_sp_lgmd")
    if p.theta3 < 0:
        raise ParamsError("theta3: must be >= 0")
    if p.u <= 0:
        raise ParamsError("u: must be > 0")
    if p.avoid_turn_radians <= math.pi:
        raise ParamsError("avoid_turn_radians: must exceed pi")
    if p.v_i < 0:
        raise ParamsError("v_i: must be >= 0")
    if p.v_i > p.max_speed:
        raise ParamsError("v_i: exceeds max_speed")
    if p.fov_deg >= 180:
        raise ParamsError("fov_deg: must be < 180")
    _check_kernel("w_e", p.w_e, 1 / 128, 1 / 4)
    _check_kernel("w_i", p.w_i, 1 / 128, 1 / 4)
    if len(p.w_i) != 2 * len(p.w_e) + 1:
        raise ParamsError(
            f"w_i: side {len(p.w_i)} must be 2*{len(p.w_e)}+1 (twice the excitatory support)"
        )
    wl = np.asarray(p.w_l, dtype=float)
    if wl.ndim != 2 or wl.shape[0] != wl.shape[1] or wl.shape[0] % 2 == 0:
        raise ParamsError("w_l: kernel must be square with odd side")
    if np.any(wl < 0) or not np.all(np.isfinite(wl)):
        raise ParamsError("w_l: weights must be finite and non-negative")
    for lum in ("lum_robot", "lum_wall_dark", "lum_wall_light", "lum_floor", "lum_ceiling"):
        if not 0 <= getattr(p, lum) <= 255:
            raise ParamsError(f"{lum}: must be an 8-bit value")
    if not p.lum_robot < min(p.lum_wall_dark, p.lum_floor):
        raise ParamsError("lum_robot: robots must render darker than walls and floor")
    if p.rng_seed < 0:
        raise ParamsError("rng_seed: must be unsigned")


# -- text round-trip ------------------------------------------------------

_FIELDS = {f.name: f for f in fields(Params)}
_KERNELS = {"w_e", "w_i", "w_l"}


def _parse_kernel(text: str) -> Kernel:
    rows = [r for r in text.split(";") if r.strip()]
    return tuple(tuple(float(v) for v in r.split(",")) for r in rows)


def _format_kernel(k: Kernel) -> str:
    return ";".join(",".join(repr(v) for v in row) for row in k)


def load_params(config_text: str = "", **overrides) -> Params:
    """Parse a ``key=value`` document into a validated :class:`Params`."""
    values: dict[str, object] = {}
    for lineno, raw in enumerate(config_text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParamsError(f"line {lineno}: expected key=value, got {raw!r}")
        key, val = (s.strip() for s in line.split("=", 1))
        if key not in _FIELDS:
            raise ParamsError(f"{key}: unknown parameter (line {lineno})")
        if key in values:
            raise ParamsError(f"{key}: duplicate key (line {lineno})")
        try:
            if key in _KERNELS:
                values[key] = _parse_kernel(val)
            elif _FIELDS[key].type in ("int", int):
                values[key] = int(val)
            else:
                values[key] = float(val)
        except ValueError as exc:
            raise ParamsError(f"{key}: cannot parse {val!r} ({exc})") from None
    values.update(overrides)
    try:
        return Params(**values)
    except TypeError as exc:
        raise ParamsError(str(exc)) from None


def load_params_file(path: str | Path, **overrides) -> Params:
    return load_params(Path(path).read_text(), **overrides)


def dump_params(p: Params) -> str:
    lines = []
    for f in fields(Params):
        v = getattr(p, f.name)
        text = _format_kernel(v) if f.name in _KERNELS else repr(v)
        lines.append(f"{f.name}={text}")
    return "\n".join(lines) + "\n"
