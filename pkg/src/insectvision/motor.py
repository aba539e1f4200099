"""Differential wheel powers from behaviour state and turning response."""
from __future__ import annotations

from dataclasses import dataclass, replace

from .params import Params
from .recognizer import BehaviorState


@dataclass(frozen=True)
class WheelPowers:
    """Rim speeds in cm/s."""

    p_r: float
    p_l: float


def _clamp(v: float, limit: float) -> float:
    return max(-limit, min(limit, v))


def motor_power(behavior: BehaviorState, tr_prime: float, params: Params) -> WheelPowers:
    if behavior.avoiding:
        s = min(params.avoid_speed, params.max_speed)
        # direction +1 spins counter-clockwise: right wheel forward
        return WheelPowers(behavior.direction * s, -behavior.direction * s)
    base = params.g_v * params.v_i
    turn = params.g_w * tr_prime
    return WheelPowers(
        _clamp(base - turn, params.max_speed),
        _clamp(base + turn, params.max_speed),
    )


def advance_avoidance(
    behavior: BehaviorState, powers: WheelPowers, dt_s: float, params: Params
) -> BehaviorState:
    """Accumulate the commanded in-place rotation of an avoidance turn."""
    if not behavior.avoiding:
        return behavior
    omega = abs(powers.p_r - powers.p_l) / params.track_width
    return replace(behavior, progress=behavior.progress + omega * dt_s)
