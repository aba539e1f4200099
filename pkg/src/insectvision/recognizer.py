"""Switch function between the LGMD and DSN sub-systems, collision
confirmation, turning response and the behaviour state machine."""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .lamina import lowpass_alpha
from .neurons import NeuronFrameOutput
from .params import Params


class MotionPattern(enum.Enum):
    IRRELEVANT = "irrelevant"
    RECESSION = "recession"
    POTENTIAL_LOOMING = "potential_looming"
    LOOMING_CONFIRMED = "looming_confirmed"
    TRANSLATION_RIGHT = "translation_right"
    TRANSLATION_LEFT = "translation_left"

    @property
    def is_translation(self) -> bool:
        return self in (MotionPattern.TRANSLATION_RIGHT, MotionPattern.TRANSLATION_LEFT)

    @property
    def is_looming(self) -> bool:
        return self in (MotionPattern.POTENTIAL_LOOMING, MotionPattern.LOOMING_CONFIRMED)


class Behavior(enum.Enum):
    WANDERING = "wandering"
    TRACKING = "tracking"
    AVOIDING = "avoiding"


@dataclass(frozen=True)
class BehaviorState:
    kind: Behavior = Behavior.WANDERING
    progress: float = 0.0   # radians turned so far (avoiding only)
    target: float = 0.0     # radians to turn (avoiding only)
    direction: int = 0      # +1 counter-clockwise (left), -1 clockwise (right)

    @property
    def avoiding(self) -> bool:
        return self.kind is Behavior.AVOIDING

    @property
    def turn_done(self) -> bool:
        return self.avoiding and self.progress >= self.target

    def __str__(self) -> str:
        return self.kind.value


WANDERING = BehaviorState()
TRACKING = BehaviorState(Behavior.TRACKING)


@dataclass
class RecognizerState:
    n_t: int
    lgmd_spike_window: deque = field(init=False)
    tr_prime: float = 0.0

    def __post_init__(self) -> None:
        self.lgmd_spike_window = deque([0] * (self.n_t + 1), maxlen=self.n_t + 1)

    @classmethod
    def create(cls, params: Params) -> "RecognizerState":
        return cls(params.n_t)

    def clear_window(self) -> None:
        self.lgmd_spike_window.extend([0] * self.lgmd_spike_window.maxlen)


def confirm_collision(state: RecognizerState, params: Params) -> bool:
    return sum(state.lgmd_spike_window) >= params.n_sp


def classify(out: NeuronFrameOutput, state: RecognizerState, params: Params) -> MotionPattern:
    """Per-frame competition; pushes this frame's LGMD evidence into the window."""
    lgmd = out.lgmd_spikes
    dsn = out.dsn_spikes
    if lgmd == 0 and dsn == 0:
        state.lgmd_spike_window.append(0)
        return MotionPattern.IRRELEVANT
    if out.spikes_lgmd1 > 0 and out.spikes_lgmd2 == 0 and dsn == 0:
        state.lgmd_spike_window.append(0)
        return MotionPattern.RECESSION
    if lgmd >= dsn:
        state.lgmd_spike_window.append(lgmd)
        if confirm_collision(state, params):
            return MotionPattern.LOOMING_CONFIRMED
        return MotionPattern.POTENTIAL_LOOMING
    state.lgmd_spike_window.append(0)
    if out.u_dsn > 0:
        return MotionPattern.TRANSLATION_RIGHT
    return MotionPattern.TRANSLATION_LEFT


def turning_response(u_dsn: float, state: RecognizerState, dt_ms: float, params: Params) -> float:
    if dt_ms <= 0:
        raise ValueError("dt_ms must be > 0")
    target = params.sigma1 * u_dsn
    state.tr_prime += lowpass_alpha(dt_ms, params.tau3) * (target - state.tr_prime)
    return state.tr_prime


def step_behavior(
    pattern: MotionPattern,
    current: BehaviorState,
    rng: np.random.Generator,
    params: Params | None = None,
) -> BehaviorState:
    if current.avoiding and not current.turn_done:
        return current
    if pattern is MotionPattern.LOOMING_CONFIRMED:
        turn = params.avoid_turn_radians if params is not None else 3.5
        direction = 1 if rng.random() < 0.5 else -1
        return BehaviorState(Behavior.AVOIDING, 0.0, turn, direction)
    if pattern.is_translation:
        return TRACKING
    return WANDERING
