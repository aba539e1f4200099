"""Frame-by-frame wiring of the four neurons, the recognizer and the motor
controller for one robot."""
from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from . import lamina, neurons
from .lamina import LaminaState
from .motor import WheelPowers, advance_avoidance, motor_power
from .neurons import MedullaState, NeuronFrameOutput
from .params import Params
from .recognizer import (
    WANDERING,
    Behavior,
    BehaviorState,
    MotionPattern,
    RecognizerState,
    classify,
    step_behavior,
    turning_response,
)


class Model(enum.Enum):
    """Ablation selector: which neurons are wired into the switch."""

    LGMD2 = "lgmd2"
    LGMDS = "lgmds"
    FULL = "full"

    @property
    def lgmd1(self) -> bool:
        return self is not Model.LGMD2

    @property
    def dsn(self) -> bool:
        return self is Model.FULL

    @classmethod
    def parse(cls, value: "str | Model") -> "Model":
        if isinstance(value, Model):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown model {value!r}; choose from {choices}") from None


@dataclass
class LayerTrace:
    """Intermediate signals of the last frame, for inspection and tests."""

    p: np.ndarray
    p_prime: np.ndarray
    f: lamina.OnOffField
    dprime: lamina.OnOffField
    s_lgmd1: np.ndarray | None
    s_lgmd2: np.ndarray
    dsn_field: np.ndarray | None


class VisionPipeline:
    """Retina -> lamina -> medulla -> lobula -> spikes, with per-instance state."""

    def __init__(self, params: Params, model: "Model | str" = Model.FULL,
                 shape: tuple[int, int] | None = None):
        self.params = params
        self.model = Model.parse(model)
        self.shape = shape or (params.frame_h, params.frame_w)
        self.n = self.shape[0] * self.shape[1]
        self.trace: LayerTrace | None = None
        self.reset()

    def reset(self) -> None:
        """Forget all temporal state, as at power-on."""
        self.lamina = LaminaState.create(self.params, self.shape)
        self.medulla = MedullaState.create(self.shape)

    def step(self, frame: np.ndarray) -> NeuronFrameOutput:
        p = self.params
        dt = p.dt_ms
        hp = lamina.retina_highpass(frame, self.lamina)
        bp = lamina.lamina_bandpass(hp, p)
        f = lamina.fdsr_adapt(lamina.rectify_split(bp), self.lamina, dt, p)
        dprime = neurons.delay_fields(f, self.medulla, dt, p.tau_s)

        s = neurons.lgmd_medulla(f, dprime, p)
        s2 = neurons.lgmd_combine(s, p.theta1_lgmd2, p.theta2_lgmd2, p.theta3)
        u2 = neurons.lobula_activate(s2, self.n, p.k_sig, p.delta_c)
        spk2 = neurons.spike_encode(u2, p.k_sp, p.t_sp_lgmd)

        u1, spk1, s1 = 0.5, 0, None
        if self.model.lgmd1:
            s1 = neurons.lgmd_combine(s, p.theta1_lgmd1, p.theta2_lgmd1, p.theta3)
            u1 = neurons.lobula_activate(s1, self.n, p.k_sig, p.delta_c)
            spk1 = neurons.spike_encode(u1, p.k_sp, p.t_sp_lgmd)

        ud, spk_r, spk_l, dsn = 0.0, 0, 0, None
        if self.model.dsn:
            dsn = neurons.dsn_medulla(f, dprime, p)
            ud = neurons.lobula_activate(dsn, self.n, p.k_sig_dsn, signed=True)
            spikes = neurons.spike_encode(abs(ud), p.k_sp, p.t_sp_dsn)
            if ud > 0:
                spk_r = spikes
            elif ud < 0:
                spk_l = spikes

        self.trace = LayerTrace(hp, bp, f, dprime, s1, s2, dsn)
        return NeuronFrameOutput(u1, u2, ud, spk1, spk2, spk_r, spk_l)


@dataclass(frozen=True)
class FrameRecord:
    index: int
    neurons: NeuronFrameOutput
    pattern: MotionPattern
    behavior: BehaviorState
    tr_prime: float
    powers: WheelPowers
    avoid_triggered: bool = False


class RobotBrain:
    """Perception, recognition, behaviour and motor output for one robot."""

    def __init__(self, params: Params, model: "Model | str" = Model.FULL,
                 rng: np.random.Generator | None = None):
        self.params = params
        self.model = Model.parse(model)
        self.pipeline = VisionPipeline(params, self.model)
        self.recognizer = RecognizerState.create(params)
        self.behavior: BehaviorState = WANDERING
        self.rng = rng if rng is not None else np.random.default_rng(params.rng_seed)
        self.frame_index = 0

    def step(self, frame: np.ndarray) -> FrameRecord:
        p = self.params
        out = self.pipeline.step(frame)
        pattern = classify(out, self.recognizer, p)
        # steering is driven only while the DSNs win the competition
        tr = turning_response(out.u_dsn if pattern.is_translation else 0.0,
                              self.recognizer, p.dt_ms, p)
        was_avoiding = self.behavior.avoiding and not self.behavior.turn_done
        behavior = step_behavior(pattern, self.behavior, self.rng, p)
        triggered = behavior.avoiding and not was_avoiding
        powers = motor_power(behavior, tr, p)
        behavior = advance_avoidance(behavior, powers, p.dt_s, p)
        if behavior.turn_done:
            # self-induced motion of the maneuver is not collision evidence
            self.recognizer.clear_window()
        self.behavior = behavior
        rec = FrameRecord(self.frame_index, out, pattern, behavior, tr, powers, triggered)
        self.frame_index += 1
        return rec

    def force_avoid(self) -> None:
        """Start an avoidance turn without visual evidence (bump reflex)."""
        if self.behavior.avoiding and not self.behavior.turn_done:
            return
        direction = 1 if self.rng.random() < 0.5 else -1
        self.behavior = BehaviorState(Behavior.AVOIDING, 0.0, self.params.avoid_turn_radians, direction)
