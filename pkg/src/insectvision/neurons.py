"""Medulla and lobula layers plus the spike encoder.

LGMD1/LGMD2 use ON/OFF summation cells with delayed lateral spread; the DSNs
use horizontal Reichardt ensembles on the same delayed signals.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .lamina import OnOffField, lowpass_alpha
from .params import Params


@dataclass
class MedullaState:
    dprime_on: np.ndarray
    dprime_off: np.ndarray

    @classmethod
    def create(cls, shape: tuple[int, int]) -> "MedullaState":
        return cls(np.zeros(shape), np.zeros(shape))


@dataclass(frozen=True)
class NeuronFrameOutput:
    u_lgmd1: float = 0.5
    u_lgmd2: float = 0.5
    u_dsn: float = 0.0
    spikes_lgmd1: int = 0
    spikes_lgmd2: int = 0
    spikes_dsn_r: int = 0
    spikes_dsn_l: int = 0

    @property
    def lgmd_spikes(self) -> int:
        return self.spikes_lgmd1 + self.spikes_lgmd2

    @property
    def dsn_spikes(self) -> int:
        return self.spikes_dsn_r + self.spikes_dsn_l


def delay_fields(f: OnOffField, state: MedullaState, dt_ms: float, tau_s: float) -> OnOffField:
    """Low-pass both channels with time constant ``tau_s``; returns D'."""
    if dt_ms <= 0 or tau_s < 0:
        raise ValueError("dt_ms must be > 0 and tau_s >= 0")
    alpha = lowpass_alpha(dt_ms, tau_s)
    state.dprime_on = state.dprime_on + alpha * (f.on - state.dprime_on)
    state.dprime_off = state.dprime_off + alpha * (f.off - state.dprime_off)
    return OnOffField(state.dprime_on, state.dprime_off)


def lateral_spread(field: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Replicate-border convolution accumulated tap by tap in row-major order.

    The fixed summation order makes the result reproducible bit-for-bit
    against a plain per-cell loop over the same taps.
    """
    k = np.asarray(kernel, dtype=float)[::-1, ::-1]
    r = k.shape[0] // 2
    h, w = field.shape
    padded = np.pad(field, r, mode="edge")
    out = np.zeros_like(field, dtype=float)
    for dy in range(k.shape[0]):
        for dx in range(k.shape[1]):
            if k[dy, dx] != 0.0:
                out += k[dy, dx] * padded[dy:dy + h, dx:dx + w]
    return out


def lgmd_medulla(f: OnOffField, dprime: OnOffField, params: Params) -> OnOffField:
    """ON and OFF summation cells, each clamped at zero."""
    spread_on = lateral_spread(dprime.on, params.kernel_l)
    spread_off = lateral_spread(dprime.off, params.kernel_l)
    s_on = np.maximum(f.on - params.w1 * spread_on, 0.0)
    s_off = np.maximum(spread_off - params.w2 * f.off, 0.0)
    return OnOffField(s_on, s_off)


def lgmd_combine(s: OnOffField, theta1: float, theta2: float, theta3: float) -> np.ndarray:
    out = theta1 * s.on + theta2 * s.off
    if theta3:
        out = out + theta3 * s.on * s.off
    return out


def _reichardt(dp: np.ndarray, f: np.ndarray, d: int, n_c: int) -> np.ndarray:
    out = np.zeros_like(f)
    width = f.shape[1]
    for i in range(d, d * n_c + 1, d):
        if i >= width:
            break
        out[:, : width - i] += dp[:, : width - i] * f[:, i:] - dp[:, i:] * f[:, : width - i]
    return out


def dsn_medulla(f: OnOffField, dprime: OnOffField, params: Params) -> np.ndarray:
    """Signed horizontal motion energy; positive for rightward motion."""
    return _reichardt(dprime.on, f.on, params.d, params.n_c) + _reichardt(
        dprime.off, f.off, params.d, params.n_c
    )


_BELOW_ONE = math.nextafter(1.0, 0.0)


def lobula_activate(field, n: int, k_sig: float, delta_c: float = 0.0, signed: bool = False) -> float:
    """Sigmoid membrane potential of a spatially summed field.

    ``field`` may be the field itself or its precomputed sum.  Unsigned
    (LGMDs) lies in [0.5, 1) when ``delta_c`` is 0; signed (DSNs) is the odd
    extension rescaled to (-1, 1).
    """
    x = float(np.sum(field))
    z = abs(x) / (n * k_sig)
    sig = min(1.0 / (1.0 + math.exp(-z)), _BELOW_ONE)
    if not signed:
        return sig - delta_c
    return math.copysign(2.0 * (sig - 0.5), x) if x != 0 else 0.0


def spike_encode(u: float, k_sp: float, t_sp: float) -> int:
    return int(math.floor(math.exp(k_sp * (u - t_sp))))
