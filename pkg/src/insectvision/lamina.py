"""Retina and lamina layers shared by all four neurons.

Temporal high-pass photoreceptors, difference-of-kernels band-pass, ON/OFF
half-wave split and the fast-onset / slow-decay adaptation stage.  Fields are
``(height, width)`` float arrays; ``x`` is the column index.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import ndimage

from .params import Params


@dataclass
class OnOffField:
    on: np.ndarray
    off: np.ndarray

    @property
    def shape(self) -> tuple[int, int]:
        return self.on.shape


@dataclass
class LaminaState:
    """Temporal buffers for one pipeline instance.

    ``p_history[0]`` is P(t-1), ``p_history[1]`` is P(t-2), and so on.
    """

    shape: tuple[int, int]
    a_coeffs: np.ndarray
    p_history: list[np.ndarray] = field(default_factory=list)
    prev_luminance: np.ndarray | None = None
    d_on: np.ndarray | None = None
    d_off: np.ndarray | None = None

    @classmethod
    def create(cls, params: Params, shape: tuple[int, int] | None = None) -> "LaminaState":
        shape = shape or (params.frame_h, params.frame_w)
        hist = [np.zeros(shape) for _ in range(params.n_i)]
        return cls(
            shape=shape,
            a_coeffs=params.a_coeffs.copy(),
            p_history=hist,
            d_on=np.zeros(shape),
            d_off=np.zeros(shape),
        )


def retina_highpass(frame: np.ndarray, state: LaminaState) -> np.ndarray:
    """P(t) = L(t) - L(t-1) + sum_i a_i P(t-i); advances ``state``."""
    lum = np.asarray(frame, dtype=float)
    if lum.shape != state.shape:
        raise ValueError(f"frame shape {lum.shape} does not match state {state.shape}")
    prev = lum if state.prev_luminance is None else state.prev_luminance
    p = lum - prev
    for a, past in zip(state.a_coeffs, state.p_history):
        p += a * past
    if state.p_history:
        state.p_history.pop()
        state.p_history.insert(0, p.copy())
    state.prev_luminance = lum
    return p


@lru_cache(maxsize=32)
def _rank1_factors(kernel: tuple) -> tuple[np.ndarray, np.ndarray] | None:
    """Column/row vectors whose outer product is ``kernel``, if it has rank 1."""
    k = np.asarray(kernel, dtype=float)
    u, s, vt = np.linalg.svd(k)
    col, row = u[:, 0] * np.sqrt(s[0]), vt[0] * np.sqrt(s[0])
    if np.abs(np.outer(col, row) - k).max() > 1e-14 * max(1.0, np.abs(k).max()):
        return None
    return col, row


def convolve_nearest(field: np.ndarray, kernel: tuple) -> np.ndarray:
    """2-D convolution with replicate borders; rank-1 kernels run as two 1-D
    passes, which is exact for replicate padding."""
    factors = _rank1_factors(kernel)
    if factors is None:
        return ndimage.convolve(field, np.asarray(kernel, dtype=float), mode="nearest")
    col, row = factors
    tmp = ndimage.convolve1d(field, col, axis=0, mode="nearest")
    return ndimage.convolve1d(tmp, row, axis=1, mode="nearest")


def lamina_bandpass(p: np.ndarray, params: Params) -> np.ndarray:
    """Excitatory minus inhibitory blur (replicate-edge borders)."""
    pe = convolve_nearest(p, params.w_e)
    pi = convolve_nearest(p, params.w_i)
    return pe - pi


def rectify_split(p_prime: np.ndarray) -> OnOffField:
    on = np.maximum(p_prime, 0.0)
    off = np.maximum(-p_prime, 0.0)
    return OnOffField(on, off)


def lowpass_alpha(dt_ms: float, tau_ms: float) -> float:
    return dt_ms / (tau_ms + dt_ms)


def _fdsr_channel(x: np.ndarray, d_prev: np.ndarray, a1: float, a2: float) -> tuple[np.ndarray, np.ndarray]:
    alpha = np.where(x >= d_prev, a1, a2)
    d = d_prev + alpha * (x - d_prev)
    return np.maximum(x - d, 0.0), d


def fdsr_adapt(rectified: OnOffField, state: LaminaState, dt_ms: float, params: Params) -> OnOffField:
    """Subtract a fast-attack / slow-release low-pass copy from each channel."""
    if dt_ms <= 0:
        raise ValueError("dt_ms must be > 0")
    a1 = lowpass_alpha(dt_ms, params.tau1)
    a2 = lowpass_alpha(dt_ms, params.tau2)
    f_on, state.d_on = _fdsr_channel(rectified.on, state.d_on, a1, a2)
    f_off, state.d_off = _fdsr_channel(rectified.off, state.d_off, a1, a2)
    return OnOffField(f_on, f_off)
