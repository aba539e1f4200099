"""Throughput benchmark for the full perception pipeline."""
from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .params import Params
from .pipeline import Model, VisionPipeline


@dataclass(frozen=True)
class BenchReport:
    frames: int
    seconds: float
    width: int
    height: int

    @property
    def fps(self) -> float:
        return self.frames / self.seconds

    def __str__(self) -> str:
        return (f"{self.frames} frames of {self.width}x{self.height} in {self.seconds:.2f} s "
                f"-> {self.fps:.1f} fps")


def synthetic_frames(width: int, height: int, n: int, seed: int = 0) -> list[np.ndarray]:
    """A drifting bar over noise: every layer has non-trivial work to do."""
    rng = np.random.default_rng(seed)
    base = rng.integers(60, 200, size=(height, width), dtype=np.uint8)
    frames = []
    for k in range(n):
        f = np.roll(base, k, axis=1).copy()
        x0 = (3 * k) % width
        f[:, x0:x0 + max(2, width // 10)] = 30
        frames.append(f)
    return frames


def run_bench(params: Params, seconds: float, scale: float = 1.0,
              model: Model | str = Model.FULL) -> BenchReport:
    """Run the pipeline flat out for at least ``seconds`` of wall time.

    ``scale`` multiplies both image dimensions (1.0 is the camera's native
    resolution).
    """
    if not seconds > 0:
        raise ValueError("benchmark duration must be > 0")
    if not scale > 0:
        raise ValueError("scale must be > 0")
    w = max(8, int(round(params.frame_w * scale)))
    h = max(8, int(round(params.frame_h * scale)))
    pipe = VisionPipeline(params, model, shape=(h, w))
    frames = synthetic_frames(w, h, 64)
    n = 0
    start = time.perf_counter()
    elapsed = 0.0
    while elapsed < seconds:
        pipe.step(frames[n % len(frames)])
        n += 1
        elapsed = time.perf_counter() - start
    return BenchReport(n, elapsed, w, h)
