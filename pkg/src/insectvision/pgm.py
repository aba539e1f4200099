"""Binary portable graymap (P5) frame I/O via Pillow."""
from __future__ import annotations

from pathlib import Path

import numpy as np
from PIL import Image

PATTERN = "*.pgm"


def write_pgm(path: str | Path, frame: np.ndarray) -> None:
    arr = np.asarray(frame)
    if arr.dtype != np.uint8:
        raise ValueError("frames must be 8-bit")
    Image.fromarray(arr, mode="L").save(path, format="PPM")


def read_pgm(path: str | Path) -> np.ndarray:
    with Image.open(path) as im:
        if im.mode != "L":
            raise ValueError(f"{path}: expected 8-bit grayscale, got mode {im.mode}")
        return np.array(im, dtype=np.uint8)


def list_frames(directory: str | Path) -> list[Path]:
    files = sorted(Path(directory).glob(PATTERN))
    if not files:
        raise FileNotFoundError(f"no {PATTERN} frames in {directory}")
    return files


def read_sequence(directory: str | Path, shape: tuple[int, int] | None = None) -> list[np.ndarray]:
    frames = []
    for path in list_frames(directory):
        try:
            arr = read_pgm(path)
        except (OSError, ValueError) as exc:
            raise ValueError(f"unreadable frame {path}: {exc}") from None
        if shape is not None and arr.shape != shape:
            raise ValueError(f"{path}: shape {arr.shape} does not match {shape}")
        frames.append(arr)
    return frames
