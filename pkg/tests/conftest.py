import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from insectvision.params import Params

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


@pytest.fixture(scope="session")
def params() -> Params:
    return Params()


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


def convolve_replicate_loops(field: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    """Reference 2-D convolution with replicate-edge padding, written as
    explicit loops (kernels here are symmetric, so flipping is moot but done
    anyway)."""
    kernel = np.asarray(kernel, dtype=float)[::-1, ::-1]
    h, w = field.shape
    r = kernel.shape[0] // 2
    out = np.zeros((h, w))
    for y in range(h):
        for x in range(w):
            acc = 0.0
            for dy in range(-r, r + 1):
                for dx in range(-r, r + 1):
                    yy = min(max(y + dy, 0), h - 1)
                    xx = min(max(x + dx, 0), w - 1)
                    acc += kernel[dy + r, dx + r] * field[yy, xx]
            out[y, x] = acc
    return out


# -- acceptance reporting ----------------------------------------------------

ACCEPTANCE: dict[int, str] = {}


def record_criterion(number: int, title: str, passed: bool, detail: str) -> None:
    ACCEPTANCE[number] = f"criterion {number:2d} [{'PASS' if passed else 'FAIL'}] {title}: {detail}"


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[n])
