import pytest

from insectvision.bench import run_bench, synthetic_frames


def test_bench_reports_native_resolution(params):
    rep = run_bench(params, 0.3)
    assert (rep.width, rep.height) == (99, 72)
    assert rep.frames > 0 and rep.seconds >= 0.3
    assert "fps" in str(rep)


def test_zero_duration_rejected(params):
    with pytest.raises(ValueError):
        run_bench(params, 0.0)
    with pytest.raises(ValueError):
        run_bench(params, 1.0, scale=0.0)


def test_doubled_resolution_is_slower(params):
    base = run_bench(params, 1.0)
    big = run_bench(params, 1.0, scale=2.0)
    assert (big.width, big.height) == (198, 144)
    assert big.fps < base.fps


def test_synthetic_frames_move():
    frames = synthetic_frames(20, 10, 3)
    assert frames[0].shape == (10, 20)
    assert not (frames[0] == frames[1]).all()
