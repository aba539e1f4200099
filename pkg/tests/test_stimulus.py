import math

import numpy as np
import pytest

from insectvision import pgm, stimulus
from insectvision.params import Params
from insectvision.stimulus import CourseKind


@pytest.fixture(scope="module")
def p():
    return Params()


def test_recession_is_time_reversed_looming(p):
    loom = stimulus.gen_course("looming", 8.0, p, phase=0.3)
    rec = stimulus.gen_course("recession", 8.0, p, phase=0.3)
    assert len(loom) == len(rec)
    for a, b in zip(loom.frames, reversed(rec.frames)):
        assert np.array_equal(a, b)


def test_trans_l_is_mirror_of_trans_r(p):
    r = stimulus.gen_course("trans_r", 12.0, p, phase=0.1)
    l = stimulus.gen_course("trans_l", 12.0, p, phase=0.1)
    for a, b in zip(r.frames, l.frames):
        assert np.array_equal(a[:, ::-1], b)


def test_frame_count_covers_the_trajectory(p):
    c = stimulus.gen_course("looming", 6.0, p)
    length = p.course_start_distance
    step = 6.0 / p.fps
    # a frame at t = 0 and every 1/fps until arrival
    assert len(c) == math.ceil(length / step - 1e-9) + 1


def test_looming_grows_and_recession_shrinks(p):
    loom = stimulus.gen_course("looming", 12.0, p)
    w = loom.target_width_px
    assert np.all(np.diff(w) >= -1e-9)
    dark = [int((f < 80).sum()) for f in loom.frames]
    assert all(b >= a for a, b in zip(dark, dark[1:]))
    rec = stimulus.gen_course("recession", 12.0, p)
    assert np.all(np.diff(rec.target_width_px) <= 1e-9)


def test_translation_crosses_left_to_right(p):
    c = stimulus.gen_course("trans_r", 8.0, p)
    cols = []
    for f in c.frames:
        dark = np.flatnonzero(f[p.frame_h // 2] < 80)
        if dark.size:
            cols.append(dark.mean())
    assert len(cols) > 5
    assert all(b >= a for a, b in zip(cols, cols[1:]))


def test_angular_course_and_limits(p):
    c = stimulus.gen_course("angular", 8.0, p, angle_deg=30.0)
    assert c.label == "angular+30"
    with pytest.raises(ValueError):
        stimulus.gen_course("angular", 8.0, p, angle_deg=40.0)
    with pytest.raises(ValueError):
        stimulus.gen_course("looming", 0.0, p)
    with pytest.raises(ValueError):
        stimulus.gen_course("looming", 8.0, p, start_distance=-5.0)


def test_repetitions_are_seeded(p):
    a = stimulus.repetition_phases(3, 10, p)
    assert a == stimulus.repetition_phases(3, 10, p)
    assert len(set(a)) == 10
    assert all(0 <= v < p.texture_period for v in a)
    assert stimulus.SPEED_GRID == (3.0, 6.0, 8.0, 12.0)
    assert stimulus.REPETITIONS == 10


def test_write_and_read_course(tmp_path, p):
    c = stimulus.gen_course("trans_l", 12.0, p)
    c.seed = 4
    out = stimulus.write_course(c, tmp_path / "course", p)
    files = pgm.list_frames(out)
    assert len(files) == len(c)
    assert files[0].name == "frame_00000.pgm"
    assert files[0].read_bytes().startswith(b"P5")
    back = stimulus.course_from_dir(out, p)
    assert all(np.array_equal(a, b) for a, b in zip(back, c.frames))
    man = stimulus.read_manifest(out / "manifest.txt")
    assert man["kind"] == "trans_l"
    assert int(man["frame_count"]) == len(c)
    assert float(man["speed"]) == 12.0 and float(man["fps"]) == p.fps
    assert man["seed"] == "4"


def test_reading_bad_frames(tmp_path, p):
    with pytest.raises(FileNotFoundError):
        pgm.list_frames(tmp_path)
    pgm.write_pgm(tmp_path / "a.pgm", np.zeros((5, 5), np.uint8))
    with pytest.raises(ValueError, match="shape"):
        stimulus.course_from_dir(tmp_path, p)
    (tmp_path / "b.pgm").write_bytes(b"garbage")
    with pytest.raises(ValueError, match="unreadable"):
        pgm.read_sequence(tmp_path)
    with pytest.raises(ValueError):
        pgm.write_pgm(tmp_path / "c.pgm", np.zeros((2, 2)))


def test_course_kinds():
    assert {k.value for k in CourseKind} == {"looming", "recession", "trans_r", "trans_l", "angular"}
