import math

import numpy as np
from hypothesis import given, strategies as st

from insectvision.arena.render import camera_origin, perimeter_arclength, render_pov
from insectvision.arena.world import ArenaWorld, RobotPose
from insectvision.params import Params

PLAIN = Params(lum_wall_dark=200, lum_wall_light=200)


def _viewer(p):
    return RobotPose(0, p.arena_w / 2, p.arena_h / 2, math.pi / 2)


def _target_ahead(p, viewer, dist_to_centre):
    o = camera_origin(viewer, p)
    return RobotPose(1, o[0] + dist_to_centre * math.cos(viewer.heading),
                     o[1] + dist_to_centre * math.sin(viewer.heading), 0.0)


def test_frame_format(params):
    v = _viewer(params)
    img = render_pov(ArenaWorld.empty(params, [v]), v, params)
    assert img.shape == (72, 99) and img.dtype == np.uint8
    assert img[0, 0] == params.lum_ceiling and img[-1, 0] == params.lum_floor


def test_empty_arena_symmetric_with_plain_walls():
    p = PLAIN
    v = _viewer(p)
    img = render_pov(ArenaWorld.empty(p, [v]), v, p, as_float=True)
    np.testing.assert_allclose(img, img[:, ::-1], atol=1e-9)


def _extent(p, dist, v=None):
    v = v or _viewer(p)
    img = render_pov(ArenaWorld.empty(p, [v, _target_ahead(p, v, dist)]), v, p, as_float=True)
    dark = np.clip((200.0 - img) / (200.0 - p.lum_robot), 0.0, 1.0)
    width = dark[p.frame_h // 2].sum()
    height = dark[:, p.frame_w // 2].sum()
    return width, height


def test_projection_matches_pinhole_oracle():
    p = PLAIN
    f, r = p.focal_px, p.robot_radius
    for d in (10.0, 20.0):
        width, height = _extent(p, d)
        exp_w = 2 * f * math.tan(math.asin(r / d))
        exp_h = f * p.robot_height / (d - r)
        assert abs(width - exp_w) < 1.0
        assert abs(height - exp_h) < 1.0


def test_halving_distance_doubles_height_and_width():
    p = PLAIN
    # look down the long axis so a 40 cm target still stands in front of the wall
    v = RobotPose(0, 5.0, p.arena_h / 2, 0.0)
    w1, h1 = _extent(p, 40.0, v)
    w2, h2 = _extent(p, 20.0, v)
    assert abs(h2 - 2 * h1) < 1.0
    assert abs(w2 - 2 * w1) < 1.0


def test_height_non_increasing_with_distance():
    p = PLAIN
    heights = [_extent(p, d)[1] for d in np.linspace(4.0, 25.0, 12)]
    assert all(b <= a + 1e-9 for a, b in zip(heights, heights[1:]))


def test_target_outside_fov_is_invisible(params):
    v = _viewer(params)
    behind = RobotPose(1, v.x, v.y - 10.0, 0.0)
    a = render_pov(ArenaWorld.empty(params, [v]), v, params)
    b = render_pov(ArenaWorld.empty(params, [v, behind]), v, params)
    assert np.array_equal(a, b)


def test_robots_render_darker_than_background(params):
    v = _viewer(params)
    img = render_pov(ArenaWorld.empty(params, [v, _target_ahead(params, v, 6.0)]), v, params)
    assert img[36, 49] == params.lum_robot
    assert params.lum_robot < min(params.lum_wall_dark, params.lum_floor)


def test_nearest_robot_occludes(params):
    v = _viewer(params)
    near = _target_ahead(params, v, 6.0)
    far = RobotPose(2, near.x, near.y + 8.0, 0.0)
    alone = render_pov(ArenaWorld.empty(params, [v, near]), v, params)
    both = render_pov(ArenaWorld.empty(params, [v, near, far]), v, params)
    assert np.array_equal(alone[:, 40:60], both[:, 40:60])


@given(st.floats(0, 70), st.floats(0, 55))
def test_perimeter_arclength_ranges(x, y):
    w, h = 70.0, 55.0
    pts = np.array([[x, 0.0], [w, y], [x, h], [0.0, y]])
    s = perimeter_arclength(pts[:, 0], pts[:, 1], w, h)
    assert abs(s[0] - x) < 1e-9
    assert 0 <= s.min() and s.max() <= 2 * (w + h) + 1e-9
