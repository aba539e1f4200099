import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from insectvision.arena.world import (
    ArenaWorld, RobotPose, blocked_ids, integrate_pose, place_robots, step_kinematics,
)
from insectvision.motor import WheelPowers
from insectvision.params import Params


def test_straight_step(params):
    pose = integrate_pose(RobotPose(0, 10.0, 10.0, math.pi / 3), WheelPowers(10, 10), 0.1,
                          params.track_width)
    assert abs(math.hypot(pose.x - 10, pose.y - 10) - 1.0) < 1e-12
    assert pose.heading == math.pi / 3


def test_in_place_rotation(params):
    pose = integrate_pose(RobotPose(0, 10.0, 10.0, 0.0), WheelPowers(5, -5), 0.1, params.track_width)
    assert (pose.x, pose.y) == (10.0, 10.0)
    # right wheel forward turns counter-clockwise
    assert abs(pose.heading - 10.0 / params.track_width * 0.1) < 1e-12


@given(st.floats(-35, 35), st.floats(-35, 35), st.floats(-math.pi, math.pi))
def test_arc_integration_matches_fine_euler(pr, pl, h0):
    tw = 3.6
    exact = integrate_pose(RobotPose(0, 0.0, 0.0, h0), WheelPowers(pr, pl), 0.2, tw)
    x, y, h = 0.0, 0.0, h0
    v, w = 0.5 * (pr + pl), (pr - pl) / tw
    n = 4000
    for _ in range(n):
        hm = h + 0.5 * w * 0.2 / n
        x += v * math.cos(hm) * 0.2 / n
        y += v * math.sin(hm) * 0.2 / n
        h += w * 0.2 / n
    assert abs(exact.x - x) < 1e-6 and abs(exact.y - y) < 1e-6
    assert abs(math.remainder(exact.heading - h, 2 * math.pi)) < 1e-9


def test_drive_into_wall_clamps_and_logs_once(params):
    r = params.robot_radius
    world = ArenaWorld.empty(params, [RobotPose(0, params.arena_w - r - 0.5, 20.0, 0.0)])
    contacts = []
    for _ in range(20):
        world = step_kinematics(world, {0: WheelPowers(10, 10)}, params.dt_s, params)
        contacts.extend(world.new_contacts)
        assert world.robots[0].x <= params.arena_w - r + 1e-12
    assert abs(world.robots[0].x - (params.arena_w - r)) < 1e-12
    assert len(contacts) == 1 and contacts[0].other_id is None
    assert blocked_ids(world, params) == {0}


def test_robot_robot_contact_stops_at_touch(params):
    r = params.robot_radius
    a = RobotPose(0, 20.0, 20.0, 0.0)
    b = RobotPose(1, 20.0 + 2 * r + 1.0, 20.0, math.pi)
    world = ArenaWorld.empty(params, [a, b])
    events = []
    for _ in range(10):
        world = step_kinematics(world, {0: WheelPowers(10, 10), 1: WheelPowers(10, 10)},
                                params.dt_s, params)
        events.extend(world.new_contacts)
    ra, rb = world.robots
    assert abs(math.hypot(ra.x - rb.x, ra.y - rb.y) - 2 * r) < 1e-9
    assert [(e.robot_id, e.other_id) for e in events] == [(0, 1)]
    assert blocked_ids(world, params) == {0, 1}


def test_touching_but_facing_away_is_not_blocked(params):
    r = params.robot_radius
    world = ArenaWorld.empty(params, [RobotPose(0, r, 20.0, 0.0)])
    assert blocked_ids(world, params) == set()
    world = ArenaWorld.empty(params, [RobotPose(0, r, 20.0, math.pi)])
    assert blocked_ids(world, params) == {0}


@given(st.lists(st.tuples(st.floats(-35, 35), st.floats(-35, 35)), min_size=4, max_size=4),
       st.integers(0, 1000))
def test_no_overlap_and_in_bounds(powers, seed):
    p = Params()
    world = ArenaWorld.empty(p, place_robots(p, 4, np.random.default_rng(seed)))
    pw = {i: WheelPowers(*powers[i]) for i in range(4)}
    r = p.robot_radius
    for _ in range(30):
        world = step_kinematics(world, pw, p.dt_s, p)
        for i, a in enumerate(world.robots):
            assert r - 1e-9 <= a.x <= p.arena_w - r + 1e-9
            assert r - 1e-9 <= a.y <= p.arena_h - r + 1e-9
            for b in world.robots[i + 1:]:
                assert math.hypot(a.x - b.x, a.y - b.y) >= 2 * r - 1e-9


def test_step_rejects_bad_dt(params):
    with pytest.raises(ValueError):
        step_kinematics(ArenaWorld.empty(params), {}, 0.0, params)


def test_place_robots(params):
    poses = place_robots(params, 7, np.random.default_rng(3))
    assert [p.id for p in poses] == list(range(7))
    for i, a in enumerate(poses):
        for b in poses[i + 1:]:
            assert math.hypot(a.x - b.x, a.y - b.y) >= 2 * params.robot_radius + 4.0
    with pytest.raises(ValueError):
        place_robots(params, 0, np.random.default_rng(0))
    with pytest.raises(ValueError, match="capacity"):
        place_robots(params, 10_000, np.random.default_rng(0))


def test_world_texture_period_must_be_positive():
    with pytest.raises(ValueError):
        ArenaWorld(70.0, 55.0, [], texture_period=0.0)
