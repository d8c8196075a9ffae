"""Leader trajectories and follower reference generation."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from formationsim.errors import ConfigError, InvalidInputError
from formationsim.formation import (FormationOffset, LeaderPose, WaypointPath,
                                    follower_reference, load_waypoints,
                                    spiral_leader, waypoint_leader)


def make_leader(position, heading, velocity=(0, 0, 0), acceleration=(0, 0, 0),
                heading_rate=0.0):
    return LeaderPose(position=np.array(position, dtype=float),
                      velocity=np.array(velocity, dtype=float),
                      acceleration=np.array(acceleration, dtype=float),
                      heading=heading, heading_rate=heading_rate)


class TestFollowerReference:
    def test_identity_rotation(self):
        ref = follower_reference(make_leader((0, 0, 0), 0.0), FormationOffset((2, 0, 0)))
        np.testing.assert_allclose(ref.position, [2, 0, 0], atol=1e-12)
        assert ref.yaw == 0.0

    def test_quarter_turn(self):
        # oracle: Rot_z(pi/2) @ (2,0,0) = (0,2,0)
        ref = follower_reference(make_leader((1, 1, 1), np.pi / 2), FormationOffset((2, 0, 0)))
        np.testing.assert_allclose(ref.position, [1, 3, 1], atol=1e-12)
        assert ref.yaw == pytest.approx(np.pi / 2)

    def test_z_offset_invariant_under_rotation(self):
        for psi in (0.0, 0.7, 2.3, -1.1):
            ref = follower_reference(make_leader((4, 5, 6), psi), FormationOffset((0, 0, -2)))
            np.testing.assert_allclose(ref.position, [4, 5, 4], atol=1e-12)

    def test_zero_offset_returns_leader(self):
        leader = make_leader((1, 2, 3), 0.9, velocity=(0.1, 0.2, 0.3),
                             acceleration=(0.01, 0.02, 0.03), heading_rate=0.4)
        ref = follower_reference(leader, FormationOffset((0, 0, 0)))
        np.testing.assert_allclose(ref.position, leader.position, atol=1e-15)
        np.testing.assert_allclose(ref.velocity, leader.velocity, atol=1e-15)
        np.testing.assert_allclose(ref.acceleration, leader.acceleration, atol=1e-15)

    @given(st.floats(-10, 10), st.floats(-10, 10), st.floats(-10, 10),
           st.floats(-6, 6), st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
    @settings(max_examples=300)
    def test_rigidity(self, x, y, z, psi, dx, dy, dz):
        leader = make_leader((x, y, z), psi)
        ref = follower_reference(leader, FormationOffset((dx, dy, dz)))
        assert np.linalg.norm(ref.position - leader.position) == pytest.approx(
            np.linalg.norm([dx, dy, dz]), abs=1e-12)

    def test_velocity_matches_finite_difference(self):
        # central differences of the reference position along the spiral
        offset = FormationOffset((2.0, -1.0, 0.5))
        dt = 1e-4
        for t in (0.5, 3.0, 11.0):
            refs = [follower_reference(spiral_leader(t + k * dt), offset)
                    for k in (-1, 0, 1)]
            fd_vel = (refs[2].position - refs[0].position) / (2 * dt)
            np.testing.assert_allclose(refs[1].velocity, fd_vel, atol=1e-5)
            fd_acc = (refs[2].position - 2 * refs[1].position + refs[0].position) / dt ** 2
            np.testing.assert_allclose(refs[1].acceleration, fd_acc, atol=1e-4)

    def test_rejects_nonfinite_leader(self):
        with pytest.raises(InvalidInputError):
            make_leader((np.nan, 0, 0), 0.0)


class TestSpiralLeader:
    def test_start(self):
        pose = spiral_leader(0.0)
        np.testing.assert_allclose(pose.position, [5, 0, 5], atol=1e-12)
        assert pose.heading == pytest.approx(np.pi / 2)

    def test_half_revolution(self):
        pose = spiral_leader(10.0)
        np.testing.assert_allclose(pose.position, [-5, 0, 10], atol=1e-9)
        assert pose.heading == pytest.approx(3 * np.pi / 2)

    def test_full_revolution(self):
        pose = spiral_leader(20.0)
        np.testing.assert_allclose(pose.position, [5, 0, 15], atol=1e-9)
        assert pose.heading == pytest.approx(5 * np.pi / 2)  # unwrapped

    def test_radius_invariant(self):
        for t in np.linspace(0.0, 40.0, 101):
            x, y, _ = spiral_leader(float(t)).position
            assert x * x + y * y == pytest.approx(25.0, abs=1e-9)

    def test_negative_time(self):
        with pytest.raises(InvalidInputError):
            spiral_leader(-0.1)


class TestWaypointLeader:
    def straight_path(self):
        return WaypointPath(waypoints=np.array([[0.0, 0, 0], [10, 0, 0]]),
                            headings=np.array([0.0, 0.0]), speed=1.0)

    def test_midpoint(self):
        pose = waypoint_leader(self.straight_path(), 5.0)
        np.testing.assert_allclose(pose.position, [5, 0, 0], atol=1e-12)
        np.testing.assert_allclose(pose.velocity, [1, 0, 0], atol=1e-12)

    def test_terminal_hold(self):
        pose = waypoint_leader(self.straight_path(), 99.0)
        np.testing.assert_allclose(pose.position, [10, 0, 0], atol=1e-12)
        np.testing.assert_allclose(pose.velocity, 0.0, atol=1e-12)

    def test_vertical_segment(self):
        path = WaypointPath(waypoints=np.array([[0.0, 0, 0], [0, 0, 10]]),
                            headings=np.array([0.0, 0.0]), speed=2.0)
        pose = waypoint_leader(path, 2.5)
        np.testing.assert_allclose(pose.position, [0, 0, 5], atol=1e-12)

    def test_heading_shortest_angle(self):
        # 3.0 -> -3.0 rad should pass through +/-pi, not through 0
        path = WaypointPath(waypoints=np.array([[0.0, 0, 0], [10, 0, 0]]),
                            headings=np.array([3.0, -3.0]), speed=1.0)
        pose = waypoint_leader(path, 5.0)
        assert pose.heading == pytest.approx(3.0 + 0.5 * (2 * np.pi - 6.0))

    def test_duplicate_waypoints_rejected(self):
        with pytest.raises(ConfigError):
            WaypointPath(waypoints=np.array([[0.0, 0, 0], [0, 0, 0], [1, 0, 0]]),
                         headings=np.zeros(3), speed=1.0)

    def test_single_waypoint_rejected(self):
        with pytest.raises(ConfigError):
            WaypointPath(waypoints=np.array([[0.0, 0, 0]]),
                         headings=np.zeros(1), speed=1.0)


def test_load_waypoints(tmp_path):
    f = tmp_path / "path.txt"
    f.write_text("# inspection pass\n0 0 8 0\n10 0 8 0\n10 5 9 1.57\n")
    path = load_waypoints(f, speed=2.0)
    assert path.waypoints.shape == (3, 3)
    assert path.total_length == pytest.approx(10.0 + np.hypot(5.0, 1.0))
    pose = waypoint_leader(path, 1.0)
    np.testing.assert_allclose(pose.position, [2, 0, 8], atol=1e-12)


def test_load_waypoints_bad_columns(tmp_path):
    f = tmp_path / "bad.txt"
    f.write_text("0 0 8\n1 0 8\n")
    with pytest.raises(ConfigError):
        load_waypoints(f, speed=1.0)
