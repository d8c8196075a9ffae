"""Virtual-leader trajectories and per-follower reference generation.

A follower's desired pose is the leader pose plus its formation offset
rotated into the leader's heading frame. Desired velocity/acceleration
come from analytic differentiation of that rotation, not from numeric
differencing.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, InvalidInputError
from .dynamics import angle_diff


@dataclass
class LeaderPose:
    """Pose, twist and acceleration of the virtual leader.

    Heading is kept continuous (unwrapped) so followers can track a
    monotonically increasing yaw without jumps.
    """

    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    heading: float
    heading_rate: float

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float)
        self.velocity = np.asarray(self.velocity, dtype=float)
        self.acceleration = np.asarray(self.acceleration, dtype=float)
        vals = np.concatenate([self.position, self.velocity, self.acceleration,
                               [self.heading, self.heading_rate]])
        if not np.all(np.isfinite(vals)):
            raise InvalidInputError("leader pose must be finite")


@dataclass(frozen=True)
class FormationOffset:
    """Desired displacement from the leader, in the leader's heading frame."""

    delta: tuple[float, float, float]

    def as_array(self) -> np.ndarray:
        return np.array(self.delta, dtype=float)


@dataclass
class FollowerReference:
    """Desired position, velocity, acceleration and yaw for one follower."""

    position: np.ndarray
    velocity: np.ndarray
    acceleration: np.ndarray
    yaw: float
    yaw_rate: float


def rot_z(psi: float) -> np.ndarray:
    c, s = np.cos(psi), np.sin(psi)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def follower_reference(leader: LeaderPose, offset: FormationOffset) -> FollowerReference:
    """Desired pose of a follower given the leader pose and its offset."""
    delta = offset.as_array()
    psi, psid = leader.heading, leader.heading_rate
    r = rot_z(psi)
    # d/dpsi of Rot_z, used for the analytic velocity/acceleration
    c, s = np.cos(psi), np.sin(psi)
    dr = np.array([[-s, -c, 0.0], [c, -s, 0.0], [0.0, 0.0, 0.0]])
    ddr = np.array([[-c, s, 0.0], [-s, -c, 0.0], [0.0, 0.0, 0.0]])
    return FollowerReference(
        position=r @ delta + leader.position,
        velocity=psid * (dr @ delta) + leader.velocity,
        acceleration=psid ** 2 * (ddr @ delta) + leader.acceleration,
        yaw=psi,
        yaw_rate=psid,
    )


def spiral_leader(t: float) -> LeaderPose:
    """Rising-spiral leader trajectory: radius 5 m, 20 s period, 0.5 m/s climb."""
    if t < 0.0:
        raise InvalidInputError("t must be non-negative")
    w = 2.0 * np.pi / 20.0
    return LeaderPose(
        position=np.array([5.0 * np.cos(w * t), 5.0 * np.sin(w * t), 0.5 * t + 5.0]),
        velocity=np.array([-5.0 * w * np.sin(w * t), 5.0 * w * np.cos(w * t), 0.5]),
        acceleration=np.array([-5.0 * w * w * np.cos(w * t), -5.0 * w * w * np.sin(w * t), 0.0]),
        heading=w * t + np.pi / 2.0,
        heading_rate=w,
    )


@dataclass
class WaypointPath:
    """Piecewise-linear path flown at constant speed with interpolated heading."""

    waypoints: np.ndarray        # (n, 3) positions
    headings: np.ndarray         # (n,) yaw at each waypoint
    speed: float
    _cum: np.ndarray = field(init=False, repr=False)
    _uheadings: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        self.waypoints = np.asarray(self.waypoints, dtype=float)
        self.headings = np.asarray(self.headings, dtype=float)
        if self.waypoints.ndim != 2 or self.waypoints.shape[1] != 3:
            raise ConfigError("waypoints must be an (n, 3) array")
        if self.waypoints.shape[0] < 2:
            raise ConfigError("at least two waypoints are required")
        if self.headings.shape != (self.waypoints.shape[0],):
            raise ConfigError("one heading per waypoint is required")
        if not self.speed > 0.0:
            raise ConfigError("speed must be positive")
        seg = np.diff(self.waypoints, axis=0)
        lengths = np.linalg.norm(seg, axis=1)
        if np.any(lengths == 0.0):
            raise ConfigError("duplicate consecutive waypoints")
        self._cum = np.concatenate([[0.0], np.cumsum(lengths)])
        # unwrap headings by shortest-angle steps so interpolation never jumps
        uh = [float(self.headings[0])]
        for h in self.headings[1:]:
            uh.append(uh[-1] + angle_diff(float(h), uh[-1]))
        self._uheadings = np.array(uh)

    @property
    def total_length(self) -> float:
        return float(self._cum[-1])


def waypoint_leader(path: WaypointPath, t: float) -> LeaderPose:
    """Leader pose along a waypoint path at time ``t``.

    Holds the final pose (zero velocity) after the path is exhausted.
    Acceleration is zero inside segments; heading interpolates linearly
    in arc length.
    """
    if t < 0.0:
        raise InvalidInputError("t must be non-negative")
    dist = path.speed * t
    if dist >= path.total_length:
        return LeaderPose(
            position=path.waypoints[-1].copy(),
            velocity=np.zeros(3),
            acceleration=np.zeros(3),
            heading=float(path._uheadings[-1]),
            heading_rate=0.0,
        )
    k = int(np.searchsorted(path._cum, dist, side="right")) - 1
    seg_len = path._cum[k + 1] - path._cum[k]
    frac = (dist - path._cum[k]) / seg_len
    direction = (path.waypoints[k + 1] - path.waypoints[k]) / seg_len
    h0, h1 = path._uheadings[k], path._uheadings[k + 1]
    return LeaderPose(
        position=path.waypoints[k] + frac * (path.waypoints[k + 1] - path.waypoints[k]),
        velocity=direction * path.speed,
        acceleration=np.zeros(3),
        heading=float(h0 + frac * (h1 - h0)),
        heading_rate=float((h1 - h0) / seg_len * path.speed),
    )


def load_waypoints(path: str | Path, speed: float) -> WaypointPath:
    """Load a waypoint table (one ``x y z yaw`` line per waypoint)."""
    rows = []
    for line in Path(path).read_text().splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 4:
            raise ConfigError(f"waypoint line needs 4 columns, got: {line!r}")
        rows.append([float(p) for p in parts])
    if len(rows) < 2:
        raise ConfigError("waypoint file must contain at least two waypoints")
    arr = np.array(rows)
    return WaypointPath(waypoints=arr[:, 0:3], headings=arr[:, 3], speed=speed)
