"""Dual-loop flight controllers.

Outer loop: backstepping sliding-mode position control with optional
disturbance compensation. A converter turns the commanded translational
accelerations into desired roll/pitch angles and total thrust, which the
inner backstepping sliding-mode attitude loop tracks. A plain sliding-mode
position law is included as a comparison baseline.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .dynamics import ControlInput, UavParams, UavState, angle_diff, saturate
from .errors import ConfigError, InfeasibleCommandError
from .formation import FollowerReference
from .rbf import RbfConfig, RbfEstimator

CONTROLLER_TOKENS = ("rbf-bsmc", "bsmc", "smc")


def sg(x, eps: float):
    """Continuous saturation: +/-1 outside the boundary layer, x/eps inside."""
    if not (0.0 < eps < 1.0):
        raise ConfigError(f"sg boundary layer must be in (0, 1), got {eps}")
    return np.clip(np.asarray(x, dtype=float) / eps, -1.0, 1.0)


@dataclass(frozen=True)
class PositionGains:
    lam: float = 3.0
    gamma: float = 2.0
    c1: float = 2.0
    c2: float = 2.0
    eps: float = 0.1

    def __post_init__(self):
        if min(self.lam, self.gamma, self.c1, self.c2) <= 0.0:
            raise ConfigError("position gains must be positive")
        if not (0.0 < self.eps < 1.0):
            raise ConfigError("eps must be in (0, 1)")


@dataclass(frozen=True)
class AttitudeGains:
    """Per-axis (roll, pitch, yaw) gains; defaults are identical across axes."""

    lam: tuple[float, float, float] = (5.0, 5.0, 5.0)
    gamma: tuple[float, float, float] = (5.0, 5.0, 5.0)
    c1: tuple[float, float, float] = (2.0, 2.0, 2.0)
    c2: tuple[float, float, float] = (2.0, 2.0, 2.0)
    eps: float = 0.1

    def __post_init__(self):
        for name in ("lam", "gamma", "c1", "c2"):
            if min(getattr(self, name)) <= 0.0:
                raise ConfigError(f"attitude gain {name} must be positive on every axis")
        if not (0.0 < self.eps < 1.0):
            raise ConfigError("eps must be in (0, 1)")


@dataclass
class PositionCommand:
    """Commanded per-unit-mass accelerations and the sliding value that
    produced them (the latter feeds the disturbance estimator)."""

    u: np.ndarray
    s: np.ndarray


def position_sliding_value(state: UavState, ref: FollowerReference,
                           gains: PositionGains) -> np.ndarray:
    """Sliding value of the position loop; independent of the estimate."""
    e = state.position - ref.position
    v = ref.velocity - gains.lam * e
    return gains.gamma * e + (state.velocity - v)


def position_control(state: UavState, ref: FollowerReference, d_hat: np.ndarray,
                     gains: PositionGains) -> PositionCommand:
    """Backstepping sliding-mode position law with disturbance compensation."""
    e = state.position - ref.position
    e_dot = state.velocity - ref.velocity
    v_dot = ref.acceleration - gains.lam * e_dot
    s = position_sliding_value(state, ref, gains)
    u_eq = v_dot - gains.gamma * e_dot - np.asarray(d_hat, dtype=float)
    u_sw = -(gains.c1 * sg(s, gains.eps) + gains.c2 * s)
    return PositionCommand(u=u_eq + u_sw, s=s)


def smc_position_control(state: UavState, ref: FollowerReference,
                         gains: PositionGains) -> PositionCommand:
    """Classical sliding-mode baseline: no backstepping, no compensation."""
    e = state.position - ref.position
    e_dot = state.velocity - ref.velocity
    s = e_dot + gains.gamma * e
    u = ref.acceleration - gains.gamma * e_dot - (gains.c1 * sg(s, gains.eps) + gains.c2 * s)
    return PositionCommand(u=u, s=s)


@dataclass
class AttitudeReference:
    """Inner-loop reference: desired angles, their rates, and total thrust."""

    angles: np.ndarray       # desired (roll, pitch, yaw) [rad]
    rates: np.ndarray        # desired angular rates [rad/s]
    ft: float                # total thrust [N]


def attitude_converter(command: PositionCommand, yaw_d: float,
                       params: UavParams) -> tuple[float, float, float]:
    """Desired roll, pitch and thrust realizing the commanded accelerations
    at the desired yaw. Raises when the vertical command is infeasible."""
    ux, uy, uz = command.u
    g = params.g
    if uz <= -g:
        raise InfeasibleCommandError(f"u_z={uz:.4f} <= -g, thrust would be non-positive")
    c, s = np.cos(yaw_d), np.sin(yaw_d)
    theta_d = float(np.arctan((ux * c + uy * s) / (uz + g)))
    phi_d = float(np.arctan(np.cos(theta_d) * (ux * s - uy * c) / (uz + g)))
    ft = float(params.m * (uz + g) / (np.cos(phi_d) * np.cos(theta_d)))
    return phi_d, theta_d, ft


def attitude_control(state: UavState, ref: AttitudeReference, gains: AttitudeGains,
                     params: UavParams) -> np.ndarray:
    """Backstepping sliding-mode torque law, all three axes at once."""
    lam = np.asarray(gains.lam)
    gam = np.asarray(gains.gamma)
    c1 = np.asarray(gains.c1)
    c2 = np.asarray(gains.c2)
    inertia = np.array([params.ix, params.iy, params.iz])

    e = state.attitude - ref.angles
    e[2] = angle_diff(state.attitude[2], ref.angles[2])
    e_dot = state.rates - ref.rates
    v = ref.rates - lam * e
    s = gam * e + (state.rates - v)
    v_dot = -lam * e_dot  # desired angular acceleration taken as zero
    p, q, r = state.rates
    gyro = np.array([
        q * r * (params.iy - params.iz),
        p * r * (params.iz - params.ix),
        p * q * (params.ix - params.iy),
    ])
    tau_eq = inertia * (v_dot - gam * e_dot) - gyro
    tau_sw = -inertia * (c1 * sg(s, gains.eps) + c2 * s)
    return tau_eq + tau_sw


# Feasibility guards applied to the position command before conversion:
# keep thrust positive and bound commanded tilt during large transients.
UZ_FLOOR_MARGIN = 0.5       # u_z >= -g + margin [m/s^2]
MAX_TILT_CMD = 1.2          # commanded roll/pitch magnitude bound [rad]


def clamp_command(u: np.ndarray, g: float) -> np.ndarray:
    """Keep commanded accelerations convertible: floor u_z above -g and
    bound the implied tilt. Inactive near the reference."""
    u = np.asarray(u, dtype=float).copy()
    uz_min = -g + UZ_FLOOR_MARGIN
    if u[2] < uz_min:
        u[2] = uz_min
    max_lat = np.tan(MAX_TILT_CMD) * (u[2] + g)
    lat = float(np.hypot(u[0], u[1]))
    if lat > max_lat:
        u[0] *= max_lat / lat
        u[1] *= max_lat / lat
    return u


@dataclass
class CascadeController:
    """Full per-UAV controller: position loop, converter, attitude loop.

    Carries the previous converter output so the inner loop can difference
    the desired roll/pitch into reference rates. One instance per UAV.
    """

    mode: str
    params: UavParams
    position_gains: PositionGains = field(default_factory=PositionGains)
    attitude_gains: AttitudeGains = field(default_factory=AttitudeGains)
    estimator: RbfEstimator | None = None

    def __post_init__(self):
        if self.mode not in CONTROLLER_TOKENS:
            raise ConfigError(f"unknown controller {self.mode!r}, expected one of {CONTROLLER_TOKENS}")
        if self.mode == "rbf-bsmc" and self.estimator is None:
            self.estimator = RbfEstimator(RbfConfig())
        self._prev_phi_d: float | None = None
        self._prev_theta_d: float | None = None

    def update(self, state: UavState, ref: FollowerReference, dt: float) -> tuple[ControlInput, dict]:
        """One control step; returns the plant input and diagnostics."""
        d_hat = np.zeros(3)
        if self.mode == "smc":
            cmd = smc_position_control(state, ref, self.position_gains)
        else:
            if self.mode == "rbf-bsmc":
                h = self.estimator.hidden(state.position, state.velocity)
                s = position_sliding_value(state, ref, self.position_gains)
                self.estimator.update(h, s)
                d_hat = self.estimator.estimate(h)
            cmd = position_control(state, ref, d_hat, self.position_gains)

        cmd = PositionCommand(u=clamp_command(cmd.u, self.params.g), s=cmd.s)
        phi_d, theta_d, ft = attitude_converter(cmd, ref.yaw, self.params)
        if self._prev_phi_d is None:
            phi_rate_d, theta_rate_d = 0.0, 0.0
        else:
            phi_rate_d = (phi_d - self._prev_phi_d) / dt
            theta_rate_d = (theta_d - self._prev_theta_d) / dt
        self._prev_phi_d = phi_d
        self._prev_theta_d = theta_d

        att_ref = AttitudeReference(
            angles=np.array([phi_d, theta_d, ref.yaw]),
            rates=np.array([phi_rate_d, theta_rate_d, ref.yaw_rate]),
            ft=ft,
        )
        tau = attitude_control(state, att_ref, self.attitude_gains, self.params)
        u = saturate(ControlInput(ft, tau[0], tau[1], tau[2]), self.params)
        diag = {
            "u_cmd": cmd.u,
            "s": cmd.s,
            "s_norm": float(np.linalg.norm(cmd.s)),
            "d_hat": d_hat,
        }
        return u, diag
