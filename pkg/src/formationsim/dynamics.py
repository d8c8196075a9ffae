"""Rigid-body quadrotor model: rotor mixing, 6-DOF dynamics, RK4 stepping.

Convention: inertial frame is ENU with z up, attitude is roll/pitch/yaw
Euler angles. Roll and pitch must stay inside (-pi/2, pi/2); yaw is kept
wrapped to (-pi, pi].
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, DivergenceError, InvalidInputError

# Roll/pitch margin before the Euler-angle model breaks down
TILT_LIMIT = np.pi / 2 - 0.01


def wrap_angle(a: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    a = float(np.remainder(a + np.pi, 2.0 * np.pi))
    if a <= 0.0:
        a += 2.0 * np.pi
    return a - np.pi


def angle_diff(a: float, b: float) -> float:
    """Shortest signed angular difference a - b, in (-pi, pi]."""
    return wrap_angle(a - b)


@dataclass(frozen=True)
class UavParams:
    """Physical parameters of one quadrotor (defaults: Hummingbird)."""

    m: float = 0.68          # mass [kg]
    g: float = 9.81          # gravitational acceleration [m/s^2]
    ix: float = 0.007        # inertia about x [kg m^2]
    iy: float = 0.007        # inertia about y [kg m^2]
    iz: float = 0.012        # inertia about z [kg m^2]
    l: float = 0.17          # arm length [m]
    kt: float = 29e-6        # thrust coefficient
    kd: float = 1.1e-6       # drag coefficient
    rotor_force_max: float | None = None  # per-rotor clamp [N], None = unlimited

    def __post_init__(self):
        for name in ("m", "g", "ix", "iy", "iz", "l", "kt", "kd"):
            v = getattr(self, name)
            if not np.isfinite(v) or v <= 0.0:
                raise ConfigError(f"UavParams.{name} must be strictly positive, got {v}")
        if self.rotor_force_max is not None and self.rotor_force_max <= 0.0:
            raise ConfigError("rotor_force_max must be positive when set")


@dataclass
class UavState:
    """Full 12-dimensional rigid-body state."""

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    velocity: np.ndarray = field(default_factory=lambda: np.zeros(3))
    attitude: np.ndarray = field(default_factory=lambda: np.zeros(3))   # roll, pitch, yaw [rad]
    rates: np.ndarray = field(default_factory=lambda: np.zeros(3))      # [rad/s]

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float)
        self.velocity = np.asarray(self.velocity, dtype=float)
        self.attitude = np.asarray(self.attitude, dtype=float)
        self.rates = np.asarray(self.rates, dtype=float)

    def as_vector(self) -> np.ndarray:
        return np.concatenate([self.position, self.velocity, self.attitude, self.rates])

    @classmethod
    def from_vector(cls, v: np.ndarray) -> "UavState":
        v = np.asarray(v, dtype=float)
        return cls(v[0:3].copy(), v[3:6].copy(), v[6:9].copy(), v[9:12].copy())

    def copy(self) -> "UavState":
        return UavState(self.position.copy(), self.velocity.copy(),
                        self.attitude.copy(), self.rates.copy())

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.as_vector())))


@dataclass(frozen=True)
class ControlInput:
    """Total thrust [N] and body torques [N m]."""

    ft: float
    tau_phi: float
    tau_theta: float
    tau_psi: float

    def torques(self) -> np.ndarray:
        return np.array([self.tau_phi, self.tau_theta, self.tau_psi])


def mix(rotor_forces: np.ndarray, params: UavParams) -> ControlInput:
    """Map four rotor forces to total thrust and body torques.

    Per-rotor drag torque is modeled as (kd/kt) * f_i, so the yaw torque
    is (kd/kt) * (f2 + f4 - f1 - f3).
    """
    f = np.asarray(rotor_forces, dtype=float)
    if f.shape != (4,):
        raise InvalidInputError(f"expected 4 rotor forces, got shape {f.shape}")
    if not np.all(np.isfinite(f)):
        raise InvalidInputError("rotor forces must be finite")
    if np.any(f < 0.0):
        raise InvalidInputError("rotor forces must be non-negative")
    f1, f2, f3, f4 = f
    return ControlInput(
        ft=float(f1 + f2 + f3 + f4),
        tau_phi=float(params.l * (f4 - f2)),
        tau_theta=float(params.l * (f3 - f1)),
        tau_psi=float((params.kd / params.kt) * (f2 + f4 - f1 - f3)),
    )


def unmix(u: ControlInput, params: UavParams) -> np.ndarray:
    """Invert the mixer: recover the four rotor forces realizing ``u``."""
    c = params.kd / params.kt
    a = np.array([
        [1.0, 1.0, 1.0, 1.0],
        [0.0, -params.l, 0.0, params.l],
        [-params.l, 0.0, params.l, 0.0],
        [-c, c, -c, c],
    ])
    b = np.array([u.ft, u.tau_phi, u.tau_theta, u.tau_psi])
    return np.linalg.solve(a, b)


def saturate(u: ControlInput, params: UavParams) -> ControlInput:
    """Clamp per-rotor forces to [0, rotor_force_max] and remix.

    No-op when rotor saturation is disabled (the default).
    """
    if params.rotor_force_max is None:
        return u
    f = np.clip(unmix(u, params), 0.0, params.rotor_force_max)
    return mix(f, params)


def state_derivative(state: UavState, u: ControlInput, dist: np.ndarray,
                     params: UavParams) -> np.ndarray:
    """Time derivative of the 12-dim state under thrust, torques and a
    translational disturbance force ``dist`` [N]."""
    d = np.asarray(dist, dtype=float)
    if not (state.is_finite() and np.all(np.isfinite(d))
            and np.all(np.isfinite([u.ft, u.tau_phi, u.tau_theta, u.tau_psi]))):
        raise InvalidInputError("state, input and disturbance must be finite")

    phi, theta, psi = state.attitude
    p, q, r = state.rates
    m, g = params.m, params.g

    sphi, cphi = np.sin(phi), np.cos(phi)
    sth, cth = np.sin(theta), np.cos(theta)
    spsi, cpsi = np.sin(psi), np.cos(psi)

    acc = np.array([
        (cphi * sth * cpsi + sphi * spsi) * u.ft / m + d[0] / m,
        (cphi * sth * spsi - sphi * cpsi) * u.ft / m + d[1] / m,
        cphi * cth * u.ft / m - g + d[2] / m,
    ])
    ang_acc = np.array([
        (q * r * (params.iy - params.iz) + u.tau_phi) / params.ix,
        (p * r * (params.iz - params.ix) + u.tau_theta) / params.iy,
        (p * q * (params.ix - params.iy) + u.tau_psi) / params.iz,
    ])
    return np.concatenate([state.velocity, acc, state.rates, ang_acc])


def step(state: UavState, u: ControlInput, dist: np.ndarray, params: UavParams,
         dt: float, t: float = 0.0) -> UavState:
    """One classical RK4 step with input and disturbance held constant.

    Yaw is re-wrapped after the step; roll/pitch leaving the valid Euler
    region or a non-finite result raise DivergenceError.
    """
    if not (0.0 < dt <= 0.05):
        raise ConfigError(f"dt must be in (0, 0.05] s, got {dt}")

    def f(v: np.ndarray) -> np.ndarray:
        return state_derivative(UavState.from_vector(v), u, dist, params)

    y = state.as_vector()
    k1 = f(y)
    k2 = f(y + 0.5 * dt * k1)
    k3 = f(y + 0.5 * dt * k2)
    k4 = f(y + dt * k3)
    y_new = y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

    if not np.all(np.isfinite(y_new)):
        raise DivergenceError("state became non-finite", t + dt)
    new = UavState.from_vector(y_new)
    if abs(new.attitude[0]) > TILT_LIMIT or abs(new.attitude[1]) > TILT_LIMIT:
        raise DivergenceError("roll/pitch left the valid Euler-angle region", t + dt)
    new.attitude[2] = wrap_angle(new.attitude[2])
    return new
