"""Scenario configuration and the closed-loop simulation runner."""
from __future__ import annotations

import copy
import zlib
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import yaml

from .controllers import (AttitudeGains, CascadeController, PositionGains,
                          CONTROLLER_TOKENS)
from .dynamics import (ControlInput, DivergenceError, UavParams, UavState, step)
from .errors import ConfigError
from .formation import (FormationOffset, WaypointPath, follower_reference,
                        load_waypoints, spiral_leader, waypoint_leader)
from .rbf import RbfConfig, RbfEstimator
from .wind import WindProfile, WindSegment

@dataclass
class FollowerSpec:
    initial_state: UavState
    offset: FormationOffset


@dataclass
class LeaderSpec:
    kind: str = "spiral"                       # "spiral" or "waypoints"
    path: WaypointPath | None = None

    def pose(self, t: float):
        if self.kind == "spiral":
            return spiral_leader(t)
        return waypoint_leader(self.path, t)


@dataclass
class ScenarioConfig:
    duration: float = 40.0
    dt: float = 0.01
    controller: str = "rbf-bsmc"
    seed: int = 1
    name: str = "scenario"
    output_dir: str = "out"
    leader: LeaderSpec = field(default_factory=LeaderSpec)
    followers: list[FollowerSpec] = field(default_factory=list)
    uav: UavParams = field(default_factory=UavParams)
    position_gains: PositionGains = field(default_factory=PositionGains)
    attitude_gains: AttitudeGains = field(default_factory=AttitudeGains)
    rbf: RbfConfig = field(default_factory=RbfConfig)
    wind: WindProfile = field(default_factory=WindProfile)

    def __post_init__(self):
        if self.duration < 0.0:
            raise ConfigError("duration must be non-negative")
        if not (0.0 < self.dt <= 0.05):
            raise ConfigError("dt must be in (0, 0.05] s")
        if self.controller not in CONTROLLER_TOKENS:
            raise ConfigError(f"unknown controller {self.controller!r}")
        offsets = [f.offset.delta for f in self.followers]
        if len(set(offsets)) != len(offsets):
            raise ConfigError("follower offsets must be distinct")

    def replace(self, **kwargs) -> "ScenarioConfig":
        other = copy.deepcopy(self)
        for k, v in kwargs.items():
            setattr(other, k, v)
        other.__post_init__()
        return other


def _parse_follower(entry: dict) -> FollowerSpec:
    state = UavState(
        position=np.asarray(entry.get("initial_position", [0, 0, 0]), dtype=float),
        velocity=np.asarray(entry.get("initial_velocity", [0, 0, 0]), dtype=float),
        attitude=np.asarray(entry.get("initial_attitude", [0, 0, 0]), dtype=float),
        rates=np.asarray(entry.get("initial_rates", [0, 0, 0]), dtype=float),
    )
    if "offset" not in entry:
        raise ConfigError("each follower needs an 'offset'")
    return FollowerSpec(state, FormationOffset(tuple(float(v) for v in entry["offset"])))


def _parse_leader(entry: dict, base_dir: Path) -> LeaderSpec:
    kind = entry.get("type", "spiral")
    if kind == "spiral":
        return LeaderSpec(kind="spiral")
    if kind == "waypoints":
        speed = float(entry.get("speed", 1.0))
        if "file" in entry:
            path = load_waypoints(base_dir / entry["file"], speed)
        elif "waypoints" in entry:
            arr = np.asarray(entry["waypoints"], dtype=float)
            path = WaypointPath(waypoints=arr[:, 0:3], headings=arr[:, 3], speed=speed)
        else:
            raise ConfigError("waypoint leader needs 'file' or 'waypoints'")
        return LeaderSpec(kind="waypoints", path=path)
    raise ConfigError(f"unknown leader type {kind!r}")


def _parse_wind(entries: list) -> WindProfile:
    segments = []
    for e in entries or []:
        axes = e.get("axes", ["x"])
        if isinstance(axes, str):
            axes = [axes]
        segments.append(WindSegment(
            kind=e["kind"],
            axes=tuple(axes),
            amplitude=float(e["amplitude"]),
            t0=float(e.get("t0", 0.0)),
            duration=float(e["duration"]),
        ))
    return WindProfile(segments=tuple(segments))


def _parse_rbf(entry: dict) -> RbfConfig:
    entry = dict(entry)
    r = entry.pop("center_range", 15.0)
    if np.isscalar(r):
        r = (float(r),) * 3
    else:
        r = tuple(float(v) for v in r)
    return RbfConfig(center_range=r, **entry)


def _parse_attitude_gains(entry: dict) -> AttitudeGains:
    def triple(v):
        return (float(v),) * 3 if np.isscalar(v) else tuple(float(x) for x in v)
    return AttitudeGains(
        lam=triple(entry.get("lam", 5.0)),
        gamma=triple(entry.get("gamma", 5.0)),
        c1=triple(entry.get("c1", 2.0)),
        c2=triple(entry.get("c2", 2.0)),
        eps=float(entry.get("eps", 0.1)),
    )


def config_from_dict(data: dict, base_dir: Path | str = ".") -> ScenarioConfig:
    """Build a ScenarioConfig from a parsed config mapping."""
    base_dir = Path(base_dir)
    try:
        return ScenarioConfig(
            duration=float(data.get("duration", 40.0)),
            dt=float(data.get("dt", 0.01)),
            controller=str(data.get("controller", "rbf-bsmc")),
            seed=int(data.get("seed", 1)),
            name=str(data.get("name", "scenario")),
            output_dir=str(data.get("output_dir", "out")),
            leader=_parse_leader(data.get("leader", {}), base_dir),
            followers=[_parse_follower(f) for f in data.get("followers", [])],
            uav=UavParams(**data.get("uav", {})),
            position_gains=PositionGains(**data.get("position_gains", {})),
            attitude_gains=_parse_attitude_gains(data.get("attitude_gains", {})),
            rbf=_parse_rbf(data.get("rbf", {})),
            wind=_parse_wind(data.get("wind", [])),
        )
    except (TypeError, KeyError, ValueError) as exc:
        raise ConfigError(f"invalid scenario config: {exc}") from exc


def load_config(path: str | Path) -> ScenarioConfig:
    """Load a scenario config from a YAML file."""
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except yaml.YAMLError as exc:
        raise ConfigError(f"cannot parse config {path}: {exc}") from exc
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must be a mapping")
    return config_from_dict(data, base_dir=path.parent)


def preset_path(name: str) -> Path:
    """Path of a shipped scenario preset (scenario1, scenario2)."""
    p = Path(__file__).parent / "presets" / f"{name}.yaml"
    if not p.exists():
        raise ConfigError(f"no preset named {name!r}")
    return p


# Per-UAV trace column layout shared by the runner and the CSV exporter
TRACE_COLUMNS = (
    "t", "x", "y", "z", "vx", "vy", "vz",
    "phi", "theta", "psi", "phi_rate", "theta_rate", "psi_rate",
    "ref_x", "ref_y", "ref_z", "ref_yaw",
    "ex", "ey", "ez",
    "ux", "uy", "uz",
    "ft", "tau_phi", "tau_theta", "tau_psi",
    "dhat_x", "dhat_y", "dhat_z",
    "dtrue_x", "dtrue_y", "dtrue_z",
    "s_norm",
)


@dataclass
class SimTrace:
    """Uniform-grid trace of a scenario run: one (steps, columns) array per
    follower, columns per TRACE_COLUMNS; dtrue_* are per-unit-mass."""

    dt: float
    uav_data: list[np.ndarray]
    diverged: bool = False
    divergence_time: float | None = None

    @property
    def n_uavs(self) -> int:
        return len(self.uav_data)

    def column(self, uav: int, name: str) -> np.ndarray:
        return self.uav_data[uav][:, TRACE_COLUMNS.index(name)]

    def columns(self, uav: int, names: tuple[str, ...]) -> np.ndarray:
        idx = [TRACE_COLUMNS.index(n) for n in names]
        return self.uav_data[uav][:, idx]


def _follower_seed(config: ScenarioConfig, follower: FollowerSpec) -> int:
    """Per-UAV estimator seed derived from the follower's offset, so
    reordering followers in the config does not change any UAV's run."""
    key = repr(follower.offset.delta).encode()
    return (config.seed + zlib.crc32(key)) % 2 ** 32


def make_controller(config: ScenarioConfig, follower: FollowerSpec,
                    freeze_weights: bool = False) -> CascadeController:
    """Controller instance for one follower; each UAV gets independent
    initial estimator weights."""
    estimator = None
    if config.controller == "rbf-bsmc":
        rbf_cfg = RbfConfig(
            neurons=config.rbf.neurons,
            learning_gain=config.rbf.learning_gain,
            width=config.rbf.width,
            leakage=config.rbf.leakage,
            momentum=config.rbf.momentum,
            center_range=config.rbf.center_range,
            seed=_follower_seed(config, follower),
            dt_scaled=config.rbf.dt_scaled,
            dt=config.dt,
        )
        estimator = RbfEstimator(rbf_cfg)
        if freeze_weights:
            estimator.freeze_zero()
    return CascadeController(
        mode=config.controller,
        params=config.uav,
        position_gains=config.position_gains,
        attitude_gains=config.attitude_gains,
        estimator=estimator,
    )


def run_scenario(config: ScenarioConfig, freeze_weights: bool = False) -> SimTrace:
    """Run one scenario: every follower is stepped independently under the
    shared leader trajectory and wind profile. Deterministic given the
    config and seed. On divergence the partial trace is returned flagged."""
    n_steps = int(round(config.duration / config.dt))
    mass = config.uav.m
    uav_data: list[np.ndarray] = []
    diverged = False
    divergence_time = None

    for i, follower in enumerate(config.followers):
        controller = make_controller(config, follower, freeze_weights=freeze_weights)
        state = follower.initial_state.copy()
        rows = np.empty((n_steps, len(TRACE_COLUMNS)))
        filled = 0
        for k in range(n_steps):
            t = k * config.dt
            leader = config.leader.pose(t)
            ref = follower_reference(leader, follower.offset)
            u, diag = controller.update(state, ref, config.dt)
            u_cmd = diag["u_cmd"]
            wind_force = config.wind.sample(t, i)
            err = state.position - ref.position
            rows[k] = np.concatenate([
                [t], state.position, state.velocity, state.attitude, state.rates,
                ref.position, [ref.yaw], err, u_cmd,
                [u.ft], u.torques(), diag["d_hat"], wind_force / mass,
                [diag["s_norm"]],
            ])
            filled = k + 1
            try:
                state = step(state, u, wind_force, config.uav, config.dt, t)
            except DivergenceError as exc:
                diverged = True
                divergence_time = exc.t
                break
        uav_data.append(rows[:filled].copy())
        if diverged:
            break
    return SimTrace(dt=config.dt, uav_data=uav_data, diverged=diverged,
                    divergence_time=divergence_time)
