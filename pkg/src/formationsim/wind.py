"""Parametrized wind-force generators.

Two pulse shapes are provided: a rectangle and a full-wavelength
"1-cosine" gust rising from and returning to zero. A profile is a list of
segments; overlapping segments add.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError

AXES = {"x": 0, "y": 1, "z": 2}


def rectangle_wind(t: float, amplitude: float, t0: float, duration: float) -> float:
    """Constant force on [t0, t0 + duration), zero elsewhere."""
    if not duration > 0.0:
        raise ConfigError("wind segment duration must be positive")
    return amplitude if t0 <= t < t0 + duration else 0.0


def one_cosine_wind(t: float, amplitude: float, t0: float, duration: float) -> float:
    """Full-wavelength 1-cosine gust: (A/2)(1 - cos(2 pi (t-t0)/T)) on
    [t0, t0 + T], zero elsewhere. Peaks at A halfway through."""
    if not duration > 0.0:
        raise ConfigError("wind segment duration must be positive")
    if t < t0 or t > t0 + duration:
        return 0.0
    return 0.5 * amplitude * (1.0 - np.cos(2.0 * np.pi * (t - t0) / duration))


_SHAPES = {"rectangle": rectangle_wind, "one-cosine": one_cosine_wind}


@dataclass(frozen=True)
class WindSegment:
    kind: str                      # "rectangle" or "one-cosine"
    axes: tuple[str, ...]          # subset of ("x", "y", "z")
    amplitude: float               # [N]
    t0: float                      # [s]
    duration: float                # [s]

    def __post_init__(self):
        if self.kind not in _SHAPES:
            raise ConfigError(f"unknown wind kind {self.kind!r}")
        if not self.axes or any(a not in AXES for a in self.axes):
            raise ConfigError(f"wind axes must be a non-empty subset of x/y/z, got {self.axes}")
        if not self.duration > 0.0:
            raise ConfigError("wind segment duration must be positive")


@dataclass(frozen=True)
class WindProfile:
    segments: tuple[WindSegment, ...] = ()
    # optional per-UAV multiplier; UAVs beyond the list get 1.0
    uav_scales: tuple[float, ...] = ()

    def sample(self, t: float, uav_index: int = 0) -> np.ndarray:
        """Total wind force [N] at time t, summed over active segments."""
        force = np.zeros(3)
        for seg in self.segments:
            value = _SHAPES[seg.kind](t, seg.amplitude, seg.t0, seg.duration)
            for axis in seg.axes:
                force[AXES[axis]] += value
        if uav_index < len(self.uav_scales):
            force *= self.uav_scales[uav_index]
        return force


def sample(profile: WindProfile, t: float, uav_index: int = 0) -> np.ndarray:
    return profile.sample(t, uav_index)
