"""Online RBF-network disturbance estimator.

The network maps (position, velocity) through Gaussian hidden units to a
3-vector estimate of the per-unit-mass disturbance. Output weights are
adapted each control step from the position sliding value, with a leakage
term bounding the weights and a momentum term on the weight change.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, EstimatorDivergenceError


@dataclass(frozen=True)
class RbfConfig:
    """Estimator hyperparameters (defaults match the canonical tuning)."""

    neurons: int = 50
    learning_gain: float = 0.1     # a
    width: float = 10.0            # b
    leakage: float = 0.2           # eta
    momentum: float = 0.5          # beta
    center_range: tuple[float, float, float] = (15.0, 15.0, 15.0)
    seed: int = 0
    dt_scaled: bool = False        # scale the weight increment by dt
    dt: float = 0.01               # iteration period, used when dt_scaled

    def __post_init__(self):
        if self.neurons < 1:
            raise ConfigError("neurons must be >= 1")
        if not (self.learning_gain > 0 and self.width > 0 and self.leakage > 0):
            raise ConfigError("learning_gain, width and leakage must be positive")
        if not (0.0 < self.momentum < 1.0):
            raise ConfigError("momentum must be in (0, 1)")
        if self.dt_scaled and not self.dt > 0:
            raise ConfigError("dt must be positive when dt_scaled is enabled")


class RbfEstimator:
    """Adaptive RBF network estimating a 3-axis disturbance.

    Centers lie on the diagonal of the configured range: neuron j has
    position-input center (mu_x[j], mu_y[j], mu_z[j]) with each axis
    linearly spaced over [-r, r]; velocity-input centers are identical.
    Holds the previous two weight iterates for the momentum update.
    """

    def __init__(self, config: RbfConfig):
        self.config = config
        m = config.neurons
        rx, ry, rz = config.center_range
        axes = np.stack([np.linspace(-rx, rx, m),
                         np.linspace(-ry, ry, m),
                         np.linspace(-rz, rz, m)], axis=1)  # (m, 3)
        self.centers_pos = axes
        self.centers_vel = axes.copy()
        rng = np.random.default_rng(config.seed)
        self.weights = rng.uniform(-0.1, 0.1, size=(m, 3))
        self.weights_prev = self.weights.copy()
        self.weights_prev2 = self.weights.copy()

    def hidden(self, position: np.ndarray, velocity: np.ndarray) -> np.ndarray:
        """Gaussian activations of the hidden layer, each in (0, 1]."""
        dp = self.centers_pos - np.asarray(position, dtype=float)
        dv = self.centers_vel - np.asarray(velocity, dtype=float)
        sq = np.sum(dp * dp, axis=1) + np.sum(dv * dv, axis=1)
        return np.exp(-sq / self.config.width ** 2)

    def estimate(self, h: np.ndarray) -> np.ndarray:
        """Disturbance estimate W^T h [m/s^2 per axis]."""
        return self.weights.T @ h

    def update(self, h: np.ndarray, s: np.ndarray) -> None:
        """One weight-adaptation step from hidden output ``h`` and the
        position sliding value ``s``.

        Increment: a * (h s^T - eta * ||s|| * W), applied with momentum on
        the previous weight change. The increment is taken per iteration;
        with ``dt_scaled`` it is additionally multiplied by the period.
        """
        if self.frozen:
            return
        cfg = self.config
        s = np.asarray(s, dtype=float)
        w_dot = cfg.learning_gain * (np.outer(h, s) - cfg.leakage * np.linalg.norm(s) * self.weights_prev)
        if cfg.dt_scaled:
            w_dot = w_dot * cfg.dt
        w_new = self.weights_prev + w_dot + cfg.momentum * (self.weights_prev - self.weights_prev2)
        if not np.all(np.isfinite(w_new)):
            raise EstimatorDivergenceError("RBF weights became non-finite")
        self.weights_prev2 = self.weights_prev
        self.weights_prev = w_new
        self.weights = w_new

    def freeze_zero(self) -> None:
        """Zero all weights and disable adaptation (ablation support)."""
        self.weights = np.zeros_like(self.weights)
        self.weights_prev = self.weights.copy()
        self.weights_prev2 = self.weights.copy()
        self._frozen = True

    @property
    def frozen(self) -> bool:
        return getattr(self, "_frozen", False)

    def weight_norm(self) -> float:
        """Frobenius norm of the current weight matrix."""
        return float(np.linalg.norm(self.weights))


def build(config: RbfConfig) -> RbfEstimator:
    return RbfEstimator(config)
