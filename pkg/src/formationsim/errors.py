"""Exception hierarchy shared across the simulator."""


class FormationSimError(Exception):
    """Base class for all simulator errors."""


class ConfigError(FormationSimError):
    """A scenario or component configuration is invalid."""


class InvalidInputError(FormationSimError):
    """An operation received non-finite or out-of-domain inputs."""


class InfeasibleCommandError(FormationSimError):
    """The commanded acceleration cannot be realized with positive thrust."""


class DivergenceError(FormationSimError):
    """The simulated state left the model's valid region.

    Carries the simulation time at which divergence was detected.
    """

    def __init__(self, message: str, t: float):
        super().__init__(f"{message} (t={t:.4f} s)")
        self.t = t


class EstimatorDivergenceError(FormationSimError):
    """The disturbance estimator produced non-finite weights."""
