"""Deterministic quadrotor formation-flight simulator.

Leader-follower formation tracking with a dual-loop backstepping
sliding-mode controller and an online RBF-network disturbance estimator,
plus wind models, scenario orchestration, metrics and a CLI.
"""
from .controllers import (AttitudeGains, AttitudeReference, CascadeController,
                          PositionCommand, PositionGains, attitude_control,
                          attitude_converter, position_control, sg,
                          smc_position_control)
from .dynamics import (ControlInput, UavParams, UavState, mix,
                       state_derivative, step)
from .errors import (ConfigError, DivergenceError, EstimatorDivergenceError,
                     FormationSimError, InfeasibleCommandError,
                     InvalidInputError)
from .formation import (FollowerReference, FormationOffset, LeaderPose,
                        WaypointPath, follower_reference, load_waypoints,
                        spiral_leader, waypoint_leader)
from .metrics import MetricsReport, UavMetrics, compute_metrics
from .rbf import RbfConfig, RbfEstimator
from .scenario import (ScenarioConfig, SimTrace, load_config, preset_path,
                       run_scenario)
from .wind import WindProfile, WindSegment, one_cosine_wind, rectangle_wind

__version__ = "0.1.0"
