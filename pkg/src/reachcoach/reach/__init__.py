"""Robot kinematics, reachability coverage and CMA-ES base placement."""

from .cmaes import CMAConfig, CMAES, CMAResult, cma_es_minimize
from .coverage import ReachabilityConfig, ReachabilityReport, coverage, is_reachable, optimize_base
from .kinematics import Joint, SerialChain, fk_batch, forward_kinematics
from .robots import SWS_ROBOT, FixedDualArm, MobileManipulator, fixed_dual_arm, get_robot

__all__ = [
    "CMAConfig", "CMAES", "CMAResult", "cma_es_minimize", "ReachabilityConfig",
    "ReachabilityReport", "coverage", "is_reachable", "optimize_base", "Joint", "SerialChain",
    "fk_batch", "forward_kinematics", "SWS_ROBOT", "FixedDualArm", "MobileManipulator",
    "fixed_dual_arm", "get_robot",
]
