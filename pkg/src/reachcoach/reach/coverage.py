"""Which target points a robot can touch, and where to put a stationary one.

A point counts as reachable when the end effector can get within
``tolerance`` of it in any orientation.
"""
from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import ValidationError
from .cmaes import CMAConfig, cma_es_minimize
from .ik import IKSettings, best_ik, restart_seeds
from .robots import FixedDualArm, MobileManipulator


@dataclass(frozen=True)
class ReachabilityConfig:
    tolerance: float = 0.02
    ik_restarts: int = 8
    ik_iterations: int = 100
    seed: int = 0
    cma_evaluations: int = 120
    cma_sigma: float = 0.5
    smoothing: float = 0.05  # meters; width of the sigmoid used while optimizing
    # Lighter IK budget for the many objective calls inside the base search;
    # every reported coverage uses the full budget above.
    search_restarts: int = 3
    search_iterations: int = 40

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValidationError("tolerance must be positive")
        if self.ik_restarts < 1 or self.ik_iterations < 1:
            raise ValidationError("ik_restarts and ik_iterations must be at least 1")

    def for_search(self) -> "ReachabilityConfig":
        return replace(self, ik_restarts=min(self.ik_restarts, self.search_restarts),
                       ik_iterations=min(self.ik_iterations, self.search_iterations))

    @property
    def ik_settings(self) -> IKSettings:
        return IKSettings(iterations=self.ik_iterations,
                          stop_error=min(IKSettings.stop_error, self.tolerance / 4))


@dataclass
class ReachabilityReport:
    total: int
    reachable: int
    fraction: float
    flags: list
    base_pose: tuple | None = None
    centroid_distance: float | None = None  # base to target centroid, floor plane
    errors: list = field(default_factory=list, repr=False)
    solutions: list = field(default_factory=list, repr=False)  # (arm index, joints) or None

    def to_dict(self) -> dict:
        return {
            "total": self.total,
            "reachable": self.reachable,
            "fraction": self.fraction,
            "base_pose": None if self.base_pose is None else list(self.base_pose),
            "base_to_target_centroid_m": self.centroid_distance,
        }


def _as_targets(targets) -> np.ndarray:
    pts = np.asarray(targets, dtype=float)
    if pts.ndim == 1:
        pts = pts[None, :]
    if pts.size == 0:
        raise ValidationError("target list is empty")
    if pts.ndim != 2 or pts.shape[1] != 3:
        raise ValidationError(f"targets must be an (N, 3) array, got shape {pts.shape}")
    if not np.all(np.isfinite(pts)):
        raise ValidationError("targets must be finite")
    return pts


def dual_arm_errors(robot: FixedDualArm, targets, cfg: ReachabilityConfig, pose=None):
    """Best position error over both arms for each target.

    Returns (errors (N,), arm index (N,), joints list).
    """
    pts = _as_targets(targets)
    base = robot.base_matrix(pose)
    errs = np.full(len(pts), np.inf)
    arm_idx = np.zeros(len(pts), dtype=int)
    joints = [None] * len(pts)
    for a, arm in enumerate(robot.arms):
        todo = np.flatnonzero(errs > cfg.tolerance)
        if todo.size == 0:
            break
        seeds = restart_seeds(arm, cfg.ik_restarts, cfg.seed + a)
        e, q = best_ik(arm, pts[todo], seeds, base, cfg.tolerance, cfg.ik_settings)
        better = e < errs[todo]
        for k in np.flatnonzero(better):
            i = todo[k]
            errs[i], arm_idx[i], joints[i] = e[k], a, q[k]
    return errs, arm_idx, joints


def is_reachable(robot, target, cfg: ReachabilityConfig = ReachabilityConfig()) -> bool:
    return bool(coverage(robot, [target], cfg).flags[0])


def coverage(robot, targets, cfg: ReachabilityConfig = ReachabilityConfig(),
             base_pose=None) -> ReachabilityReport:
    pts = _as_targets(targets)
    if isinstance(robot, MobileManipulator):
        lo, hi = robot.height_interval(cfg.tolerance)
        flags = (pts[:, 2] >= lo) & (pts[:, 2] <= hi)
        report = ReachabilityReport(len(pts), int(flags.sum()), float(flags.mean()),
                                    flags.tolist())
        report.solutions = [None] * len(pts)
        return report
    if not isinstance(robot, FixedDualArm):
        raise ValidationError(f"unsupported robot type {type(robot).__name__}")
    pose = tuple(float(v) for v in (robot.base_pose if base_pose is None else base_pose))
    errs, arm_idx, joints = dual_arm_errors(robot, pts, cfg, pose)
    flags = errs <= cfg.tolerance
    centroid = pts[:, :2].mean(axis=0)
    report = ReachabilityReport(
        total=len(pts),
        reachable=int(flags.sum()),
        fraction=float(flags.mean()),
        flags=flags.tolist(),
        base_pose=pose,
        centroid_distance=float(np.hypot(*(centroid - np.array(pose[:2])))),
        errors=errs.tolist(),
        solutions=[(int(arm_idx[i]), joints[i]) if flags[i] else None for i in range(len(pts))],
    )
    return report


def smoothed_coverage(robot: FixedDualArm, targets, cfg: ReachabilityConfig, pose) -> float:
    """Soft count of reachable targets: sum of sigmoid((tolerance - error) / smoothing)."""
    errs, _, _ = dual_arm_errors(robot, targets, cfg, pose)
    z = np.clip((cfg.tolerance - errs) / cfg.smoothing, -60.0, 60.0)
    return float(np.sum(1.0 / (1.0 + np.exp(-z))))


def optimize_base(robot: FixedDualArm, targets, cfg: ReachabilityConfig = ReachabilityConfig()):
    """Search (x, y, yaw) for the torso pose that reaches the most targets.

    The search runs on the smoothed count; the returned report always uses
    the exact predicate and never does worse than the robot's current pose.
    Returns (pose, report, initial_report).
    """
    pts = _as_targets(targets)
    initial = coverage(robot, pts, cfg)
    x0 = np.asarray(robot.base_pose, dtype=float)
    search_cfg = cfg.for_search()
    result = cma_es_minimize(lambda x: -smoothed_coverage(robot, pts, search_cfg, x), x0, cfg.cma_sigma,
                             CMAConfig(max_evals=cfg.cma_evaluations, seed=cfg.seed, tolfun=1e-9))
    pose = tuple(float(v) for v in result.x_best)
    found = coverage(robot, pts, cfg, pose)
    if found.reachable >= initial.reachable:
        return pose, found, initial
    return tuple(initial.base_pose), initial, initial


def relocated(robot: FixedDualArm, pose) -> FixedDualArm:
    return replace(robot, base_pose=tuple(float(v) for v in pose))
