"""Robot descriptions for reachability comparisons."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError
from .kinematics import Joint, SerialChain, pose_matrix


@dataclass(frozen=True)
class MobileManipulator:
    """Omnidirectionally placeable base with a vertical lift and telescoping arm.

    Because the base can be parked anywhere on the floor, only the height of
    a target constrains reachability.
    """

    name: str
    lift_range: tuple  # (z_lo, z_hi), meters
    extension_range: tuple  # (e_lo, e_hi), meters
    tool_offset: float = 0.0  # vertical offset of the contact point from the lift carriage

    kind = "mobile_manipulator"

    def __post_init__(self):
        z_lo, z_hi = self.lift_range
        e_lo, e_hi = self.extension_range
        if not z_lo < z_hi:
            raise ValidationError(f"{self.name}: lift range must satisfy z_lo < z_hi")
        if not e_lo < e_hi:
            raise ValidationError(f"{self.name}: extension range must satisfy e_lo < e_hi")

    def height_interval(self, tolerance: float) -> tuple[float, float]:
        z_lo, z_hi = self.lift_range
        return z_lo + self.tool_offset - tolerance, z_hi + self.tool_offset + tolerance


@dataclass(frozen=True)
class FixedDualArm:
    """Stationary torso carrying two serial arms; the torso sits at ``base_pose``."""

    name: str
    arms: tuple
    base_pose: tuple = (0.0, 0.0, 0.0)  # x, y, yaw on the floor

    kind = "fixed_dual_arm"

    def __post_init__(self):
        if len(self.arms) != 2:
            raise ValidationError(f"{self.name}: a dual-arm robot has exactly two arms")
        for arm in self.arms:
            if arm.dof < 6:
                raise ValidationError(f"{self.name}: arm {arm.name} has fewer than 6 joints")

    def base_matrix(self, pose=None) -> np.ndarray:
        x, y, yaw = self.base_pose if pose is None else pose
        return pose_matrix(x, y, 0.0, yaw)


# Compact mobile manipulator carrying the soft end effector.  The lift span
# is set to cover every catalog target for adult bodies.
SWS_ROBOT = MobileManipulator("sws", lift_range=(0.10, 1.30), extension_range=(0.0, 0.52))

# Seven-joint arm with link lengths and limits approximating a Baxter-class
# arm (roughly 1.2 m from shoulder to contact point).
_ARM_JOINTS = (
    Joint("z", (0.069, 0.0, 0.27035), -1.7017, 1.7017),  # shoulder yaw
    Joint("y", (0.36435, 0.0, -0.069), -2.147, 1.047),  # shoulder pitch, + lowers the arm
    Joint("x", (0.0, 0.0, 0.0), -3.0541, 3.0541),  # upper-arm roll
    Joint("y", (0.37429, 0.0, -0.010), -0.05, 2.618),  # elbow
    Joint("x", (0.0, 0.0, 0.0), -3.059, 3.059),  # forearm roll
    Joint("y", (0.229525 + 0.15, 0.0, 0.0), -1.5708, 2.094),  # wrist pitch, link includes end effector
    Joint("x", (0.0, 0.0, 0.0), -3.059, 3.059),  # wrist roll
)
DUAL_ARM_MOUNT_HEIGHT = 1.0
DUAL_ARM_MOUNT_LATERAL = 0.26


def _dual_arm_chains(mount_height: float = DUAL_ARM_MOUNT_HEIGHT,
                     lateral: float = DUAL_ARM_MOUNT_LATERAL):
    left = SerialChain("left", _ARM_JOINTS,
                       tuple(map(tuple, pose_matrix(0.064, lateral, mount_height, math.pi / 4))))
    right = SerialChain("right", _ARM_JOINTS,
                        tuple(map(tuple, pose_matrix(0.064, -lateral, mount_height, -math.pi / 4))))
    return left, right


# Where the mobile robot parks for a session: in front of the user, facing
# them.  Used as the body-adjacent placement for the stationary robot.
HOME_POSE = (1.0, 0.0, math.pi)


def fixed_dual_arm(base_pose=HOME_POSE) -> FixedDualArm:
    return FixedDualArm("fixed_dual_arm", _dual_arm_chains(), tuple(float(v) for v in base_pose))


def get_robot(name: str, base_pose=None):
    if name == "sws":
        return SWS_ROBOT
    if name == "fixed_dual_arm":
        return fixed_dual_arm(HOME_POSE if base_pose is None else base_pose)
    raise ValidationError(f"unknown robot {name!r}; choose sws or fixed_dual_arm")
