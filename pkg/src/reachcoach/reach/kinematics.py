"""Serial-chain forward kinematics, batched over joint configurations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import ValidationError

_AXES = {"x": 0, "y": 1, "z": 2}
LIMIT_SLACK = 1e-9


@dataclass(frozen=True)
class Joint:
    """One actuated joint followed by a rigid link.

    ``link`` is the translation from this joint to the next, expressed in the
    joint's frame after its own motion has been applied.
    """

    axis: str
    link: tuple = (0.0, 0.0, 0.0)
    lower: float = -np.pi
    upper: float = np.pi
    kind: str = "revolute"

    def __post_init__(self):
        if self.axis not in _AXES:
            raise ValidationError(f"joint axis must be one of x, y, z; got {self.axis!r}")
        if self.kind not in ("revolute", "prismatic"):
            raise ValidationError(f"joint kind must be revolute or prismatic; got {self.kind!r}")
        if not self.lower < self.upper:
            raise ValidationError(f"empty joint limit interval [{self.lower}, {self.upper}]")
        if len(self.link) != 3:
            raise ValidationError("joint link must be a 3-vector")


def pose_matrix(x: float = 0.0, y: float = 0.0, z: float = 0.0, yaw: float = 0.0) -> np.ndarray:
    c, s = np.cos(yaw), np.sin(yaw)
    return np.array([[c, -s, 0.0, x], [s, c, 0.0, y], [0.0, 0.0, 1.0, z], [0.0, 0.0, 0.0, 1.0]])


@dataclass(frozen=True)
class SerialChain:
    name: str
    joints: tuple
    mount: tuple = ((1.0, 0.0, 0.0, 0.0), (0.0, 1.0, 0.0, 0.0),
                    (0.0, 0.0, 1.0, 0.0), (0.0, 0.0, 0.0, 1.0))  # robot base -> first joint

    def __post_init__(self):
        if not self.joints:
            raise ValidationError("a chain needs at least one joint")
        m = np.asarray(self.mount, dtype=float)
        if m.shape != (4, 4):
            raise ValidationError("chain mount must be a 4x4 homogeneous transform")

    @property
    def dof(self) -> int:
        return len(self.joints)

    @property
    def lower(self) -> np.ndarray:
        return np.array([j.lower for j in self.joints])

    @property
    def upper(self) -> np.ndarray:
        return np.array([j.upper for j in self.joints])

    @property
    def mount_matrix(self) -> np.ndarray:
        return np.asarray(self.mount, dtype=float)

    def max_reach(self) -> float:
        """Upper bound on the distance from the first joint to the tip."""
        total = 0.0
        for j in self.joints:
            total += float(np.linalg.norm(j.link))
            if j.kind == "prismatic":
                total += max(abs(j.lower), abs(j.upper))
        return total

    def check_limits(self, q) -> np.ndarray:
        q = np.asarray(q, dtype=float)
        if q.shape[-1] != self.dof:
            raise ValidationError(f"{self.name}: expected {self.dof} joint values, got {q.shape[-1]}")
        if np.any(q < self.lower - LIMIT_SLACK) or np.any(q > self.upper + LIMIT_SLACK):
            raise ValidationError(f"{self.name}: joint values outside limits")
        return q


def _axis_rotation(axis: int, angle: np.ndarray) -> np.ndarray:
    """Batched rotation matrices about a principal axis, shape (B, 3, 3)."""
    c, s = np.cos(angle), np.sin(angle)
    R = np.zeros(angle.shape + (3, 3))
    i, j = [(1, 2), (2, 0), (0, 1)][axis]
    R[:, axis, axis] = 1.0
    R[:, i, i] = c
    R[:, j, j] = c
    R[:, i, j] = -s
    R[:, j, i] = s
    return R


def fk_batch(chain: SerialChain, Q: np.ndarray, base: np.ndarray | None = None,
             jacobian: bool = False):
    """Tip positions for joint configurations ``Q`` of shape (B, dof).

    Returns positions (B, 3) and, if requested, the position Jacobian
    (B, 3, dof) in the world frame.
    """
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    B = Q.shape[0]
    T = chain.mount_matrix if base is None else np.asarray(base, dtype=float) @ chain.mount_matrix
    R = np.broadcast_to(T[:3, :3], (B, 3, 3)).copy()
    p = np.broadcast_to(T[:3, 3], (B, 3)).copy()
    axes, origins = [], []
    for k, joint in enumerate(chain.joints):
        a = _AXES[joint.axis]
        world_axis = R[:, :, a].copy()
        axes.append(world_axis)
        origins.append(p.copy())
        if joint.kind == "revolute":
            R = R @ _axis_rotation(a, Q[:, k])
        else:
            p = p + world_axis * Q[:, k:k + 1]
        p = p + R @ np.asarray(joint.link, dtype=float)
    if not jacobian:
        return p
    J = np.empty((B, 3, chain.dof))
    for k, joint in enumerate(chain.joints):
        a = axes[k]
        if joint.kind == "revolute":
            r = p - origins[k]
            # a x r, spelled out: np.cross is several times slower on small batches
            J[:, 0, k] = a[:, 1] * r[:, 2] - a[:, 2] * r[:, 1]
            J[:, 1, k] = a[:, 2] * r[:, 0] - a[:, 0] * r[:, 2]
            J[:, 2, k] = a[:, 0] * r[:, 1] - a[:, 1] * r[:, 0]
        else:
            J[:, :, k] = a
    return p, J


def forward_kinematics(chain: SerialChain, joint_values, base: np.ndarray | None = None) -> np.ndarray:
    """End-effector position in the world frame for one configuration."""
    q = chain.check_limits(np.asarray(joint_values, dtype=float).reshape(-1))
    return fk_batch(chain, q[None, :], base)[0]


def first_joint_origin(chain: SerialChain, base: np.ndarray | None = None) -> np.ndarray:
    T = chain.mount_matrix if base is None else np.asarray(base, dtype=float) @ chain.mount_matrix
    return T[:3, 3].copy()
