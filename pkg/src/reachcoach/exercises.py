"""Body-parameterized exercise geometry.

All points live in the hip frame: origin midway between the hips, X forward,
Z up, Y to the user's left.  Anchor functions produce the right-side target;
left-side targets are the mirror image across the X-Z plane.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .body import BodyDimensions
from .difficulty import PerformanceBrackets
from .errors import ValidationError

SEAT_HEIGHT = 0.45  # floor to hip-frame origin when seated, meters


class Posture(str, enum.Enum):
    SEATED = "seated"
    STANDING = "standing"


class BodyPart(str, enum.Enum):
    HAND = "hand"
    FOOT = "foot"
    KNEE = "knee"


class Side(str, enum.Enum):
    RIGHT = "right"
    LEFT = "left"


SIDES = (Side.RIGHT, Side.LEFT)


@dataclass(frozen=True)
class ExerciseModel:
    id: str
    name: str
    posture: Posture
    contact_body_part: BodyPart
    anchor_fn: Callable[[BodyDimensions, "ExerciseModel"], np.ndarray]
    difficulty_vector: tuple
    brackets: PerformanceBrackets = PerformanceBrackets()
    knee_extension_angle: Optional[float] = None  # radians
    cognitive_task: Optional[str] = None
    is_timed_up_and_go: bool = False

    def __post_init__(self):
        d = np.asarray(self.difficulty_vector, dtype=float)
        if d.shape != (3,) or not np.all(np.isfinite(d)) or np.linalg.norm(d) == 0:
            raise ValidationError(f"{self.id}: difficulty vector must be a finite non-zero 3-vector")

    @property
    def d(self) -> np.ndarray:
        return np.asarray(self.difficulty_vector, dtype=float)


@dataclass(frozen=True)
class TargetSet:
    x_min: np.ndarray
    x_0: np.ndarray
    x_max: np.ndarray
    x_target: np.ndarray
    f_diff: float
    side: Side

    def to_dict(self) -> dict:
        return {
            "x_min": self.x_min.tolist(),
            "x_0": self.x_0.tolist(),
            "x_max": self.x_max.tolist(),
            "x_target": self.x_target.tolist(),
            "f_diff": self.f_diff,
            "side": self.side.value,
        }


def mirror_point(p) -> np.ndarray:
    x, y, z = np.asarray(p, dtype=float)
    return np.array([x, -y, z])


def anchor_point(model: ExerciseModel, body: BodyDimensions) -> np.ndarray:
    """Return the 50%-difficulty point for the right side, in the hip frame."""
    if not isinstance(body, BodyDimensions):
        raise ValidationError("anchor_point expects BodyDimensions")
    x0 = np.asarray(model.anchor_fn(body, model), dtype=float)
    if x0.shape != (3,) or not np.all(np.isfinite(x0)):
        raise ValidationError(f"{model.id}: anchor function produced {x0!r}")
    return x0


def target_set(model: ExerciseModel, body: BodyDimensions, f_diff: float,
               side: Side | str = Side.RIGHT) -> TargetSet:
    if not (isinstance(f_diff, (int, float)) and 0.0 <= f_diff <= 1.0):
        raise ValidationError(f"f_diff must lie in [0, 1], got {f_diff!r}")
    side = Side(side)
    d = model.d
    x0 = anchor_point(model, body)
    x_min = x0 - 0.5 * d
    x_max = x0 + 0.5 * d
    x_target = x_min + f_diff * d
    if side is Side.LEFT:
        x_min, x0, x_max, x_target = (mirror_point(p) for p in (x_min, x0, x_max, x_target))
    return TargetSet(x_min, x0, x_max, x_target, float(f_diff), side)


def hip_height(model: ExerciseModel, body: BodyDimensions) -> float:
    """Height of the hip-frame origin above the floor for this exercise."""
    if model.posture is Posture.SEATED:
        return SEAT_HEIGHT
    return body.standing_hip_height


def to_world(point, model: ExerciseModel, body: BodyDimensions) -> np.ndarray:
    """Hip frame to floor-level world frame (user at the origin, facing +X)."""
    p = np.array(point, dtype=float)
    p[2] += hip_height(model, body)
    return p


# Anchor functions.  Only the forward kick is a published model; the others
# are simple expressions chosen so each target sits where the exercise's
# contact body part ends up mid-stretch.

def _kick(b: BodyDimensions, m: ExerciseModel):
    th = m.knee_extension_angle
    return [b.upper_leg_length + b.lower_leg_length * math.sin(th),
            0.5 * b.hip_width,
            b.lower_leg_length * math.cos(th)]


def _reach_forward(b, m):
    return [0.9 * b.arm_length, 0.5 * b.shoulder_width, b.seated_shoulder_height]


def _calf_raise(b, m):
    return [b.upper_leg_length, 0.5 * b.hip_width, 0.12]


def _reach_across(b, m):
    return [0.45 * b.arm_length, -0.5 * b.shoulder_width,
            b.standing_shoulder_height - b.standing_hip_height - 0.30]


def _windmill(b, m):
    return [0.6 * b.arm_length, -0.5 * b.hip_width, -0.10]


def _seated_high_knee(b, m):
    return [0.9 * b.upper_leg_length, 0.5 * b.hip_width, 0.15]


def _standing_high_knee(b, m):
    flex = math.radians(60.0)
    return [b.upper_leg_length * math.sin(flex), 0.5 * b.hip_width,
            -b.upper_leg_length * math.cos(flex)]


def _reach_down(b, m):
    return [0.35 * b.arm_length, 0.5 * b.shoulder_width, 0.45 - b.standing_hip_height]


def _side_leg_raise(b, m):
    return [0.05, 0.5 * b.hip_width + 0.25, 0.20 - b.standing_hip_height]


TUG_DISTANCE = 3.0


def _tug(b, m):
    return [TUG_DISTANCE, 0.0, b.standing_shoulder_height - b.standing_hip_height - 0.30]


KICK_DIFFICULTY = (0.15, 0.0, 0.50)
DEFAULT_KNEE_EXTENSION = math.radians(30.0)

_S, _T = Posture.SEATED, Posture.STANDING
_HAND, _FOOT, _KNEE = BodyPart.HAND, BodyPart.FOOT, BodyPart.KNEE

_CATALOG = (
    ExerciseModel("seated_reach_forward", "Seated Reach Forward", _S, _HAND,
                  _reach_forward, (0.20, 0.0, 0.10)),
    ExerciseModel("seated_forward_kick", "Seated Forward Kick", _S, _FOOT,
                  _kick, KICK_DIFFICULTY, knee_extension_angle=DEFAULT_KNEE_EXTENSION),
    ExerciseModel("seated_calf_raises", "Seated Calf Raises", _S, _KNEE,
                  _calf_raise, (0.0, 0.0, 0.08), cognitive_task="us_states"),
    ExerciseModel("standing_reach_across", "Standing Reach Across", _T, _HAND,
                  _reach_across, (0.10, -0.25, 0.0), cognitive_task="animals"),
    ExerciseModel("seated_windmills", "Seated Windmills", _S, _HAND,
                  _windmill, (0.10, -0.10, -0.25)),
    ExerciseModel("seated_high_knees", "Seated High Knees", _S, _KNEE,
                  _seated_high_knee, (-0.05, 0.0, 0.20)),
    ExerciseModel("standing_high_knees", "Standing High Knees", _T, _KNEE,
                  _standing_high_knee, (0.05, 0.0, 0.25)),
    ExerciseModel("standing_reach_down", "Standing Reach Down", _T, _HAND,
                  _reach_down, (0.05, 0.0, -0.20)),
    ExerciseModel("standing_side_leg_raise", "Standing Side Leg Raise", _T, _FOOT,
                  _side_leg_raise, (0.0, 0.20, 0.10)),
    ExerciseModel("timed_up_and_go", "Timed Up and Go", _T, _HAND,
                  _tug, (1.0, 0.0, 0.0), is_timed_up_and_go=True),
)

STUDY_SEQUENCE = (
    ("seated_reach_forward", None),
    ("seated_forward_kick", None),
    ("seated_calf_raises", "us_states"),
    ("standing_reach_across", "animals"),
    ("seated_windmills", None),
    ("seated_high_knees", None),
)


def catalog() -> list[ExerciseModel]:
    return list(_CATALOG)


def get_exercise(exercise_id: str) -> ExerciseModel:
    for model in _CATALOG:
        if model.id == exercise_id:
            return model
    raise ValidationError(f"unknown exercise id {exercise_id!r}")


def with_knee_angle(model: ExerciseModel, theta: float) -> ExerciseModel:
    """Copy of ``model`` with a different knee extension angle (radians, 0 to pi/2)."""
    theta = float(theta)
    if not 0.0 <= theta <= math.pi / 2 + 1e-12:
        raise ValidationError(f"knee extension angle must lie in [0, 90] degrees, got {math.degrees(theta):.3f}")
    return replace(model, knee_extension_angle=theta)
