"""Body dimensions of a single user, in meters."""
from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, fields
from pathlib import Path

from .errors import ValidationError

MIN_SEGMENT = 0.05
MAX_SEGMENT = 2.0


@dataclass(frozen=True)
class BodyDimensions:
    upper_leg_length: float
    lower_leg_length: float
    hip_width: float
    upper_arm_length: float
    forearm_length: float
    shoulder_width: float
    seated_shoulder_height: float  # hip frame origin to shoulder, seated
    standing_shoulder_height: float
    standing_hip_height: float

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                raise ValidationError(f"{f.name} must be a number, got {value!r}")
            if not math.isfinite(value) or not MIN_SEGMENT <= value <= MAX_SEGMENT:
                raise ValidationError(
                    f"{f.name}={value!r} outside [{MIN_SEGMENT}, {MAX_SEGMENT}] m "
                    "(dimensions are meters, not centimeters)"
                )
        if self.hip_width >= self.shoulder_width + 0.5:
            raise ValidationError(
                f"hip_width={self.hip_width} implausibly larger than "
                f"shoulder_width={self.shoulder_width}; fields swapped?"
            )

    @property
    def arm_length(self) -> float:
        return self.upper_arm_length + self.forearm_length

    @property
    def leg_length(self) -> float:
        return self.upper_leg_length + self.lower_leg_length

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "BodyDimensions":
        if not isinstance(data, dict):
            raise ValidationError("body dimensions must be a JSON object")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValidationError(f"unknown body dimension keys: {', '.join(unknown)}")
        missing = sorted(known - set(data))
        if missing:
            raise ValidationError(f"missing body dimension keys: {', '.join(missing)}")
        return cls(**data)


def load_body(path: str | Path) -> BodyDimensions:
    with open(path, encoding="utf-8") as fh:
        try:
            data = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from exc
    return BodyDimensions.from_dict(data)


# A mid-sized adult; used as the CLI/config fallback and in examples.
REFERENCE_BODY = BodyDimensions(
    upper_leg_length=0.45,
    lower_leg_length=0.45,
    hip_width=0.35,
    upper_arm_length=0.31,
    forearm_length=0.26,
    shoulder_width=0.40,
    seated_shoulder_height=0.58,
    standing_shoulder_height=1.42,
    standing_hip_height=0.92,
)


def random_body(rng) -> BodyDimensions:
    """Draw a plausible adult body from ``rng`` (a numpy Generator)."""
    u = rng.uniform
    upper_leg = u(0.38, 0.50)
    lower_leg = u(0.38, 0.50)
    return BodyDimensions(
        upper_leg_length=upper_leg,
        lower_leg_length=lower_leg,
        hip_width=u(0.28, 0.40),
        upper_arm_length=u(0.26, 0.36),
        forearm_length=u(0.22, 0.30),
        shoulder_width=u(0.34, 0.46),
        seated_shoulder_height=u(0.50, 0.65),
        standing_shoulder_height=u(1.25, 1.55),
        standing_hip_height=upper_leg + lower_leg + u(0.03, 0.08),
    )
