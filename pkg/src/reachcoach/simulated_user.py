"""A synthetic exerciser that closes the loop in place of a human participant.

Parameters carry no clinical meaning.  Every random draw goes through a
caller-supplied ``numpy.random.Generator`` so runs are reproducible.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from .body import REFERENCE_BODY, BodyDimensions
from .contact import PressureTrace
from .errors import ValidationError
from .exercises import ExerciseModel, Side

BUMP_WIDTH = 0.3  # seconds, raised-cosine contact pulse


@dataclass(frozen=True)
class SimulatedUser:
    body: BodyDimensions = REFERENCE_BODY
    true_reach: dict = field(default_factory=dict)  # (exercise_id, side) -> fraction
    default_reach: float = 0.8
    max_rpm: float = 24.0
    rpm_slope: float = 0.5
    reach_noise: float = 0.0
    rep_noise: float = 0.0
    walk_speed: float = 1.0  # m/s
    stand_up_latency: float = 1.5  # s
    touch_latency: float = 0.8  # s, mean
    contact_amplitude: float = 600.0  # Pa above baseline, mean press
    too_hard_probability: float = 0.0
    rng_seed: int = 0

    def __post_init__(self):
        for key, value in list(self.true_reach.items()) + [("default", self.default_reach)]:
            if not 0.0 <= value <= 1.0:
                raise ValidationError(f"true_reach {key} must lie in [0, 1], got {value}")
        if not self.max_rpm > 0:
            raise ValidationError("max_rpm must be positive")
        if self.rpm_slope < 0:
            raise ValidationError("rpm_slope must be non-negative")
        if self.walk_speed <= 0:
            raise ValidationError("walk_speed must be positive")
        for name in ("reach_noise", "rep_noise", "stand_up_latency", "touch_latency"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be non-negative")
        if not 0.0 <= self.too_hard_probability <= 1.0:
            raise ValidationError("too_hard_probability must lie in [0, 1]")

    def reach_for(self, exercise_id: str, side: Side | str) -> float:
        return self.true_reach.get((exercise_id, Side(side).value), self.default_reach)

    @classmethod
    def from_dict(cls, data: dict) -> "SimulatedUser":
        data = dict(data)
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ValidationError(f"unknown user profile keys: {', '.join(unknown)}")
        if "body" in data:
            data["body"] = BodyDimensions.from_dict(data["body"])
        reach = {}
        for ex_id, value in data.pop("true_reach", {}).items():
            if isinstance(value, dict):
                for side, frac in value.items():
                    reach[(ex_id, Side(side).value)] = float(frac)
            else:
                for side in Side:
                    reach[(ex_id, side.value)] = float(value)
        return cls(true_reach=reach, **data)


def load_user(path: str | Path) -> SimulatedUser:
    with open(path, encoding="utf-8") as fh:
        try:
            return SimulatedUser.from_dict(json.load(fh))
        except json.JSONDecodeError as exc:
            raise ValidationError(f"{path}: invalid JSON ({exc})") from exc


def attempt_touch(user: SimulatedUser, model: ExerciseModel, side: Side | str,
                  f_diff: float, rng: np.random.Generator) -> float | None:
    """Return the time to touch a target at ``f_diff``, or None on a miss."""
    if not 0.0 <= f_diff <= 1.0:
        raise ValidationError(f"f_diff must lie in [0, 1], got {f_diff}")
    # Both draws happen unconditionally to keep the stream aligned.
    noise = user.reach_noise * rng.standard_normal()
    latency = user.touch_latency * rng.uniform(0.75, 1.25)
    if f_diff <= user.reach_for(model.id, side) + noise:
        return float(latency)
    return None


def expected_reps(user: SimulatedUser, f_diff: float, set_duration: float) -> float:
    return max(0.0, user.max_rpm * (1.0 - user.rpm_slope * f_diff)) * set_duration / 60.0


def set_rep_count(user: SimulatedUser, f_diff: float, set_duration: float,
                  rng: np.random.Generator, true_reach: float | None = None) -> int:
    if not 0.0 <= f_diff <= 1.0:
        raise ValidationError(f"f_diff must lie in [0, 1], got {f_diff}")
    if set_duration <= 0:
        raise ValidationError("set_duration must be positive")
    reach = user.default_reach if true_reach is None else true_reach
    noise = user.rep_noise * rng.standard_normal()
    if f_diff > reach + user.reach_noise:
        return 0
    return max(0, math.floor(expected_reps(user, f_diff, set_duration) + noise + 0.5))


def contact_schedule(user: SimulatedUser, reps: int, set_duration: float,
                     rng: np.random.Generator) -> list[tuple[float, float]]:
    """Spread ``reps`` presses over a set as (onset, amplitude) pairs.

    Presses are evenly paced with a little jitter and never overlap, so the
    detector sees exactly one excursion per press.
    """
    if reps <= 0:
        return []
    usable = max(set_duration - BUMP_WIDTH - 0.05, 0.0)
    interval = usable / reps
    out = []
    for j in range(reps):
        slack = max(interval - BUMP_WIDTH - 0.05, 0.0)
        onset = (j + 0.5) * interval + rng.uniform(-0.1, 0.1) * slack
        amp = user.contact_amplitude * rng.uniform(0.8, 1.2)
        if rng.random() < user.too_hard_probability:
            amp = max(amp, 1500.0) * rng.uniform(1.1, 1.4)
        out.append((float(min(max(onset, 0.0), usable)), float(amp)))
    return out


def raised_cosine(t: np.ndarray, onset: float, amplitude: float,
                  width: float = BUMP_WIDTH) -> np.ndarray:
    phase = (t - onset) / width
    inside = (phase >= 0.0) & (phase <= 1.0)
    return np.where(inside, amplitude * 0.5 * (1.0 - np.cos(2.0 * np.pi * phase)), 0.0)


def synth_trace(events, duration: float, baseline: float, sample_rate: float) -> PressureTrace:
    """Baseline plus one raised-cosine bump per (onset, amplitude); overlaps add."""
    n = int(round(duration * sample_rate))
    t = np.arange(n) / sample_rate
    samples = np.full(n, float(baseline))
    for onset, amplitude in events:
        if not 0.0 <= onset <= duration:
            raise ValidationError(f"event onset {onset} outside [0, {duration}]")
        samples += raised_cosine(t, onset, amplitude)
    return PressureTrace(sample_rate=sample_rate, baseline=float(baseline), samples=samples)
