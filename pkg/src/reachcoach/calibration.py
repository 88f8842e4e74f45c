"""Range-of-motion calibration by haptic sweep.

The target starts at the easiest point and advances along the difficulty
vector one step at a time.  The user gets ``dwell_timeout`` seconds to touch
each position; the first miss ends the sweep.  The starting difficulty is
the farthest touched fraction less a safety margin.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .body import BodyDimensions
from .difficulty import clamp01
from .errors import ValidationError
from .exercises import ExerciseModel, Side, target_set
from .simulated_user import SimulatedUser, attempt_touch


@dataclass(frozen=True)
class CalibrationConfig:
    step: float = 0.1
    dwell_timeout: float = 3.0
    safety_margin: float = 0.1

    def __post_init__(self):
        if not 0 < self.step <= 0.25:
            raise ValidationError(f"calibration step must lie in (0, 0.25], got {self.step}")
        if not 0 <= self.safety_margin < 1:
            raise ValidationError(f"safety_margin must lie in [0, 1), got {self.safety_margin}")
        if not self.dwell_timeout > 0:
            raise ValidationError("dwell_timeout must be positive")

    def fractions(self) -> list[float]:
        # Built from integer multiples and rounded so 3 * 0.1 is 0.3, not 0.30000000000000004.
        n = int(np.floor(1.0 / self.step + 1e-9))
        out = [round(i * self.step, 12) for i in range(n + 1)]
        if out[-1] < 1.0:
            out.append(1.0)
        return out


@dataclass(frozen=True)
class CalibrationSample:
    fraction: float
    touched: bool
    time_to_touch: float | None  # None when the dwell timed out
    target: tuple = ()  # hip-frame position probed


@dataclass(frozen=True)
class CalibrationResult:
    f_diff_start: float
    max_reached_fraction: float
    samples: tuple

    @property
    def elapsed(self) -> float:
        """Seconds of user response time spent in the sweep."""
        return sum(s.time_to_touch if s.touched else 0.0 for s in self.samples)


def run_calibration(model: ExerciseModel, body: BodyDimensions, side: Side | str,
                    user: SimulatedUser, cfg: CalibrationConfig = CalibrationConfig(),
                    rng: np.random.Generator | None = None) -> CalibrationResult:
    side = Side(side)
    if rng is None:
        rng = np.random.default_rng(user.rng_seed)
    samples = []
    max_reached = 0.0
    for frac in cfg.fractions():
        latency = attempt_touch(user, model, side, frac, rng)
        touched = latency is not None and latency <= cfg.dwell_timeout
        where = tuple(target_set(model, body, frac, side).x_target.tolist())
        samples.append(CalibrationSample(frac, touched, latency if touched else None, where))
        if not touched:
            break
        max_reached = frac
    f_start = round(clamp01(max_reached - cfg.safety_margin), 12)
    return CalibrationResult(f_start, max_reached, tuple(samples))
