"""Score brackets and the between-set difficulty update."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace

from .errors import ValidationError

DEFAULT_DELTA = 0.2


class ScoreBracket(str, enum.Enum):
    EXCELLENT = "Excellent"
    GOOD = "Good"
    POOR = "Poor"

    @property
    def rank(self) -> int:
        return {"Poor": 0, "Good": 1, "Excellent": 2}[self.value]


@dataclass(frozen=True)
class PerformanceBrackets:
    """RPM thresholds; a rate exactly on a threshold earns the higher bracket."""

    excellent_min_rpm: float = 20.0
    good_min_rpm: float = 10.0

    def __post_init__(self):
        if not self.excellent_min_rpm > self.good_min_rpm > 0:
            raise ValidationError(
                "brackets need excellent_min_rpm > good_min_rpm > 0, got "
                f"{self.excellent_min_rpm}, {self.good_min_rpm}"
            )


def reps_per_minute(reps: int, set_duration: float) -> float:
    if set_duration <= 0:
        raise ValidationError(f"set_duration must be positive, got {set_duration}")
    if reps < 0:
        raise ValidationError(f"reps must be non-negative, got {reps}")
    return reps * 60.0 / set_duration


def bracket_score(reps: int, set_duration: float,
                  brackets: PerformanceBrackets = PerformanceBrackets()) -> ScoreBracket:
    rpm = reps_per_minute(reps, set_duration)
    if rpm >= brackets.excellent_min_rpm:
        return ScoreBracket.EXCELLENT
    if rpm >= brackets.good_min_rpm:
        return ScoreBracket.GOOD
    return ScoreBracket.POOR


def delta_for(bracket: ScoreBracket, delta: float = DEFAULT_DELTA) -> float:
    if not 0 < delta < 1:
        raise ValidationError(f"delta must lie in (0, 1), got {delta}")
    if bracket is ScoreBracket.EXCELLENT:
        return delta
    if bracket is ScoreBracket.POOR:
        return -delta
    return 0.0


def clamp01(value: float) -> float:
    return min(1.0, max(0.0, value))


@dataclass(frozen=True)
class DifficultyState:
    f_diff: float
    delta: float = DEFAULT_DELTA
    history: tuple = field(default=())  # (set_index, bracket, f_diff_after)

    def __post_init__(self):
        if not 0.0 <= self.f_diff <= 1.0:
            raise ValidationError(f"f_diff must lie in [0, 1], got {self.f_diff}")
        if not 0 < self.delta < 1:
            raise ValidationError(f"delta must lie in (0, 1), got {self.delta}")


def update_difficulty(state: DifficultyState, bracket: ScoreBracket) -> DifficultyState:
    # Rounded so that repeated +/-0.2 steps land on the decimal grid instead
    # of accumulating binary drift (0.5 + 0.2 - 0.2 == 0.5 exactly).
    f_new = round(clamp01(state.f_diff + delta_for(bracket, state.delta)), 12)
    entry = (len(state.history), bracket, f_new)
    return replace(state, f_diff=f_new, history=state.history + (entry,))
