"""Personalized exercise targets, adaptive difficulty and robot reachability
for robot-led stretching sessions."""

__version__ = "0.1.0"

from .body import BodyDimensions, load_body
from .calibration import CalibrationConfig, CalibrationResult, run_calibration
from .cognitive import WordVerdict, validate_cognitive_word
from .contact import ContactEvent, DetectorConfig, PressureTrace, detect_contacts
from .difficulty import (DifficultyState, PerformanceBrackets, ScoreBracket, bracket_score,
                         delta_for, update_difficulty)
from .errors import ConfigError, ValidationError
from .exercises import (ExerciseModel, Side, TargetSet, anchor_point, catalog, get_exercise,
                        mirror_point, target_set)
from .session import SessionEvent, SessionPlan, run_session, serialize_log, study_plan, timed_up_and_go
from .simulated_user import SimulatedUser, attempt_touch, set_rep_count, synth_trace

__all__ = [
    "BodyDimensions", "load_body", "CalibrationConfig", "CalibrationResult", "run_calibration",
    "WordVerdict", "validate_cognitive_word", "ContactEvent", "DetectorConfig", "PressureTrace",
    "detect_contacts", "DifficultyState", "PerformanceBrackets", "ScoreBracket", "bracket_score",
    "delta_for", "update_difficulty", "ConfigError", "ValidationError", "ExerciseModel", "Side",
    "TargetSet", "anchor_point", "catalog", "get_exercise", "mirror_point", "target_set",
    "SessionEvent", "SessionPlan", "run_session", "serialize_log", "study_plan",
    "timed_up_and_go", "SimulatedUser", "attempt_touch", "set_rep_count", "synth_trace",
]
