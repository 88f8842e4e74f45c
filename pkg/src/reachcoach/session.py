"""Deterministic exercise-session simulator.

Per exercise: calibrate right then left, then run the timed sets for the
right side followed by the left side.  After every set the repetition rate
is bracketed and the side's difficulty factor is nudged for the next set.
Everything the robot would say or play is recorded as a ``SessionEvent``.
"""
from __future__ import annotations

import csv
import io
import json
import math
import zlib
from dataclasses import dataclass, field

import numpy as np

from .calibration import CalibrationConfig, run_calibration
from .cognitive import DEFAULT_REGISTRY, WordRegistry, WordVerdict, normalize_word, validate_cognitive_word
from .contact import DetectorConfig, detect_contacts
from .difficulty import (DEFAULT_DELTA, DifficultyState, PerformanceBrackets, ScoreBracket,
                         bracket_score, delta_for, reps_per_minute, update_difficulty)
from .errors import ValidationError
from .exercises import SIDES, STUDY_SEQUENCE, TUG_DISTANCE, get_exercise, target_set
from .simulated_user import SimulatedUser, contact_schedule, set_rep_count, synth_trace

TICKS_PER_SECOND = 100  # 10 ms simulation clock
ROBOT_MOVE_TIME = 1.0  # seconds to reposition the target between calibration probes

EVENT_KINDS = (
    "session_start", "calibration_sample", "calibration_done", "set_start", "rep",
    "too_hard", "cognitive_word", "set_complete", "difficulty_changed", "tug_start",
    "tug_complete", "exercise_complete", "session_end",
)

# Words a distracted participant might blurt out; none belong to a built-in category.
DISTRACTORS = (
    "atlanta", "chicago", "table", "banana", "purple", "guitar", "window", "boston",
    "pencil", "river", "dallas", "orange", "seattle", "hammer", "cloud", "denver",
)


@dataclass(frozen=True)
class PlannedExercise:
    exercise_id: str
    sets_per_side: int = 2
    set_duration: float = 30.0
    cognitive: str | None = None
    brackets: PerformanceBrackets | None = None  # None: the catalog model's brackets
    delta: float | None = None  # None: the plan-wide delta


@dataclass(frozen=True)
class SessionPlan:
    exercises: tuple = ()
    seed: int = 0
    delta: float = DEFAULT_DELTA
    calibration: CalibrationConfig = CalibrationConfig()
    detector: DetectorConfig = DetectorConfig()
    sample_rate: float = 100.0  # pressure sensor, Hz
    baseline_pressure: float = 1000.0  # Pa, captured at startup
    tug_distance: float = TUG_DISTANCE

    def validate(self, registry: WordRegistry = DEFAULT_REGISTRY) -> None:
        if not 0 < self.delta < 1:
            raise ValidationError(f"delta must lie in (0, 1), got {self.delta}")
        if self.sample_rate <= 0:
            raise ValidationError("sample_rate must be positive")
        if self.tug_distance < 0:
            raise ValidationError("tug_distance must be non-negative")
        for i, ex in enumerate(self.exercises):
            get_exercise(ex.exercise_id)
            if ex.sets_per_side < 1:
                raise ValidationError(f"exercise #{i} ({ex.exercise_id}): sets_per_side must be >= 1")
            if not ex.set_duration > 0:
                raise ValidationError(f"exercise #{i} ({ex.exercise_id}): set_duration must be positive")
            if ex.delta is not None and not 0 < ex.delta < 1:
                raise ValidationError(f"exercise #{i} ({ex.exercise_id}): delta must lie in (0, 1)")
            if ex.cognitive is not None:
                registry.words(ex.cognitive)


def study_plan(seed: int = 0, sets_per_side: int = 2, set_duration: float = 30.0) -> SessionPlan:
    """The six-exercise reference session: two 30 s sets per side."""
    exercises = tuple(PlannedExercise(ex_id, sets_per_side, set_duration, cog)
                      for ex_id, cog in STUDY_SEQUENCE)
    return SessionPlan(exercises=exercises, seed=seed)


@dataclass(frozen=True)
class SessionEvent:
    time_s: float
    kind: str
    payload: dict = field(default_factory=dict)


def exercise_rng(seed: int, user_seed: int, exercise_id: str, occurrence: int) -> np.random.Generator:
    """Generator for one exercise, keyed by id so plan reordering keeps streams."""
    key = zlib.crc32(exercise_id.encode("utf-8"))
    return np.random.default_rng(np.random.SeedSequence([seed, user_seed, key, occurrence]))


def timed_up_and_go(user: SimulatedUser, distance: float = TUG_DISTANCE,
                    rng: np.random.Generator | None = None) -> float:
    """Seconds for the user to stand, walk ``distance`` meters and touch the target.

    Without ``rng`` the mean touch latency is used.
    """
    if distance < 0:
        raise ValidationError(f"distance must be non-negative, got {distance}")
    touch = user.touch_latency if rng is None else user.touch_latency * rng.uniform(0.75, 1.25)
    if distance == 0:
        return user.stand_up_latency
    return distance / user.walk_speed + user.stand_up_latency + touch


def _ticks(seconds: float) -> int:
    return int(math.ceil(seconds * TICKS_PER_SECOND - 1e-9))


def _say_word(rng: np.random.Generator, vocab: frozenset, used: set) -> str:
    r = rng.random()
    if r < 0.1 and used:
        return sorted(used)[int(rng.integers(len(used)))].upper()
    fresh = sorted(vocab - used)
    if r < 0.2 or not fresh:
        return DISTRACTORS[int(rng.integers(len(DISTRACTORS)))]
    word = fresh[int(rng.integers(len(fresh)))]
    return word.title() if rng.random() < 0.5 else f"  {word} "


class _Recorder:
    def __init__(self):
        self.tick = 0
        self.events: list[SessionEvent] = []

    def emit(self, kind: str, at_tick: int | None = None, **payload):
        tick = self.tick if at_tick is None else at_tick
        self.events.append(SessionEvent(tick / TICKS_PER_SECOND, kind, payload))

    def advance(self, seconds: float):
        self.tick += _ticks(seconds)


def run_session(plan: SessionPlan, user: SimulatedUser,
                registry: WordRegistry = DEFAULT_REGISTRY) -> list[SessionEvent]:
    plan.validate(registry)
    rec = _Recorder()
    rec.emit("session_start", seed=plan.seed, user_seed=user.rng_seed,
             exercises=[ex.exercise_id for ex in plan.exercises])
    occurrences: dict[str, int] = {}
    for planned in plan.exercises:
        n = occurrences.get(planned.exercise_id, 0)
        occurrences[planned.exercise_id] = n + 1
        rng = exercise_rng(plan.seed, user.rng_seed, planned.exercise_id, n)
        _run_exercise(rec, plan, planned, user, rng, registry)
    rec.emit("session_end", duration_s=rec.tick / TICKS_PER_SECOND)
    return rec.events


def _run_exercise(rec, plan, planned, user, rng, registry):
    model = get_exercise(planned.exercise_id)
    ex_id = model.id
    if model.is_timed_up_and_go:
        rec.emit("tug_start", exercise=ex_id, distance_m=plan.tug_distance)
        seconds = timed_up_and_go(user, plan.tug_distance, rng)
        rec.advance(seconds)
        rec.emit("tug_complete", exercise=ex_id, seconds=round(seconds, 6))
        rec.emit("exercise_complete", exercise=ex_id)
        return

    delta = plan.delta if planned.delta is None else planned.delta
    brackets = planned.brackets or model.brackets
    cfg = plan.calibration
    states = {}
    for side in SIDES:
        result = run_calibration(model, user.body, side, user, cfg, rng)
        for s in result.samples:
            rec.advance(ROBOT_MOVE_TIME + (s.time_to_touch if s.touched else cfg.dwell_timeout))
            rec.emit("calibration_sample", exercise=ex_id, side=side.value, fraction=s.fraction,
                     touched=s.touched, time_to_touch=s.time_to_touch, target=list(s.target))
        rec.emit("calibration_done", exercise=ex_id, side=side.value,
                 f_diff_start=result.f_diff_start,
                 max_reached_fraction=result.max_reached_fraction)
        states[side] = DifficultyState(result.f_diff_start, delta)

    vocab = registry.words(planned.cognitive) if planned.cognitive else None
    used: set[str] = set()
    duration = planned.set_duration
    for side in SIDES:
        reach = user.reach_for(ex_id, side)
        for set_idx in range(planned.sets_per_side):
            state = states[side]
            f = state.f_diff
            start = rec.tick
            target = target_set(model, user.body, f, side).x_target
            rec.emit("set_start", exercise=ex_id, side=side.value, set=set_idx, f_diff=f,
                     target=[round(float(v), 6) for v in target])
            planned_reps = set_rep_count(user, f, duration, rng, true_reach=reach)
            schedule = contact_schedule(user, planned_reps, duration, rng)
            trace = synth_trace(schedule, duration, plan.baseline_pressure, plan.sample_rate)
            contacts = detect_contacts(trace, plan.detector)
            for k, c in enumerate(contacts):
                at = start + int(math.floor(c.onset_time * TICKS_PER_SECOND + 1e-9))
                rec.emit("rep", at, exercise=ex_id, side=side.value, set=set_idx, rep=k + 1,
                         peak_delta_pa=round(c.peak_pressure_delta, 3))
                if c.too_hard:
                    rec.emit("too_hard", at, exercise=ex_id, side=side.value, set=set_idx,
                             peak_delta_pa=round(c.peak_pressure_delta, 3))
                if vocab is not None:
                    word = _say_word(rng, vocab, used)
                    verdict = validate_cognitive_word(word, planned.cognitive, used, registry)
                    if verdict is WordVerdict.VALID:
                        used.add(normalize_word(word))
                    rec.emit("cognitive_word", at, exercise=ex_id, side=side.value, set=set_idx,
                             category=planned.cognitive, word=word, verdict=verdict.value)
            rec.tick = start + _ticks(duration)
            reps = len(contacts)
            rpm = reps_per_minute(reps, duration)
            bracket = bracket_score(reps, duration, brackets)
            rec.emit("set_complete", exercise=ex_id, side=side.value, set=set_idx, reps=reps,
                     rpm=round(rpm, 6), bracket=bracket.value, f_diff=f,
                     feedback=_feedback(bracket))
            new_state = update_difficulty(state, bracket)
            rec.emit("difficulty_changed", exercise=ex_id, side=side.value, set=set_idx,
                     old_f_diff=f, new_f_diff=new_state.f_diff,
                     requested_delta=delta_for(bracket, delta))
            states[side] = new_state
    rec.emit("exercise_complete", exercise=ex_id,
             final_f_diff={s.value: states[s].f_diff for s in SIDES})


def _feedback(bracket: ScoreBracket) -> str:
    return {ScoreBracket.EXCELLENT: "making_it_harder",
            ScoreBracket.GOOD: "keep_it_up",
            ScoreBracket.POOR: "making_it_easier"}[bracket]


def serialize_log(events) -> str:
    lines = []
    for ev in events:
        obj = {"time_s": ev.time_s, "kind": ev.kind, "payload": ev.payload}
        lines.append(json.dumps(obj, sort_keys=False, separators=(",", ":"),
                                default=_json_default) + "\n")
    return "".join(lines)


def _json_default(obj):
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    raise TypeError(f"not JSON serializable: {type(obj).__name__}")


def parse_log(text: str) -> list[SessionEvent]:
    events = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            obj = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ValidationError(f"log line {lineno}: {exc}") from None
        if not isinstance(obj, dict) or set(obj) != {"time_s", "kind", "payload"}:
            raise ValidationError(f"log line {lineno}: expected an object with keys time_s, kind, payload")
        events.append(SessionEvent(obj["time_s"], obj["kind"], obj["payload"]))
    return events


SUMMARY_COLUMNS = ("exercise", "side", "set", "reps", "rpm", "bracket", "f_diff_before", "f_diff_after")


def set_summary(events) -> list[dict]:
    rows = []
    pending = None
    for ev in events:
        if ev.kind == "set_complete":
            pending = ev.payload
        elif ev.kind == "difficulty_changed" and pending is not None:
            rows.append({
                "exercise": pending["exercise"], "side": pending["side"], "set": pending["set"],
                "reps": pending["reps"], "rpm": pending["rpm"], "bracket": pending["bracket"],
                "f_diff_before": ev.payload["old_f_diff"], "f_diff_after": ev.payload["new_f_diff"],
            })
            pending = None
    return rows


def summary_csv(events) -> str:
    buf = io.StringIO()
    w = csv.DictWriter(buf, fieldnames=SUMMARY_COLUMNS, lineterminator="\n")
    w.writeheader()
    for row in set_summary(events):
        w.writerow({**row, "rpm": f"{row['rpm']:.6f}",
                    "f_diff_before": f"{row['f_diff_before']:.6f}",
                    "f_diff_after": f"{row['f_diff_after']:.6f}"})
    return buf.getvalue()


def final_difficulties(events) -> dict:
    """exercise id -> {side: f_diff} after the last set of each side."""
    out = {}
    for ev in events:
        if ev.kind == "exercise_complete" and "final_f_diff" in ev.payload:
            out[ev.payload["exercise"]] = dict(ev.payload["final_f_diff"])
    return out
