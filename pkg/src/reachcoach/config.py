"""Session config files (YAML or JSON) and ``key=value`` overrides."""
from __future__ import annotations

import copy
from pathlib import Path

import yaml

from .calibration import CalibrationConfig
from .cognitive import WordRegistry
from .contact import DetectorConfig
from .difficulty import PerformanceBrackets
from .errors import ConfigError, ValidationError
from .session import PlannedExercise, SessionPlan, study_plan
from .simulated_user import SimulatedUser, load_user

TOP_LEVEL_KEYS = {
    "seed", "delta", "sample_rate", "baseline_pressure", "tug_distance", "defaults",
    "calibration", "detector", "word_files", "exercises", "user", "user_file",
}
EXERCISE_KEYS = {"id", "sets_per_side", "set_duration", "cognitive", "brackets", "delta"}
DEFAULT_KEYS = {"sets_per_side", "set_duration", "brackets"}


def _check_keys(section: str, data, allowed: set) -> dict:
    if not isinstance(data, dict):
        raise ConfigError(f"{section}: expected a mapping, got {type(data).__name__}")
    unknown = sorted(set(data) - allowed)
    if unknown:
        raise ConfigError(f"{section}: unknown keys {', '.join(unknown)}")
    return data


def _build(cls, section: str, data):
    data = _check_keys(section, data or {}, set(cls.__dataclass_fields__))
    try:
        return cls(**data)
    except TypeError as exc:
        raise ConfigError(f"{section}: {exc}") from None


def apply_overrides(raw: dict, overrides) -> dict:
    """Apply ``a.b.c=value`` strings; values are parsed as YAML scalars.

    Integer path components index into lists (``exercises.0.set_duration=20``).
    """
    raw = copy.deepcopy(raw)
    for item in overrides or ():
        if "=" not in item:
            raise ConfigError(f"override {item!r} is not key=value")
        path, _, text = item.partition("=")
        keys = path.strip().split(".")
        value = yaml.safe_load(text)
        node = raw
        for key in keys[:-1]:
            if isinstance(node, list):
                node = node[_index(key, node, path)]
            else:
                node = node.setdefault(key, {})
        last = keys[-1]
        if isinstance(node, list):
            node[_index(last, node, path)] = value
        else:
            node[last] = value
    return raw


def _index(key: str, seq: list, path: str) -> int:
    try:
        i = int(key)
        seq[i]
    except (ValueError, IndexError):
        raise ConfigError(f"override {path!r}: bad list index {key!r}") from None
    return i


def read_config(path: str | Path) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh)
    except yaml.YAMLError as exc:
        raise ConfigError(f"{path}: cannot parse ({exc})") from None
    return {} if raw is None else raw


def build_session(raw: dict, base_dir: str | Path = ".", seed: int | None = None):
    """Return ``(plan, user, registry)`` from a parsed config mapping."""
    _check_keys("config", raw, TOP_LEVEL_KEYS)
    base_dir = Path(base_dir)
    defaults = _check_keys("defaults", raw.get("defaults", {}), DEFAULT_KEYS)
    default_brackets = (_build(PerformanceBrackets, "defaults.brackets", defaults["brackets"])
                        if "brackets" in defaults else None)

    registry = WordRegistry()
    word_files = raw.get("word_files") or {}
    if not isinstance(word_files, dict):
        raise ConfigError("word_files: expected a mapping of category to path")
    for category, rel in word_files.items():
        registry.register(category, base_dir / rel)

    if "exercises" in raw:
        entries = raw["exercises"] or []
        if not isinstance(entries, list):
            raise ConfigError("exercises: expected a list")
        planned = []
        for i, entry in enumerate(entries):
            if isinstance(entry, str):
                entry = {"id": entry}
            entry = _check_keys(f"exercises[{i}]", entry, EXERCISE_KEYS)
            if "id" not in entry:
                raise ConfigError(f"exercises[{i}]: missing id")
            brackets = default_brackets
            if "brackets" in entry:
                brackets = _build(PerformanceBrackets, f"exercises[{i}].brackets", entry["brackets"])
            planned.append(PlannedExercise(
                exercise_id=str(entry["id"]),
                sets_per_side=int(entry.get("sets_per_side", defaults.get("sets_per_side", 2))),
                set_duration=float(entry.get("set_duration", defaults.get("set_duration", 30.0))),
                cognitive=entry.get("cognitive"),
                brackets=brackets,
                delta=entry.get("delta"),
            ))
        exercises = tuple(planned)
    else:
        exercises = study_plan().exercises

    plan = SessionPlan(
        exercises=exercises,
        seed=int(raw.get("seed", 0) if seed is None else seed),
        delta=float(raw.get("delta", 0.2)),
        calibration=_build(CalibrationConfig, "calibration", raw.get("calibration")),
        detector=_build(DetectorConfig, "detector", raw.get("detector")),
        sample_rate=float(raw.get("sample_rate", 100.0)),
        baseline_pressure=float(raw.get("baseline_pressure", 1000.0)),
        tug_distance=float(raw.get("tug_distance", 3.0)),
    )

    if "user" in raw and "user_file" in raw:
        raise ConfigError("give either user or user_file, not both")
    if "user_file" in raw:
        user = load_user(base_dir / raw["user_file"])
    else:
        user = SimulatedUser.from_dict(raw.get("user") or {})
    plan.validate(registry)
    return plan, user, registry


def load_session_config(path: str | Path, overrides=(), seed: int | None = None):
    raw = apply_overrides(read_config(path), overrides)
    try:
        return build_session(raw, Path(path).parent, seed)
    except ValidationError:
        raise
    except (TypeError, KeyError, ValueError, OSError) as exc:
        raise ValidationError(f"{path}: {exc}") from None

