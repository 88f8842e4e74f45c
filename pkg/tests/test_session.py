import math
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st

from reachcoach.cognitive import (
    DEFAULT_REGISTRY, US_STATES, WordRegistry, WordVerdict, normalize_word, validate_cognitive_word,
)
from reachcoach.config import apply_overrides, build_session, load_session_config
from reachcoach.difficulty import PerformanceBrackets, bracket_score
from reachcoach.errors import ConfigError, ValidationError
from reachcoach.session import (
    PlannedExercise, SessionPlan, final_difficulties, parse_log, run_session, serialize_log,
    set_summary, summary_csv, study_plan, timed_up_and_go,
)
from reachcoach.simulated_user import SimulatedUser

from oracles import calibration_start, difficulty_trajectory

NOISY = SimulatedUser(reach_noise=0.05, rep_noise=1.5, too_hard_probability=0.1, rng_seed=4)


def kinds(events):
    return Counter(e.kind for e in events)


def sets_of(events):
    """Split the log into per-set windows [set_start .. set_complete]."""
    out, cur = [], None
    for e in events:
        if e.kind == "set_start":
            cur = [e]
        elif cur is not None:
            cur.append(e)
            if e.kind == "set_complete":
                out.append(cur)
                cur = None
    return out


class TestCognitive:
    def test_examples(self):
        assert validate_cognitive_word("Georgia", "us_states", set()) is WordVerdict.VALID
        assert validate_cognitive_word("  georgia ", "us_states", {"georgia"}) is WordVerdict.DUPLICATE
        assert validate_cognitive_word("Atlanta", "us_states", set()) is WordVerdict.OUT_OF_CATEGORY

    def test_multiword_states_normalize(self):
        assert validate_cognitive_word("new   HAMPSHIRE", "us_states", set()) is WordVerdict.VALID
        assert normalize_word("\tNorth  Dakota \n") == "north dakota"

    def test_fifty_states(self):
        assert len(US_STATES) == 50 == len({normalize_word(s) for s in US_STATES})

    def test_animals_bundled_and_custom_registry(self, tmp_path):
        assert validate_cognitive_word("Elephant", "animals", set()) is WordVerdict.VALID
        path = tmp_path / "fruit.txt"
        path.write_text("Apple\nbanana\n\n")
        reg = WordRegistry()
        reg.register("fruit", path)
        assert validate_cognitive_word(" APPLE", "fruit", set(), reg) is WordVerdict.VALID
        with pytest.raises(ConfigError):
            validate_cognitive_word("apple", "fruit", set())
        empty = tmp_path / "empty.txt"
        empty.write_text("\n")
        with pytest.raises(ConfigError):
            reg.register("nothing", empty)


def test_tug_examples():
    still = SimulatedUser(walk_speed=1.0, stand_up_latency=0.0, touch_latency=0.0)
    assert timed_up_and_go(still, 3.0) == 3.0
    u = SimulatedUser(stand_up_latency=1.5)
    assert timed_up_and_go(u, 0.0) == 1.5
    slow = SimulatedUser(walk_speed=0.5, stand_up_latency=0.0, touch_latency=0.0)
    fast = SimulatedUser(walk_speed=1.0, stand_up_latency=0.0, touch_latency=0.0)
    assert timed_up_and_go(fast, 3.0) == timed_up_and_go(slow, 3.0) / 2
    with pytest.raises(ValidationError):
        timed_up_and_go(u, -1.0)


def test_tug_in_plan():
    plan = SessionPlan(exercises=(PlannedExercise("timed_up_and_go"),))
    ev = run_session(plan, SimulatedUser())
    assert [e.kind for e in ev] == ["session_start", "tug_start", "tug_complete", "exercise_complete", "session_end"]
    assert ev[2].time_s >= 3.0


def test_study_plan_counts():
    ev = run_session(study_plan(seed=3), NOISY)
    c = kinds(ev)
    assert c["set_complete"] == 24 and c["calibration_done"] == 12 and c["difficulty_changed"] == 24
    assert c["session_start"] == c["session_end"] == 1
    assert set(c) <= {"session_start", "calibration_sample", "calibration_done", "set_start", "rep",
                      "too_hard", "cognitive_word", "set_complete", "difficulty_changed",
                      "exercise_complete", "session_end"}


def test_empty_plan():
    ev = run_session(SessionPlan(), SimulatedUser())
    assert [e.kind for e in ev] == ["session_start", "session_end"]


def test_determinism_and_seed_sensitivity():
    a = serialize_log(run_session(study_plan(seed=7), NOISY))
    b = serialize_log(run_session(study_plan(seed=7), NOISY))
    c = serialize_log(run_session(study_plan(seed=8), NOISY))
    assert a == b
    assert a != c


def test_log_codec():
    ev = run_session(study_plan(seed=2), NOISY)
    text = serialize_log(ev)
    assert parse_log(text) == ev
    assert serialize_log([]) == ""
    times = [e.time_s for e in ev]
    assert times == sorted(times)
    with pytest.raises(ValidationError, match="line 1"):
        parse_log("{not json}\n")


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 10**6), st.floats(0, 0.1), st.floats(0, 3), st.floats(0, 0.5))
def test_session_invariants(seed, reach_noise, rep_noise, p_hard):
    user = SimulatedUser(reach_noise=reach_noise, rep_noise=rep_noise, too_hard_probability=p_hard,
                         rng_seed=seed % 97)
    plan = study_plan(seed=seed)
    ev = run_session(plan, user)

    # Algorithm fidelity: each difficulty_changed applies exactly the bracket's delta, then clamps.
    changes = [e.payload for e in ev if e.kind == "difficulty_changed"]
    completes = [e.payload for e in ev if e.kind == "set_complete"]
    for done, ch in zip(completes, changes):
        step = {"Excellent": 0.2, "Good": 0.0, "Poor": -0.2}[done["bracket"]]
        assert ch["requested_delta"] == step
        assert ch["new_f_diff"] == pytest.approx(min(1.0, max(0.0, ch["old_f_diff"] + step)), abs=1e-12)

    # Next set on the same side starts where the previous one left off.
    last = {}
    for e in ev:
        key = (e.payload.get("exercise"), e.payload.get("side"))
        if e.kind == "calibration_done":
            last[key] = e.payload["f_diff_start"]
        elif e.kind == "set_start":
            assert e.payload["f_diff"] == last[key]
        elif e.kind == "difficulty_changed":
            last[key] = e.payload["new_f_diff"]

    # Duration lower bound.
    floor_s = sum(p.sets_per_side * 2 * p.set_duration for p in plan.exercises)
    assert ev[-1].time_s >= floor_s

    for window in sets_of(ev):
        done = window[-1].payload
        reps = [e for e in window if e.kind == "rep"]
        assert done["reps"] == len(reps)
        assert done["bracket"] == bracket_score(len(reps), 30.0).value
        assert all(window[0].time_s <= e.time_s <= window[-1].time_s for e in window)

    # Valid words are distinct within an exercise.
    by_ex = {}
    for e in ev:
        if e.kind == "cognitive_word" and e.payload["verdict"] == "valid":
            by_ex.setdefault(e.payload["exercise"], []).append(normalize_word(e.payload["word"]))
    for words in by_ex.values():
        assert len(words) == len(set(words))
        for w in words:
            assert validate_cognitive_word(w, "us_states" if w in DEFAULT_REGISTRY.words("us_states")
                                           else "animals", set()) is WordVerdict.VALID


def hand_simulation(true_reach, max_rpm, k, sets, duration=30.0):
    f = calibration_start(true_reach)
    out = []
    for _ in range(sets):
        reps = 0 if f > true_reach else math.floor(max(0.0, max_rpm * (1 - k * f)) * duration / 60 + 0.5)
        rpm = reps * 60 / duration
        b = "Excellent" if rpm >= 20 else "Good" if rpm >= 10 else "Poor"
        f = difficulty_trajectory(str(f), [b])[0]
        out.append(f)
    return out


@settings(max_examples=40, deadline=None)
@given(st.floats(0, 1), st.floats(5, 40), st.floats(0, 1.5), st.integers(1, 6))
def test_single_exercise_matches_hand_simulation(reach, max_rpm, k, sets):
    user = SimulatedUser(true_reach={("seated_forward_kick", s): reach for s in ("right", "left")},
                         max_rpm=max_rpm, rpm_slope=k)
    plan = SessionPlan(exercises=(PlannedExercise("seated_forward_kick", sets_per_side=sets),))
    ev = run_session(plan, user)
    traj = [e.payload["new_f_diff"] for e in ev if e.kind == "difficulty_changed"]
    want = hand_simulation(reach, max_rpm, k, sets)
    assert traj == pytest.approx(want + want, abs=1e-12)


def test_summary_and_finals():
    ev = run_session(study_plan(seed=1), NOISY)
    rows = set_summary(ev)
    assert len(rows) == 24
    csv_text = summary_csv(ev)
    assert csv_text.splitlines()[0] == "exercise,side,set,reps,rpm,bracket,f_diff_before,f_diff_after"
    assert len(csv_text.splitlines()) == 25
    finals = final_difficulties(ev)
    assert len(finals) == 6
    for ex_id, sides in finals.items():
        last = [r for r in rows if r["exercise"] == ex_id]
        assert sides["right"] == [r for r in last if r["side"] == "right"][-1]["f_diff_after"]


def test_plan_validation():
    with pytest.raises(ValidationError, match="nope"):
        run_session(SessionPlan(exercises=(PlannedExercise("nope"),)), SimulatedUser())
    with pytest.raises(ValidationError):
        run_session(SessionPlan(exercises=(PlannedExercise("seated_windmills", sets_per_side=0),)), SimulatedUser())
    with pytest.raises(ConfigError):
        run_session(SessionPlan(exercises=(PlannedExercise("seated_windmills", cognitive="colors"),)),
                    SimulatedUser())
    with pytest.raises(ValidationError):
        run_session(SessionPlan(delta=0.0), SimulatedUser())


def test_per_exercise_overrides():
    plan = SessionPlan(exercises=(PlannedExercise("seated_calf_raises", sets_per_side=3, set_duration=20.0,
                                                  brackets=PerformanceBrackets(40, 30), delta=0.1),))
    ev = run_session(plan, SimulatedUser(default_reach=1.0))
    changes = [e.payload for e in ev if e.kind == "difficulty_changed"]
    assert len(changes) == 6
    assert {c["requested_delta"] for c in changes} <= {0.1, 0.0, -0.1}


class TestConfig:
    def test_overrides(self):
        raw = {"exercises": [{"id": "seated_windmills"}], "delta": 0.2}
        out = apply_overrides(raw, ["delta=0.1", "exercises.0.set_duration=20", "user.max_rpm=30"])
        assert out == {"exercises": [{"id": "seated_windmills", "set_duration": 20}], "delta": 0.1,
                       "user": {"max_rpm": 30}}
        assert raw["delta"] == 0.2
        with pytest.raises(ConfigError):
            apply_overrides(raw, ["exercises.5.set_duration=20"])
        with pytest.raises(ConfigError):
            apply_overrides(raw, ["delta"])

    def test_defaults_to_study_plan(self):
        plan, user, _ = build_session({})
        assert [p.exercise_id for p in plan.exercises] == [p.exercise_id for p in study_plan().exercises]
        assert user == SimulatedUser()

    def test_unknown_keys_rejected(self):
        with pytest.raises(ConfigError, match="colour"):
            build_session({"colour": 1})
        with pytest.raises(ConfigError, match="reps"):
            build_session({"exercises": [{"id": "seated_windmills", "reps": 3}]})

    def test_yaml_file_with_user_file(self, tmp_path):
        (tmp_path / "user.json").write_text('{"max_rpm": 30, "rng_seed": 2}')
        (tmp_path / "words.txt").write_text("red\ngreen\nblue\n")
        cfg = tmp_path / "s.yaml"
        cfg.write_text("seed: 4\nuser_file: user.json\nword_files: {colors: words.txt}\n"
                       "exercises:\n  - {id: seated_windmills, cognitive: colors, sets_per_side: 1}\n")
        plan, user, registry = load_session_config(cfg, ["seed=9"])
        assert plan.seed == 9 and user.max_rpm == 30
        assert registry.words("colors") == frozenset({"red", "green", "blue"})
        ev = run_session(plan, user, registry)
        assert kinds(ev)["set_complete"] == 2

    def test_bad_values_are_validation_errors(self, tmp_path):
        cfg = tmp_path / "s.yaml"
        cfg.write_text("exercises:\n  - {id: seated_windmills, set_duration: fast}\n")
        with pytest.raises(ValidationError):
            load_session_config(cfg)
        cfg.write_text("exercises: [\n")
        with pytest.raises(ValidationError):
            load_session_config(cfg)
