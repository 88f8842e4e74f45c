import csv
import json
from pathlib import Path

import pytest

from reachcoach.body import REFERENCE_BODY
from reachcoach.cli import dumps_fixed, main
from reachcoach.reach.targets import catalog_cloud, targets_csv_text

CONFIGS = Path(__file__).resolve().parent.parent / "configs"


@pytest.fixture
def body_file(tmp_path):
    p = tmp_path / "body.json"
    p.write_text(json.dumps(REFERENCE_BODY.to_dict()))
    return p


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


class TestTargets:
    def test_midpoint_and_format(self, capsys, body_file):
        code, out, _ = run(capsys, "targets", "--body", body_file, "--exercise", "seated_forward_kick",
                           "--f-diff", "0.5")
        assert code == 0
        data = json.loads(out)
        assert data["x_target"] == data["x_0"] == [0.675, 0.175, 0.389711]
        assert '"x_0": [0.675000, 0.175000, 0.389711]' in out

    def test_byte_identical(self, capsys, body_file, tmp_path):
        args = ("targets", "--body", body_file, "--exercise", "seated_windmills", "--side", "left",
                "--f-diff", "0.3", "--out", tmp_path / "a.json")
        _, a, _ = run(capsys, *args)
        _, b, _ = run(capsys, *args)
        assert a == b == (tmp_path / "a.json").read_text()

    def test_knee_angle_flag(self, capsys, body_file):
        code, out, _ = run(capsys, "targets", "--body", body_file, "--exercise", "seated_forward_kick",
                           "--knee-angle", "90")
        assert code == 0
        assert json.loads(out)["x_0"] == [0.9, 0.175, 0.0]

    def test_unknown_exercise(self, capsys, body_file):
        code, _, err = run(capsys, "targets", "--body", body_file, "--exercise", "moonwalk")
        assert code == 2 and "moonwalk" in err

    def test_missing_body_file(self, capsys, tmp_path):
        code, _, err = run(capsys, "targets", "--body", tmp_path / "nope.json", "--exercise", "seated_windmills")
        assert code == 2 and "nope.json" in err

    def test_bad_fdiff_is_usage_error(self, capsys, body_file):
        with pytest.raises(SystemExit) as exc:
            main(["targets", "--body", str(body_file), "--exercise", "seated_windmills", "--f-diff", "1.5"])
        assert exc.value.code == 2


class TestSimulate:
    def test_default_plan(self, capsys, tmp_path):
        out = tmp_path / "log.jsonl"
        code, stdout, _ = run(capsys, "simulate", "--out", out, "--seed", "3")
        assert code == 0
        lines = out.read_text().splitlines()
        assert sum(json.loads(l)["kind"] == "set_complete" for l in lines) == 24
        rows = list(csv.DictReader((tmp_path / "log_summary.csv").open()))
        assert len(rows) == 24
        assert "seated_forward_kick" in stdout

    def test_seed_controls_log(self, capsys, tmp_path):
        cfg = CONFIGS / "study_session.yaml"
        logs = []
        for seed, name in ((1, "a"), (1, "b"), (2, "c")):
            path = tmp_path / f"{name}.jsonl"
            assert run(capsys, "simulate", "--config", cfg, "--seed", seed, "--out", path)[0] == 0
            logs.append(path.read_bytes())
        assert logs[0] == logs[1] != logs[2]

    def test_zero_exercises(self, capsys, tmp_path):
        out = tmp_path / "e.jsonl"
        code, _, _ = run(capsys, "simulate", "--config", CONFIGS / "study_session.yaml", "--set", "exercises=[]",
                         "--out", out)
        assert code == 0
        assert [json.loads(l)["kind"] for l in out.read_text().splitlines()] == ["session_start", "session_end"]

    def test_invalid_config_writes_nothing(self, capsys, tmp_path):
        cfg = tmp_path / "bad.yaml"
        cfg.write_text("exercises: [seated_windmills]\ndelta: 3\n")
        out = tmp_path / "run" / "log.jsonl"
        code, _, err = run(capsys, "simulate", "--config", cfg, "--out", out)
        assert code == 2 and "delta" in err
        assert not (tmp_path / "run").exists()

    def test_missing_config(self, capsys, tmp_path):
        code, _, err = run(capsys, "simulate", "--config", tmp_path / "none.yaml", "--out", tmp_path / "x.jsonl")
        assert code == 2 and "none.yaml" in err
        assert list(tmp_path.iterdir()) == []


class TestCalibrate:
    def test_user_profile(self, capsys):
        code, out, _ = run(capsys, "calibrate", "--user", CONFIGS / "user.json", "--exercise",
                           "seated_forward_kick", "--side", "right")
        assert code == 0
        data = json.loads(out)
        right = data["sides"]["right"]
        assert right["f_diff_start"] <= right["max_reached_fraction"]
        assert right["samples"][-1]["touched"] is False

    def test_tug_rejected(self, capsys):
        code, _, err = run(capsys, "calibrate", "--exercise", "timed_up_and_go")
        assert code == 2 and "timed_up_and_go" in err


class TestReachability:
    @pytest.fixture
    def cloud_file(self, tmp_path):
        p = tmp_path / "cloud.csv"
        p.write_text(targets_csv_text(catalog_cloud(REFERENCE_BODY)[::3]))
        return p

    def test_mobile_robot_full_coverage(self, capsys, cloud_file, tmp_path):
        code, _, _ = run(capsys, "reachability", "--targets", cloud_file, "--robot", "sws", "--out", tmp_path / "r")
        assert code == 0
        report = json.loads((tmp_path / "r" / "report.json").read_text())
        assert report["fixed"]["fraction"] == 1.0
        rows = (tmp_path / "r" / "points.csv").read_text().splitlines()
        assert len(rows) - 1 == len(cloud_file.read_text().splitlines()) - 1

    def test_optimize_reports_both(self, capsys, cloud_file, tmp_path):
        code, stdout, _ = run(capsys, "reachability", "--targets", cloud_file, "--robot", "fixed_dual_arm",
                              "--optimize-base", "--restarts", "4", "--evaluations", "40", "--out", tmp_path / "r")
        assert code == 0
        report = json.loads((tmp_path / "r" / "report.json").read_text())
        assert report["optimized"]["fraction"] >= report["fixed"]["fraction"]
        for name in ("points.csv", "points_optimized.csv"):
            assert len((tmp_path / "r" / name).read_text().splitlines()) == 31

    def test_hip_frame_input(self, capsys, tmp_path):
        p = tmp_path / "hip.csv"
        p.write_text("x,y,z\n0.5,0.1,0.2\n")
        code, _, _ = run(capsys, "reachability", "--targets", p, "--frame", "hip", "--hip-height", "0.45",
                         "--out", tmp_path / "r")
        assert code == 0
        assert (tmp_path / "r" / "points.csv").read_text().splitlines()[1] == "0.500000,0.100000,0.650000,1"

    def test_malformed_row(self, capsys, tmp_path):
        p = tmp_path / "bad.csv"
        p.write_text("x,y,z\n0,0,1\n0,zero,1\n")
        code, _, err = run(capsys, "reachability", "--targets", p, "--out", tmp_path / "r")
        assert code == 2 and ":3" in err
        assert not (tmp_path / "r").exists()

    def test_optimize_needs_fixed_robot(self, capsys, cloud_file, tmp_path):
        code, _, _ = run(capsys, "reachability", "--targets", cloud_file, "--optimize-base", "--out", tmp_path / "r")
        assert code == 2


def test_dumps_fixed():
    assert dumps_fixed({"a": [1.0, -0.0], "b": None, "c": True, "d": 3}) == \
        '{\n  "a": [1.000000, 0.000000],\n  "b": null,\n  "c": true,\n  "d": 3\n}'
    with pytest.raises(ValueError):
        dumps_fixed(float("inf"))
