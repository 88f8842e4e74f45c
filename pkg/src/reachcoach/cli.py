"""Command-line entry point.

Exit codes: 0 success, 2 invalid input or usage, 1 unexpected failure.
Outputs are staged in temporary files and renamed into place only after
everything has been computed, so a failed run leaves nothing behind.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from pathlib import Path

import numpy as np

from . import __version__
from .body import load_body
from .calibration import CalibrationConfig, run_calibration
from .config import apply_overrides, build_session, load_session_config
from .errors import ValidationError
from .exercises import SIDES, Side, get_exercise, target_set, with_knee_angle
from .reach.coverage import ReachabilityConfig, coverage, optimize_base
from .reach.robots import HOME_POSE, get_robot
from .reach.targets import read_targets_csv, targets_csv_text
from .session import exercise_rng, final_difficulties, run_session, serialize_log, summary_csv
from .simulated_user import load_user


class UsageError(ValidationError):
    pass


def dumps_fixed(obj, indent: int = 2, _level: int = 0) -> str:
    """JSON with every float rendered to exactly six decimals."""
    pad, inner = " " * (indent * _level), " " * (indent * (_level + 1))
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps_fixed(v, indent, _level + 1)}"
                 for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if all(isinstance(v, (int, float, np.floating)) and not isinstance(v, bool) for v in obj) and obj:
            return "[" + ", ".join(dumps_fixed(v) for v in obj) + "]"
        if not obj:
            return "[]"
        return "[\n" + ",\n".join(inner + dumps_fixed(v, indent, _level + 1) for v in obj) + "\n" + pad + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (float, np.floating)):
        value = float(obj)
        if not math.isfinite(value):
            raise ValueError("non-finite number in output")
        text = f"{value:.6f}"
        return "0.000000" if text == "-0.000000" else text
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    return json.dumps(obj)


def write_outputs(files: dict) -> None:
    """Write {path: text} atomically per file after all content exists."""
    staged = []
    try:
        for path, text in files.items():
            path = Path(path)
            path.parent.mkdir(parents=True, exist_ok=True)
            fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
            with os.fdopen(fd, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
            staged.append((tmp, path))
        for tmp, path in staged:
            os.replace(tmp, path)
    finally:
        for tmp, _ in staged:
            if os.path.exists(tmp):
                os.unlink(tmp)


def _require_file(path, flag: str) -> Path:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"{flag}: file not found: {path}")
    return p


def _fraction(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0.0 <= value <= 1.0:
        raise argparse.ArgumentTypeError(f"f_diff must lie in [0, 1], got {value}")
    return value


def _pose(text: str) -> tuple:
    try:
        x, y, yaw = (float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x,y,yaw; got {text!r}") from None
    return x, y, yaw


def cmd_targets(args) -> int:
    body = load_body(_require_file(args.body, "--body"))
    model = get_exercise(args.exercise)
    if args.knee_angle is not None:
        model = with_knee_angle(model, math.radians(args.knee_angle))
    ts = target_set(model, body, args.f_diff, args.side)
    out = {
        "exercise": model.id,
        "side": ts.side.value,
        "f_diff": ts.f_diff,
        "x_min": ts.x_min.tolist(),
        "x_0": ts.x_0.tolist(),
        "x_max": ts.x_max.tolist(),
        "x_target": ts.x_target.tolist(),
    }
    text = dumps_fixed(out) + "\n"
    if args.out:
        write_outputs({args.out: text})
    sys.stdout.write(text)
    return 0


def _load_session(args):
    if args.config:
        cfg_path = _require_file(args.config, "--config")
        return load_session_config(cfg_path, args.set, args.seed)
    raw = apply_overrides({}, args.set)
    return build_session(raw, ".", args.seed)


def cmd_simulate(args) -> int:
    plan, user, registry = _load_session(args)
    events = run_session(plan, user, registry)
    log = serialize_log(events)
    out = Path(args.out)
    summary_path = Path(args.summary) if args.summary else out.with_name(out.stem + "_summary.csv")
    write_outputs({out: log, summary_path: summary_csv(events)})
    finals = final_difficulties(events)
    print(f"{'exercise':<26}{'right':>8}{'left':>8}")
    for ex_id, sides in finals.items():
        print(f"{ex_id:<26}{sides['right']:>8.2f}{sides['left']:>8.2f}")
    print(f"{len(events)} events -> {out}; per-set summary -> {summary_path}")
    return 0


def cmd_calibrate(args) -> int:
    if args.user:
        user = load_user(_require_file(args.user, "--user"))
        seed = args.seed or 0
        cal_cfg = CalibrationConfig()
    else:
        plan, user, _ = _load_session(args)
        seed = plan.seed
        cal_cfg = plan.calibration
    model = get_exercise(args.exercise)
    if model.is_timed_up_and_go:
        raise UsageError("timed_up_and_go has no range-of-motion calibration")
    rng = exercise_rng(seed, user.rng_seed, model.id, 0)
    sides = SIDES if args.side == "both" else (Side(args.side),)
    out = {"exercise": model.id, "sides": {}}
    for side in sides:
        res = run_calibration(model, user.body, side, user, cal_cfg, rng)
        out["sides"][side.value] = {
            "f_diff_start": res.f_diff_start,
            "max_reached_fraction": res.max_reached_fraction,
            "samples": [{"fraction": s.fraction, "touched": s.touched,
                         "time_to_touch": s.time_to_touch if s.touched else None}
                        for s in res.samples],
        }
    text = dumps_fixed(out) + "\n"
    if args.out:
        write_outputs({args.out: text})
    sys.stdout.write(text)
    return 0


def cmd_reachability(args) -> int:
    points = read_targets_csv(_require_file(args.targets, "--targets"))
    if args.frame == "hip":
        points = points + np.array([0.0, 0.0, args.hip_height])
    cfg = ReachabilityConfig(tolerance=args.tolerance, ik_restarts=args.restarts, seed=args.seed,
                             cma_evaluations=args.evaluations)
    robot = get_robot(args.robot, args.base)
    if args.optimize_base and args.robot != "fixed_dual_arm":
        raise UsageError("--optimize-base applies only to --robot fixed_dual_arm")
    out_dir = Path(args.out)
    files = {}
    if args.optimize_base:
        pose, best, initial = optimize_base(robot, points, cfg)
        report = {"robot": args.robot, "tolerance_m": cfg.tolerance,
                  "fixed": initial.to_dict(), "optimized": best.to_dict()}
        files[out_dir / "points.csv"] = targets_csv_text(points, initial.flags)
        files[out_dir / "points_optimized.csv"] = targets_csv_text(points, best.flags)
        print(f"fixed pose coverage     {initial.reachable}/{initial.total} = {initial.fraction:.1%}")
        print(f"optimized pose coverage {best.reachable}/{best.total} = {best.fraction:.1%} "
              f"at base ({pose[0]:.3f}, {pose[1]:.3f}, {pose[2]:.3f})")
    else:
        rep = coverage(robot, points, cfg)
        report = {"robot": args.robot, "tolerance_m": cfg.tolerance, "fixed": rep.to_dict()}
        files[out_dir / "points.csv"] = targets_csv_text(points, rep.flags)
        print(f"coverage {rep.reachable}/{rep.total} = {rep.fraction:.1%}")
    files[out_dir / "report.json"] = dumps_fixed(report) + "\n"
    write_outputs(files)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reachcoach", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("targets", help="personalized target points for one exercise")
    p.add_argument("--body", required=True, help="body dimensions JSON (meters)")
    p.add_argument("--exercise", required=True)
    p.add_argument("--f-diff", type=_fraction, default=0.5)
    p.add_argument("--side", choices=[s.value for s in Side], default="right")
    p.add_argument("--knee-angle", type=float, help="knee extension angle, degrees")
    p.add_argument("--out")
    p.set_defaults(func=cmd_targets)

    def session_flags(p):
        p.add_argument("--config", help="session config, YAML or JSON (default: six-exercise reference session)")
        p.add_argument("--seed", type=int)
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config entry, e.g. delta=0.1 or exercises.0.set_duration=20")

    p = sub.add_parser("simulate", help="run a simulated exercise session")
    session_flags(p)
    p.add_argument("--out", required=True, help="JSONL event log path")
    p.add_argument("--summary", help="per-set CSV path (default: <out>_summary.csv)")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("calibrate", help="range-of-motion sweep for one exercise")
    session_flags(p)
    p.add_argument("--user", help="user profile JSON (instead of --config)")
    p.add_argument("--exercise", required=True)
    p.add_argument("--side", choices=["right", "left", "both"], default="both")
    p.add_argument("--out")
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("reachability", help="target coverage for a robot")
    p.add_argument("--targets", required=True, help="CSV with header x,y,z (meters)")
    p.add_argument("--robot", choices=["sws", "fixed_dual_arm"], default="sws")
    p.add_argument("--optimize-base", action="store_true")
    p.add_argument("--base", type=_pose, default=HOME_POSE, metavar="X,Y,YAW",
                   help="fixed robot torso pose on the floor (default: facing the user 1 m ahead)")
    p.add_argument("--frame", choices=["world", "hip"], default="world",
                   help="hip: targets are hip-frame points, lifted by --hip-height")
    p.add_argument("--hip-height", type=float, default=0.45)
    p.add_argument("--tolerance", type=float, default=0.02)
    p.add_argument("--restarts", type=int, default=8)
    p.add_argument("--evaluations", type=int, default=120, help="CMA-ES evaluation budget")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True, help="output directory")
    p.set_defaults(func=cmd_reachability)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:  # noqa: BLE001
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
