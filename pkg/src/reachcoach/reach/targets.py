"""Target clouds: generation from the exercise catalog and CSV I/O."""
from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from ..body import BodyDimensions
from ..errors import ValidationError
from ..exercises import SIDES, catalog, target_set, to_world

CLOUD_FRACTIONS = (0.0, 0.25, 0.5, 0.75, 1.0)


def catalog_cloud(body: BodyDimensions, fractions=CLOUD_FRACTIONS) -> np.ndarray:
    """World-frame targets for every modeled exercise, both sides, at each difficulty."""
    points = []
    for model in catalog():
        if model.is_timed_up_and_go:
            continue
        for side in SIDES:
            for f in fractions:
                points.append(to_world(target_set(model, body, f, side).x_target, model, body))
    return np.array(points)


def read_targets_csv(path: str | Path) -> np.ndarray:
    rows = []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["x", "y", "z"]:
            raise ValidationError(f"{path}:1: expected header 'x,y,z'")
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            try:
                if len(row) != 3:
                    raise ValueError
                point = [float(c) for c in row]
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: malformed target row {row!r}") from None
            if not np.all(np.isfinite(point)):
                raise ValidationError(f"{path}:{lineno}: non-finite coordinate")
            rows.append(point)
    if not rows:
        raise ValidationError(f"{path}: no target rows")
    return np.array(rows)


def targets_csv_text(points, flags=None) -> str:
    lines = ["x,y,z" + (",reachable" if flags is not None else "")]
    for i, (x, y, z) in enumerate(np.asarray(points, dtype=float)):
        line = f"{x:.6f},{y:.6f},{z:.6f}"
        if flags is not None:
            line += f",{int(bool(flags[i]))}"
        lines.append(line)
    return "\n".join(lines) + "\n"
