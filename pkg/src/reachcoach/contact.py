"""Touch detection on the end effector's internal pressure signal.

Detection is relative to the pressure captured at startup.  An excursion
starts when the signal rises ``rise_threshold`` above baseline and the
detector re-arms only once the signal has dropped below
``release_threshold`` *and* ``debounce`` seconds have passed since onset.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ValidationError


@dataclass(frozen=True)
class DetectorConfig:
    rise_threshold: float = 250.0
    release_threshold: float = 125.0
    debounce: float = 0.2
    too_hard_threshold: float = 1500.0

    def __post_init__(self):
        if not 0 < self.release_threshold < self.rise_threshold < self.too_hard_threshold:
            raise ValidationError(
                "detector needs 0 < release < rise < too_hard thresholds, got "
                f"{self.release_threshold}, {self.rise_threshold}, {self.too_hard_threshold}"
            )
        if self.debounce < 0:
            raise ValidationError(f"debounce must be non-negative, got {self.debounce}")


@dataclass(frozen=True)
class PressureTrace:
    sample_rate: float
    baseline: float
    samples: np.ndarray

    def __post_init__(self):
        if not self.sample_rate > 0:
            raise ValidationError(f"sample_rate must be positive, got {self.sample_rate}")
        samples = np.asarray(self.samples, dtype=float)
        if samples.ndim != 1:
            raise ValidationError("pressure samples must be one-dimensional")
        if not np.all(np.isfinite(samples)):
            bad = int(np.flatnonzero(~np.isfinite(samples))[0])
            raise ValidationError(f"non-finite pressure sample at index {bad}")
        if not math.isfinite(self.baseline):
            raise ValidationError("baseline pressure must be finite")
        object.__setattr__(self, "samples", samples)

    @property
    def duration(self) -> float:
        return len(self.samples) / self.sample_rate

    def times(self) -> np.ndarray:
        return np.arange(len(self.samples)) / self.sample_rate


@dataclass(frozen=True)
class ContactEvent:
    onset_time: float
    peak_pressure_delta: float
    too_hard: bool


def detect_contacts(trace: PressureTrace, cfg: DetectorConfig = DetectorConfig()) -> list[ContactEvent]:
    events = []
    rate = trace.sample_rate
    armed = True
    onset_idx = 0
    peak = 0.0

    def close():
        events.append(ContactEvent(onset_idx / rate, peak, peak >= cfg.too_hard_threshold))

    for i, p in enumerate(trace.samples):
        delta = float(p) - trace.baseline
        if armed:
            if delta >= cfg.rise_threshold:
                armed = False
                onset_idx = i
                peak = delta
            continue
        if delta < cfg.release_threshold and (i - onset_idx) / rate >= cfg.debounce:
            close()
            armed = True
            continue
        peak = max(peak, delta)
    if not armed:
        close()
    return events


def load_trace_csv(path: str | Path, baseline: float | None = None) -> PressureTrace:
    """Read a ``time_s,pressure_pa`` CSV.

    The sample rate is inferred from the median time step.  Without an
    explicit ``baseline`` the first sample is taken as the startup pressure.
    """
    times, values = [], []
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["time_s", "pressure_pa"]:
            raise ValidationError(f"{path}: expected header 'time_s,pressure_pa'")
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                t, p = (float(v) for v in row)
            except ValueError:
                raise ValidationError(f"{path}:{lineno}: malformed row {row!r}") from None
            if times and t <= times[-1]:
                raise ValidationError(f"{path}:{lineno}: time column must increase")
            times.append(t)
            values.append(p)
    if len(times) < 2:
        raise ValidationError(f"{path}: need at least two samples")
    rate = 1.0 / float(np.median(np.diff(times)))
    p0 = values[0] if baseline is None else baseline
    return PressureTrace(sample_rate=rate, baseline=p0, samples=np.asarray(values))


def write_trace_csv(trace: PressureTrace, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["time_s", "pressure_pa"])
        for t, p in zip(trace.times(), trace.samples):
            w.writerow([f"{t:.6f}", f"{p:.6f}"])
