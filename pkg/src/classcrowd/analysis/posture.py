"""Torso angles from side-view neck and hip keypoints."""

from __future__ import annotations

import enum
import math
from collections import defaultdict
from dataclasses import dataclass
from typing import Iterable, Sequence

CONFIDENCE_THRESHOLD = 0.3

GROUPS = ("Stable/notes", "Stable/no-notes", "Dynamic/notes", "Dynamic/no-notes")


def group_label(mode: str, took_notes: bool) -> str:
    label = f"{mode.capitalize()}/{'notes' if took_notes else 'no-notes'}"
    if label not in GROUPS:
        raise ValueError(f"unknown mode {mode!r}")
    return label


class Facing(enum.Enum):
    IMAGE_LEFT = "image-left"
    IMAGE_RIGHT = "image-right"


class LowConfidence(ValueError):
    pass


class UndefinedAngle(ValueError):
    pass


@dataclass(frozen=True)
class KeypointFrame:
    """Image coordinates, y pointing down."""

    timestamp: float
    neck: tuple[float, float]
    mid_hip: tuple[float, float]
    neck_conf: float = 1.0
    hip_conf: float = 1.0

    @classmethod
    def from_hips(cls, timestamp, neck, left_hip, right_hip, neck_conf=1.0, left_conf=1.0, right_conf=1.0):
        mid = ((left_hip[0] + right_hip[0]) / 2.0, (left_hip[1] + right_hip[1]) / 2.0)
        return cls(timestamp, tuple(neck), mid, neck_conf, min(left_conf, right_conf))

    def confident(self, threshold: float = CONFIDENCE_THRESHOLD) -> bool:
        return self.neck_conf >= threshold and self.hip_conf >= threshold


def torso_angle(
    frame: KeypointFrame,
    facing: Facing | str = Facing.IMAGE_LEFT,
    threshold: float = CONFIDENCE_THRESHOLD,
) -> float:
    """Angle in degrees at the hip between the facing direction and the torso.

    An upright torso gives 90; leaning back (away from the facing direction)
    gives more than 90.
    """
    facing = Facing(facing)
    if not frame.confident(threshold):
        raise LowConfidence(f"frame at {frame.timestamp} s below confidence {threshold}")
    dx = frame.neck[0] - frame.mid_hip[0]
    dy = frame.mid_hip[1] - frame.neck[1]  # flip to y-up
    if dx == 0 and dy == 0:
        raise UndefinedAngle(f"neck and hip coincide at {frame.timestamp} s")
    fx = -1.0 if facing is Facing.IMAGE_LEFT else 1.0
    # angle between (fx, 0) and (dx, dy)
    return math.degrees(math.atan2(abs(dy), fx * dx))


@dataclass(frozen=True)
class PostureSeries:
    participant: str
    group: str
    samples: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if self.group not in GROUPS:
            raise ValueError(f"unknown group {self.group!r}")


def posture_series(
    participant: str,
    group: str,
    frames: Iterable[KeypointFrame],
    facing: Facing | str = Facing.IMAGE_LEFT,
    threshold: float = CONFIDENCE_THRESHOLD,
) -> PostureSeries:
    """Angles for every usable frame; low-confidence and degenerate frames are skipped."""
    samples = []
    for frame in frames:
        try:
            samples.append((frame.timestamp, torso_angle(frame, facing, threshold)))
        except (LowConfidence, UndefinedAngle):
            continue
    return PostureSeries(participant, group, tuple(samples))


def minute_averages(series: PostureSeries | Sequence[tuple[float, float]]) -> list[tuple[int, float]]:
    samples = series.samples if isinstance(series, PostureSeries) else series
    if not samples:
        raise ValueError("series is empty")
    bins: dict[int, list[float]] = defaultdict(list)
    for t, angle in samples:
        bins[int(math.floor(t / 60.0))].append(angle)
    return [(k, math.fsum(v) / len(v)) for k, v in sorted(bins.items())]
