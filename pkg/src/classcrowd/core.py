"""Domain types shared by the scheduler, metrics and analysis code.

Times are decimal seconds with millisecond resolution. Generated times are
always exact multiples of 0.001 s so that the CSV format round-trips.
"""

from __future__ import annotations

import bisect
import enum
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence


class ActionKind(enum.Enum):
    NOTETAKING = "notetaking"
    NODDING = "nodding"
    SLEEPING = "sleeping"
    LOOKING_AWAY = "looking_away"
    ELBOW_LEANING = "elbow_leaning"
    LEANING_FORWARD = "leaning_forward"
    SITTING_UPRIGHT = "sitting_upright"

    @property
    def valence(self) -> int:
        return valence(self)

    @classmethod
    def parse(cls, name: str) -> "ActionKind":
        try:
            return cls(name)
        except ValueError:
            raise ValueError(f"unknown action name {name!r}") from None


POSITIVE = (ActionKind.NOTETAKING, ActionKind.NODDING)
NEGATIVE = (ActionKind.SLEEPING, ActionKind.LOOKING_AWAY, ActionKind.ELBOW_LEANING)
NEUTRAL = (ActionKind.LEANING_FORWARD, ActionKind.SITTING_UPRIGHT)

DEFAULT_VARIATIONS: Mapping[ActionKind, int] = {
    ActionKind.NOTETAKING: 3,
    ActionKind.NODDING: 3,
    ActionKind.SLEEPING: 2,
    ActionKind.LOOKING_AWAY: 2,
    ActionKind.ELBOW_LEANING: 2,
    ActionKind.LEANING_FORWARD: 1,
    ActionKind.SITTING_UPRIGHT: 1,
}


def valence(action: ActionKind) -> int:
    """+1 for positive actions, -1 for negative ones, 0 for neutral ones."""
    if action in POSITIVE:
        return 1
    if action in NEGATIVE:
        return -1
    return 0


def check_variations(variations: Mapping[ActionKind, int]) -> dict[ActionKind, int]:
    out = {}
    for kind in ActionKind:
        count = int(variations.get(kind, DEFAULT_VARIATIONS[kind]))
        if count not in (1, 2, 3):
            raise ValueError(f"{kind.value}: variation count must be 1..3, got {count}")
        out[kind] = count
    return out


def to_ms(seconds: float) -> int:
    return int(round(seconds * 1000.0))


def from_ms(ms: int) -> float:
    return ms / 1000.0


class Mode(enum.Enum):
    STABLE = "stable"
    DYNAMIC = "dynamic"


class RowKind(enum.Enum):
    FRONT = "front"
    BACK = "back"


@dataclass(frozen=True)
class Seat:
    character_id: int
    row_index: int
    lateral: int
    kind: RowKind


@dataclass(frozen=True)
class SeatingChart:
    """Rows ordered front to back; each row lists character ids left to right."""

    rows: tuple[tuple[int, ...], ...]
    kinds: tuple[RowKind, ...]

    def __post_init__(self):
        rows = tuple(tuple(int(c) for c in row) for row in self.rows)
        kinds = tuple(RowKind(k) for k in self.kinds)
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "kinds", kinds)
        if len(rows) != len(kinds):
            raise ValueError("one row kind is required per row")
        if any(len(row) == 0 for row in rows):
            raise ValueError("rows must not be empty")
        ids = sorted(c for row in rows for c in row)
        if ids != list(range(len(ids))):
            raise ValueError("character ids must be unique and cover 0..N-1")
        if RowKind.FRONT not in kinds or RowKind.BACK not in kinds:
            raise ValueError("at least one front row and one back row are required")

    @classmethod
    def default(cls, front: int = 11, back: int = 11) -> "SeatingChart":
        return cls(
            rows=(tuple(range(front)), tuple(range(front, front + back))),
            kinds=(RowKind.FRONT, RowKind.BACK),
        )

    @cached_property
    def _seats(self) -> dict[int, Seat]:
        return {
            cid: Seat(cid, r, lateral, self.kinds[r])
            for r, row in enumerate(self.rows)
            for lateral, cid in enumerate(row)
        }

    @property
    def n_characters(self) -> int:
        return sum(len(row) for row in self.rows)

    def seat(self, character_id: int) -> Seat:
        try:
            return self._seats[character_id]
        except KeyError:
            raise KeyError(f"unknown character id {character_id}") from None

    def ids_of(self, kind: RowKind) -> list[int]:
        return [c for row, k in zip(self.rows, self.kinds) if k is kind for c in row]

    def row_indices(self, kind: RowKind) -> list[int]:
        return [r for r, k in enumerate(self.kinds) if k is kind]

    def front_center_distance(self) -> dict[int, float]:
        """Grid distance of every seat from the centre of the frontmost front row,
        normalised to [0, 1] by the largest distance in the chart."""
        r0 = self.row_indices(RowKind.FRONT)[0]
        center = (len(self.rows[r0]) - 1) / 2.0
        raw = {
            s.character_id: math.hypot(s.row_index - r0, s.lateral - center)
            for s in self._seats.values()
        }
        top = max(raw.values())
        if top == 0:
            return {c: 0.0 for c in raw}
        return {c: d / top for c, d in raw.items()}


def _check_segments(segments: Iterable[Sequence[float]], duration: float, label: str):
    out = []
    for seg in segments:
        start, end = float(seg[0]), float(seg[1])
        if not (0 <= start < end <= duration):
            raise ValueError(f"{label} segment ({start}, {end}) outside [0, {duration}]")
        out.append((start, end))
    for (s0, e0), (s1, e1) in zip(out, out[1:]):
        if s1 < e0:
            raise ValueError(f"{label} segments must be sorted and non-overlapping")
    return tuple(out)


@dataclass(frozen=True)
class LectureTimeline:
    duration: float
    key_segments: tuple[tuple[float, float], ...] = ()
    video_segments: tuple[tuple[float, float], ...] = ()

    def __post_init__(self):
        duration = float(self.duration)
        if duration <= 0:
            raise ValueError("duration must be positive")
        object.__setattr__(self, "duration", duration)
        keys = _check_segments(self.key_segments, duration, "key")
        videos = _check_segments(self.video_segments, duration, "video")
        for ks, ke in keys:
            for vs, ve in videos:
                if ks < ve and vs < ke:
                    raise ValueError(f"key segment ({ks}, {ke}) overlaps video ({vs}, {ve})")
        object.__setattr__(self, "key_segments", keys)
        object.__setattr__(self, "video_segments", videos)

    def in_video(self, t: float) -> bool:
        return any(s <= t <= e for s, e in self.video_segments)


@dataclass(frozen=True)
class ActionEvent:
    character_id: int
    action: ActionKind
    variation: int
    start: float
    transition: float = 0.0

    def __post_init__(self):
        if self.variation < 1:
            raise ValueError("variation must be >= 1")
        if self.start < 0 or self.transition < 0:
            raise ValueError("start and transition must be non-negative")

    @property
    def end_of_transition(self) -> float:
        return self.start + self.transition


@dataclass(frozen=True)
class Schedule:
    """Per-character action timelines.

    ``events[c]`` holds character ``c``'s events in start order. Ordering and
    range are not enforced here; ``metrics.validate`` reports violations.
    """

    chart: SeatingChart
    timeline: LectureTimeline
    mode: Mode
    seed: int
    events: tuple[tuple[ActionEvent, ...], ...]
    variations: Mapping[ActionKind, int] = field(
        default_factory=lambda: dict(DEFAULT_VARIATIONS)
    )

    def __post_init__(self):
        events = tuple(tuple(evs) for evs in self.events)
        object.__setattr__(self, "events", events)
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "variations", check_variations(self.variations))
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if len(events) != self.chart.n_characters:
            raise ValueError("one event list is required per character")
        for cid, evs in enumerate(events):
            for ev in evs:
                if ev.character_id != cid:
                    raise ValueError(f"event for character {ev.character_id} filed under {cid}")

    @property
    def n_characters(self) -> int:
        return self.chart.n_characters

    @cached_property
    def _starts(self) -> tuple[list[float], ...]:
        return tuple([ev.start for ev in evs] for evs in self.events)

    def all_events(self) -> list[ActionEvent]:
        """Every event, ordered by (start, character_id)."""
        return sorted(
            (ev for evs in self.events for ev in evs),
            key=lambda ev: (ev.start, ev.character_id),
        )

    def event_at(self, character_id: int, t: float) -> ActionEvent:
        if not 0 <= character_id < self.n_characters:
            raise KeyError(f"unknown character id {character_id}")
        if not 0 <= t <= self.timeline.duration:
            raise ValueError(f"t={t} outside [0, {self.timeline.duration}]")
        i = bisect.bisect_right(self._starts[character_id], t) - 1
        if i < 0:
            raise ValueError(f"character {character_id} has no event at or before t={t}")
        return self.events[character_id][i]

    def action_at(self, character_id: int, t: float) -> tuple[ActionKind, bool]:
        ev = self.event_at(character_id, t)
        return ev.action, t < ev.start + ev.transition


def action_at(schedule: Schedule, character_id: int, t: float) -> tuple[ActionKind, bool]:
    """Action held by a character at ``t`` and whether it is still blending in."""
    return schedule.action_at(character_id, t)


class GazeTarget(enum.Enum):
    SLIDES = "slides"
    NOTEBOOK = "notebook"


@dataclass(frozen=True)
class GazeCycle:
    phases: tuple[tuple[GazeTarget, float], ...]

    @property
    def total(self) -> float:
        return sum(d for _, d in self.phases)
