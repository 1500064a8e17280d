"""File formats: project config, schedule CSV, keypoints and analysis tables."""

from __future__ import annotations

import csv
import io
import math
import os
import tempfile
from dataclasses import dataclass, fields
from pathlib import Path
from typing import Any, Mapping

import yaml

from .analysis.notes import NoteRecord
from .analysis.posture import KeypointFrame
from .analysis.scores import TestResponse
from .core import (
    DEFAULT_VARIATIONS,
    ActionEvent,
    ActionKind,
    LectureTimeline,
    Mode,
    RowKind,
    Schedule,
    SeatingChart,
    check_variations,
)
from .scheduler import DynamicParams, ModeParams, StableParams

SCHEDULE_HEADER = "character_id,row,seat,start_s,action,variation,transition_s"
KEYPOINT_HEADER = "timestamp_s,neck_x,neck_y,hip_x,hip_y,neck_conf,hip_conf"


class FormatError(ValueError):
    """Malformed input file; the message names the offending line."""


def write_atomic(path: str | Path, data: str | bytes) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    mode = "wb" if isinstance(data, bytes) else "w"
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, mode, **({} if mode == "wb" else {"encoding": "utf-8", "newline": ""})) as f:
            f.write(data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# project config


@dataclass(frozen=True)
class ProjectConfig:
    timeline: LectureTimeline
    chart: SeatingChart
    mode: Mode
    params: ModeParams
    seed: int

    def __post_init__(self):
        object.__setattr__(self, "mode", Mode(self.mode))
        object.__setattr__(self, "seed", int(self.seed))
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")

    def to_dict(self) -> dict[str, Any]:
        p = self.params
        return {
            "seed": self.seed,
            "mode": self.mode.value,
            "timeline": {
                "duration": self.timeline.duration,
                "key_segments": [list(s) for s in self.timeline.key_segments],
                "video_segments": [list(s) for s in self.timeline.video_segments],
            },
            "seating": {
                "rows": [list(r) for r in self.chart.rows],
                "kinds": [k.value for k in self.chart.kinds],
            },
            "params": {
                "transition_min": p.transition_min,
                "transition_max": p.transition_max,
                "opening_hold": p.opening_hold,
                "variations": {k.value: v for k, v in p.variations.items()},
                "stable": {f.name: getattr(p.stable, f.name) for f in fields(StableParams)},
                "dynamic": {f.name: getattr(p.dynamic, f.name) for f in fields(DynamicParams)},
            },
        }

    def dump(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False, default_flow_style=None)


def _sub(data: Mapping, key: str) -> Mapping:
    value = data.get(key) or {}
    if not isinstance(value, Mapping):
        raise FormatError(f"config: {key!r} must be a mapping")
    return value


def config_from_dict(data: Mapping[str, Any]) -> ProjectConfig:
    if "seed" not in data:
        raise FormatError("config: 'seed' is required")
    if "mode" not in data:
        raise FormatError("config: 'mode' is required")
    tl = _sub(data, "timeline")
    if "duration" not in tl:
        raise FormatError("config: 'timeline.duration' is required")
    try:
        timeline = LectureTimeline(
            duration=tl["duration"],
            key_segments=[tuple(s) for s in tl.get("key_segments") or []],
            video_segments=[tuple(s) for s in tl.get("video_segments") or []],
        )
        seating = _sub(data, "seating")
        if seating:
            chart = SeatingChart(
                rows=seating["rows"],
                kinds=tuple(RowKind(k) for k in seating["kinds"]),
            )
        else:
            chart = SeatingChart.default()
        p = _sub(data, "params")
        variations = {ActionKind.parse(k): v for k, v in (p.get("variations") or {}).items()}
        shared = {k: p[k] for k in ("transition_min", "transition_max", "opening_hold") if k in p}
        params = ModeParams(
            stable=StableParams(**_sub(p, "stable")),
            dynamic=DynamicParams(**_sub(p, "dynamic")),
            variations={**DEFAULT_VARIATIONS, **variations},
            **shared,
        )
        return ProjectConfig(timeline, chart, Mode(data["mode"]), params, data["seed"])
    except (TypeError, KeyError, ValueError) as exc:
        raise FormatError(f"config: {exc}") from exc


def load_config(path: str | Path) -> ProjectConfig:
    with open(path, encoding="utf-8") as f:
        data = yaml.safe_load(f)
    if not isinstance(data, Mapping):
        raise FormatError(f"{path}: config must be a mapping")
    return config_from_dict(data)


# ---------------------------------------------------------------------------
# schedule CSV


def serialize_schedule(schedule: Schedule) -> str:
    lines = [SCHEDULE_HEADER]
    for ev in schedule.all_events():
        seat = schedule.chart.seat(ev.character_id)
        lines.append(
            f"{ev.character_id},{seat.kind.value},{seat.lateral},{ev.start:.3f},"
            f"{ev.action.value},{ev.variation},{ev.transition:.3f}"
        )
    return "\n".join(lines) + "\n"


def _chart_from_rows(rows: list[tuple[int, str, int]]) -> SeatingChart:
    by_kind: dict[RowKind, dict[int, int]] = {RowKind.FRONT: {}, RowKind.BACK: {}}
    for cid, kind, seat in rows:
        placed = by_kind[RowKind(kind)]
        if placed.get(seat, cid) != cid:
            raise FormatError(f"seat {kind}/{seat} holds two characters; pass the seating chart explicitly")
        placed[seat] = cid
    out_rows, kinds = [], []
    for kind in (RowKind.FRONT, RowKind.BACK):
        seats = by_kind[kind]
        if sorted(seats) != list(range(len(seats))):
            raise FormatError(f"{kind.value} row seats are not contiguous from 0")
        out_rows.append(tuple(seats[i] for i in range(len(seats))))
        kinds.append(kind)
    try:
        return SeatingChart(tuple(out_rows), tuple(kinds))
    except ValueError as exc:
        raise FormatError(str(exc)) from exc


def parse_schedule(
    text: str,
    timeline: LectureTimeline,
    chart: SeatingChart | None = None,
    mode: Mode | str = Mode.STABLE,
    seed: int = 0,
    variations: Mapping[ActionKind, int] | None = None,
) -> Schedule:
    """Inverse of ``serialize_schedule``.

    Raises FormatError naming the line for a bad header, malformed field,
    unknown action, out-of-range variation, seat mismatch or non-increasing
    start within one character.
    """
    variations = check_variations(variations or DEFAULT_VARIATIONS)
    lines = text.splitlines()
    if not lines or lines[0].strip() != SCHEDULE_HEADER:
        raise FormatError(f"line 1: expected header {SCHEDULE_HEADER!r}")
    parsed = []
    for lineno, line in enumerate(lines[1:], start=2):
        if not line.strip():
            continue
        parts = line.split(",")
        if len(parts) != 7:
            raise FormatError(f"line {lineno}: expected 7 fields, got {len(parts)}")
        try:
            cid, kind, seat = int(parts[0]), parts[1], int(parts[2])
            start, transition = float(parts[3]), float(parts[6])
            variation = int(parts[5])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
        if kind not in ("front", "back"):
            raise FormatError(f"line {lineno}: unknown row {kind!r}")
        try:
            action = ActionKind.parse(parts[4])
        except ValueError as exc:
            raise FormatError(f"line {lineno}: {exc}") from None
        if not 1 <= variation <= variations[action]:
            raise FormatError(
                f"line {lineno}: variation {variation} out of range 1..{variations[action]} for {action.value}"
            )
        if not (math.isfinite(start) and math.isfinite(transition)) or start < 0 or transition < 0:
            raise FormatError(f"line {lineno}: times must be finite and non-negative")
        parsed.append((lineno, cid, kind, seat, action, variation, start, transition))

    if chart is None:
        chart = _chart_from_rows([(p[1], p[2], p[3]) for p in parsed])
    events: list[list[ActionEvent]] = [[] for _ in range(chart.n_characters)]
    for lineno, cid, kind, seat, action, variation, start, transition in parsed:
        try:
            s = chart.seat(cid)
        except KeyError:
            raise FormatError(f"line {lineno}: unknown character {cid}") from None
        if s.kind.value != kind or s.lateral != seat:
            raise FormatError(f"line {lineno}: character {cid} is not seated at {kind}/{seat}")
        evs = events[cid]
        if evs and start <= evs[-1].start:
            raise FormatError(f"line {lineno}: start {start:.3f} does not increase for character {cid}")
        evs.append(ActionEvent(cid, action, variation, start, transition))
    return Schedule(chart, timeline, Mode(mode), seed, tuple(tuple(e) for e in events), variations)


def read_schedule(path: str | Path, config: ProjectConfig | None = None) -> Schedule:
    text = Path(path).read_text(encoding="utf-8")
    if config is not None:
        return parse_schedule(
            text, config.timeline, config.chart, config.mode, config.seed, config.params.variations
        )
    # without a config the lecture is assumed to end with the last transition
    probe = parse_schedule(text, LectureTimeline(1e12))
    end = max(ev.end_of_transition for evs in probe.events for ev in evs)
    return parse_schedule(text, LectureTimeline(max(end, 0.001)), probe.chart)


# ---------------------------------------------------------------------------
# analysis inputs


def _rows(path: str | Path, header: list[str]) -> list[tuple[int, dict[str, str]]]:
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.DictReader(f)
        if reader.fieldnames is None or [h.strip() for h in reader.fieldnames[: len(header)]] != header:
            raise FormatError(f"{path}: line 1: expected header starting {','.join(header)}")
        return [(i, row) for i, row in enumerate(reader, start=2)]


def read_keypoints(path: str | Path) -> list[KeypointFrame]:
    frames = []
    for lineno, row in _rows(path, KEYPOINT_HEADER.split(",")):
        try:
            vals = [float(row[k]) for k in KEYPOINT_HEADER.split(",")]
        except (TypeError, ValueError) as exc:
            raise FormatError(f"{path}: line {lineno}: {exc}") from None
        t = vals[0]
        if math.isnan(t) or t < 0:
            raise FormatError(f"{path}: line {lineno}: timestamp must be a non-negative number")
        if any(math.isnan(v) for v in vals[1:]):
            raise FormatError(f"{path}: line {lineno}: NaN keypoint value")
        frames.append(KeypointFrame(t, (vals[1], vals[2]), (vals[3], vals[4]), vals[5], vals[6]))
    return frames


_TRUE = {"1", "yes", "true", "y"}
_FALSE = {"0", "no", "false", "n"}


def read_groups(path: str | Path) -> dict[str, tuple[str, bool]]:
    """participant -> (mode, took_notes) from ``participant_id,mode,took_notes``."""
    out = {}
    for lineno, row in _rows(path, ["participant_id", "mode", "took_notes"]):
        mode = (row["mode"] or "").strip().lower()
        flag = (row["took_notes"] or "").strip().lower()
        if mode not in ("stable", "dynamic"):
            raise FormatError(f"{path}: line {lineno}: mode must be stable or dynamic")
        if flag not in _TRUE | _FALSE:
            raise FormatError(f"{path}: line {lineno}: took_notes must be yes/no")
        out[row["participant_id"].strip()] = (mode, flag in _TRUE)
    return out


def read_notes(path: str | Path) -> list[NoteRecord]:
    out = []
    for lineno, row in _rows(path, ["participant_id", "slide", "segment", "count"]):
        try:
            out.append(
                NoteRecord(row["participant_id"].strip(), int(row["slide"]), row["segment"].strip(), int(row["count"]))
            )
        except (TypeError, ValueError) as exc:
            raise FormatError(f"{path}: line {lineno}: {exc}") from None
    return out


def read_answer_key(path: str | Path) -> list[int]:
    rows = _rows(path, ["question", "answer"])
    try:
        pairs = sorted((int(r["question"]), int(r["answer"])) for _, r in rows)
    except (TypeError, ValueError) as exc:
        raise FormatError(f"{path}: {exc}") from None
    if [q for q, _ in pairs] != list(range(1, len(pairs) + 1)):
        raise FormatError(f"{path}: questions must be numbered 1..N")
    return [a for _, a in pairs]


def read_responses(path: str | Path, key: list[int]) -> list[TestResponse]:
    with open(path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if not header or header[0] != "participant_id":
            raise FormatError(f"{path}: line 1: expected header participant_id,q1,...")
        out = []
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            try:
                resp = TestResponse(row[0].strip(), tuple(int(x) for x in row[1:]), tuple(key))
                if len(resp.answers) != len(key):
                    raise ValueError(f"{len(resp.answers)} answers for {len(key)} questions")
            except ValueError as exc:
                raise FormatError(f"{path}: line {lineno}: {exc}") from None
            out.append(resp)
    return out


def read_question_slides(path: str | Path) -> dict[int, list[int]]:
    """``question,slides`` with slides separated by ';'."""
    out = {}
    for lineno, row in _rows(path, ["question", "slides"]):
        try:
            out[int(row["question"])] = [int(s) for s in row["slides"].split(";") if s.strip()]
        except (TypeError, ValueError) as exc:
            raise FormatError(f"{path}: line {lineno}: {exc}") from None
    return out


def table_csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()
