"""Seeded generation of Stable and Dynamic mode schedules.

All arithmetic runs on integer milliseconds; events are converted to seconds
only when they are emitted.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence


from .core import (
    DEFAULT_VARIATIONS,
    NEGATIVE,
    NEUTRAL,
    POSITIVE,
    ActionEvent,
    ActionKind,
    GazeCycle,
    GazeTarget,
    LectureTimeline,
    Mode,
    RowKind,
    Schedule,
    SeatingChart,
    check_variations,
    from_ms,
    to_ms,
)
from .rng import Rng, Stream, uniform_ms


@dataclass(frozen=True)
class StableParams:
    toggle_interval_min: float = 18.0
    toggle_interval_max: float = 30.0
    video_subintervals: int = 5

    def __post_init__(self):
        if not 0 < self.toggle_interval_min <= self.toggle_interval_max:
            raise ValueError("need 0 < toggle_interval_min <= toggle_interval_max")
        if self.video_subintervals < 0:
            raise ValueError("video_subintervals must be >= 0")


@dataclass(frozen=True)
class DynamicParams:
    lead_in: float = 2.0
    post_lean_forward: float = 4.0
    revert_wave_duration: float = 60.0
    # negative dwell policy: seconds a character holds one negative action
    # before drifting to another one; None disables drifting
    negative_dwell_min: float | None = 11.0
    negative_dwell_max: float | None = 13.0

    def __post_init__(self):
        if self.lead_in < 0:
            raise ValueError("lead_in must be >= 0")
        if self.post_lean_forward <= 0 or self.revert_wave_duration < 0:
            raise ValueError("post_lean_forward must be > 0 and revert_wave_duration >= 0")
        lo, hi = self.negative_dwell_min, self.negative_dwell_max
        if (lo is None) != (hi is None):
            raise ValueError("negative dwell bounds must both be set or both be None")
        if lo is not None and not 0 < lo <= hi:
            raise ValueError("need 0 < negative_dwell_min <= negative_dwell_max")

    @property
    def drift_enabled(self) -> bool:
        return self.negative_dwell_min is not None


@dataclass(frozen=True)
class ModeParams:
    stable: StableParams = field(default_factory=StableParams)
    dynamic: DynamicParams = field(default_factory=DynamicParams)
    transition_min: float = 2.0
    transition_max: float = 4.0
    # how long the opening poses are held before the first batch
    opening_hold: float = 5.0
    variations: Mapping[ActionKind, int] = field(
        default_factory=lambda: dict(DEFAULT_VARIATIONS)
    )

    def __post_init__(self):
        if not 0 < self.transition_min <= self.transition_max:
            raise ValueError("need 0 < transition_min <= transition_max")
        if self.opening_hold <= 0:
            raise ValueError("opening_hold must be positive")
        object.__setattr__(self, "variations", check_variations(self.variations))

    @property
    def batch_extent(self) -> float:
        """Longest time from a batch anchor until its last transition ends."""
        return 2 * self.transition_max


# ---------------------------------------------------------------------------
# jitter


def _jitter_ms(
    batch: Sequence[int],
    rng: Rng,
    window: tuple[int, int],
    transition: tuple[int, int],
    max_offset: int | None = None,
) -> dict[int, tuple[int, int]]:
    spread = rng.master.integer(window[0], window[1])
    if max_offset is not None:
        spread = min(spread, max_offset)
    raw = {c: rng.character(c).integer(0, spread) for c in batch}
    base = min(raw.values())
    out = {}
    for c in batch:
        offset = raw[c] - base
        tr = rng.character(c).integer(transition[0], transition[1])
        tr = min(tr, spread + transition[1] - offset)
        out[c] = (offset, tr)
    return out


def apply_jitter(
    batch: Sequence[int],
    rng: Rng,
    window: tuple[float, float] = (2.0, 4.0),
    transition: tuple[float, float] = (2.0, 4.0),
) -> dict[int, tuple[float, float]]:
    """Desynchronise a batch of simultaneous action changes.

    Returns ``{character_id: (offset, transition)}`` in seconds. The batch
    spread is drawn from ``window``; the earliest offset is always 0.
    """
    if not batch:
        raise ValueError("batch must not be empty")
    got = _jitter_ms(
        list(batch),
        rng,
        (to_ms(window[0]), to_ms(window[1])),
        (to_ms(transition[0]), to_ms(transition[1])),
    )
    return {c: (from_ms(o), from_ms(t)) for c, (o, t) in got.items()}


# ---------------------------------------------------------------------------
# builder shared by both modes


_Pose = tuple[ActionKind, int]


def _draw(
    gen: Stream,
    kinds: Sequence[ActionKind],
    variations: Mapping[ActionKind, int],
    avoid: _Pose | None = None,
) -> _Pose:
    """Uniform action from ``kinds``, then uniform variation, never ``avoid``."""
    return _pick(gen, _options(kinds, variations, avoid))


def _options(kinds, variations, avoid):
    options = []
    for kind in kinds:
        vs = [v for v in range(1, variations[kind] + 1) if (kind, v) != avoid]
        if vs:
            options.append((kind, vs))
    return options


def _pick(gen: Stream, options) -> _Pose:
    kind, vs = options[gen.index(len(options))]
    return kind, vs[gen.index(len(vs))]


class _Builder:
    def __init__(self, chart: SeatingChart, timeline: LectureTimeline, params: ModeParams, rng: Rng):
        self.chart = chart
        self.timeline = timeline
        self.params = params
        self.rng = rng
        self.duration = to_ms(timeline.duration)
        self.window = (to_ms(params.transition_min), to_ms(params.transition_max))
        self._options: dict = {}
        self.events: list[list[tuple[int, ActionKind, int, int]]] = [
            [] for _ in range(chart.n_characters)
        ]

    def pose(self, c: int) -> _Pose:
        _, kind, var, _ = self.events[c][-1]
        return kind, var

    def last_start(self, c: int) -> int:
        return self.events[c][-1][0]

    def add(self, c: int, start: int, pose: _Pose, tr: int) -> bool:
        if start + tr > self.duration:
            return False
        if self.events[c] and start <= self.last_start(c):
            raise AssertionError(f"non-increasing start for character {c} at {start} ms")
        self.events[c].append((start, pose[0], pose[1], tr))
        return True

    def batch(self, anchor: int, targets: Mapping[int, _Pose], max_offset: int | None = None):
        if not targets:
            return
        jit = _jitter_ms(list(targets), self.rng, self.window, self.window, max_offset)
        for c, pose in targets.items():
            offset, tr = jit[c]
            self.add(c, anchor + offset, pose, tr)

    def draw(self, c: int, kinds, avoid_current: bool = False) -> _Pose:
        avoid = self.pose(c) if avoid_current else None
        key = (tuple(kinds), avoid)
        options = self._options.get(key)
        if options is None:
            options = self._options[key] = _options(kinds, self.params.variations, avoid)
        return _pick(self.rng.character(c), options)

    def build(self, mode: Mode) -> Schedule:
        return Schedule(
            chart=self.chart,
            timeline=self.timeline,
            mode=mode,
            seed=self.rng.seed,
            events=tuple(
                tuple(
                    ActionEvent(c, kind, var, from_ms(start), from_ms(tr))
                    for start, kind, var, tr in evs
                )
                for c, evs in enumerate(self.events)
            ),
            variations=self.params.variations,
        )


def _as_rng(rng: Rng | int) -> Rng:
    return rng if isinstance(rng, Rng) else Rng(rng)


def generate_opening(
    chart: SeatingChart,
    rng: Rng | int,
    variations: Mapping[ActionKind, int] = DEFAULT_VARIATIONS,
) -> list[ActionEvent]:
    """Opening poses at t=0: neutral in the front rows, negative in the back."""
    rng = _as_rng(rng)
    variations = check_variations(variations)
    out = []
    for c in range(chart.n_characters):
        kinds = NEUTRAL if chart.seat(c).kind is RowKind.FRONT else NEGATIVE
        kind, var = _draw(rng.character(c), kinds, variations)
        out.append(ActionEvent(c, kind, var, 0.0, 0.0))
    return out


def _start(chart, timeline, params, rng) -> _Builder:
    b = _Builder(chart, timeline, params, rng)
    for ev in generate_opening(chart, rng, params.variations):
        b.add(ev.character_id, 0, (ev.action, ev.variation), 0)
    return b


# ---------------------------------------------------------------------------
# Stable mode


def _row_half(chart: SeatingChart, kind: RowKind, left: bool) -> list[int]:
    out = []
    for row, k in zip(chart.rows, chart.kinds):
        if k is not kind:
            continue
        half = math.ceil(len(row) / 2)
        out.extend(row[:half] if left else row[len(row) - half:])
    return out


def generate_stable(
    timeline: LectureTimeline,
    chart: SeatingChart,
    params: ModeParams | None = None,
    rng: Rng | int = 0,
) -> Schedule:
    params = params or ModeParams()
    rng = _as_rng(rng)
    sp = params.stable
    extent = to_ms(params.batch_extent)
    win_max = to_ms(params.transition_max)
    settle = to_ms(params.opening_hold)
    if to_ms(timeline.duration) < settle + extent:
        raise ValueError("timeline is shorter than one transition batch")

    videos = [(to_ms(s), to_ms(e)) for s, e in timeline.video_segments]
    prev_end = settle + extent
    for vs, ve in videos:
        if vs < prev_end:
            raise ValueError(f"video segment at {from_ms(vs)} s starts too close to the previous batch")
        if sp.video_subintervals and (ve - vs) // (sp.video_subintervals + 1) <= win_max:
            raise ValueError(f"video segment at {from_ms(vs)} s is too short for its re-draws")
        prev_end = ve + win_max + 1

    b = _start(chart, timeline, params, rng)
    everyone = range(chart.n_characters)
    b.batch(settle, {c: b.draw(c, POSITIVE) for c in everyone})

    toggle_lo, toggle_hi = sp.toggle_interval_min, sp.toggle_interval_max
    row_turn = RowKind.FRONT
    left = {RowKind.FRONT: True, RowKind.BACK: True}

    def run(start: int, end: int):
        nonlocal row_turn
        anchor = start
        while True:
            anchor += uniform_ms(rng.master, toggle_lo, toggle_hi)
            if anchor + extent >= end:
                return
            half = _row_half(chart, row_turn, left[row_turn])
            flips = {}
            for c in half:
                current = b.pose(c)[0]
                target = ActionKind.NODDING if current is ActionKind.NOTETAKING else ActionKind.NOTETAKING
                flips[c] = b.draw(c, (target,))
            b.batch(anchor, flips)
            left[row_turn] = not left[row_turn]
            row_turn = RowKind.BACK if row_turn is RowKind.FRONT else RowKind.FRONT

    cursor = settle
    for vs, ve in videos:
        run(cursor, vs)
        b.batch(vs, {c: b.draw(c, NEUTRAL) for c in everyone})
        n = sp.video_subintervals
        for k in range(1, n + 1):
            point = vs + (ve - vs) * k // (n + 1)
            b.batch(point, {c: b.draw(c, NEUTRAL, avoid_current=True) for c in everyone})
        b.batch(ve, {c: b.draw(c, POSITIVE) for c in everyone})
        cursor = ve
    run(cursor, b.duration + 1)
    return b.build(Mode.STABLE)


# ---------------------------------------------------------------------------
# Dynamic mode


def merge_episodes(
    key_segments: Sequence[tuple[float, float]], min_gap: float
) -> list[tuple[float, float]]:
    """Merge key segments whose gap is shorter than ``min_gap``."""
    merged: list[list[float]] = []
    for s, e in key_segments:
        if merged and s - merged[-1][1] < min_gap:
            merged[-1][1] = max(merged[-1][1], e)
        else:
            merged.append([s, e])
    return [(s, e) for s, e in merged]


def revert_offsets(chart: SeatingChart, wave_duration: float) -> dict[int, int]:
    """Milliseconds after the lean-forward hold at which each character reverts.

    Back-row edges go first, the front-row centre last.
    """
    dist = chart.front_center_distance()
    return {c: to_ms(wave_duration * (1.0 - d)) for c, d in dist.items()}


def generate_dynamic(
    timeline: LectureTimeline,
    chart: SeatingChart,
    params: ModeParams | None = None,
    rng: Rng | int = 0,
) -> Schedule:
    params = params or ModeParams()
    rng = _as_rng(rng)
    dp = params.dynamic
    if not timeline.key_segments:
        raise ValueError("Dynamic mode needs at least one key segment")
    if timeline.key_segments[0][0] <= dp.lead_in:
        raise ValueError(f"first key segment must start after the {dp.lead_in} s lead-in")

    episodes = [
        (to_ms(s), to_ms(e))
        for s, e in merge_episodes(timeline.key_segments, dp.lead_in + params.transition_max)
    ]
    lead = to_ms(dp.lead_in)
    hold = to_ms(dp.post_lean_forward)
    tr_max = to_ms(params.transition_max)
    extent = to_ms(params.batch_extent)
    offsets = revert_offsets(chart, dp.revert_wave_duration)
    everyone = range(chart.n_characters)

    b = _start(chart, timeline, params, rng)

    def drift(c: int, since: int, until: int):
        """Negative-to-negative changes for character c on (since, until)."""
        if not dp.drift_enabled:
            return
        gen = rng.character(c)
        t = since
        while True:
            t += uniform_ms(gen, dp.negative_dwell_min, dp.negative_dwell_max)
            tr = uniform_ms(gen, params.transition_min, params.transition_max)
            if t + tr > until:
                return
            b.add(c, t, b.draw(c, NEGATIVE, avoid_current=True), tr)

    first_anchor = episodes[0][0] - lead
    settle = to_ms(params.opening_hold)
    front = chart.ids_of(RowKind.FRONT)
    if settle + extent <= first_anchor:
        b.batch(settle, {c: b.draw(c, NEGATIVE) for c in front})
    for c in everyone:
        if b.pose(c)[0] in NEGATIVE:
            drift(c, b.last_start(c), first_anchor)

    for i, (s, e) in enumerate(episodes):
        anchor = s - lead
        b.batch(anchor, {c: b.draw(c, POSITIVE) for c in everyone})
        next_anchor = episodes[i + 1][0] - lead if i + 1 < len(episodes) else b.duration
        # the segment end itself still counts as covered, so lean 1 ms later
        room = min(hold, next_anchor - e) - 2
        lean = (ActionKind.LEANING_FORWARD,)
        b.batch(e + 1, {c: b.draw(c, lean) for c in everyone}, max_offset=room)
        for c in everyone:
            t = e + hold + offsets[c]
            if t + tr_max > next_anchor or t <= b.last_start(c):
                continue
            tr = uniform_ms(rng.character(c), params.transition_min, params.transition_max)
            if b.add(c, t, b.draw(c, NEGATIVE), tr):
                drift(c, t, next_anchor)
    return b.build(Mode.DYNAMIC)


def generate(
    mode: Mode | str,
    timeline: LectureTimeline,
    chart: SeatingChart,
    params: ModeParams | None = None,
    rng: Rng | int = 0,
) -> Schedule:
    mode = Mode(mode)
    fn = generate_stable if mode is Mode.STABLE else generate_dynamic
    return fn(timeline, chart, params, rng)


# ---------------------------------------------------------------------------
# notetaking gaze


def generate_gaze_cycle(total: float, gen: Stream) -> GazeCycle:
    """Alternate slides/notebook glances until ``total`` seconds are filled."""
    if total <= 0:
        raise ValueError("total must be positive")
    remaining = to_ms(total)
    phases = []
    target = GazeTarget.SLIDES
    while remaining > 0:
        lo, hi = (0.5, 1.0) if target is GazeTarget.SLIDES else (3.0, 4.0)
        d = min(uniform_ms(gen, lo, hi), remaining)
        phases.append((target, from_ms(d)))
        remaining -= d
        target = GazeTarget.NOTEBOOK if target is GazeTarget.SLIDES else GazeTarget.SLIDES
    return GazeCycle(tuple(phases))


def notetaking_gaze(schedule: Schedule) -> dict[int, list[tuple[float, GazeCycle]]]:
    """Gaze cycles for every notetaking stretch, keyed by character.

    A fresh cycle starts on each entry into notetaking and is cut where the
    next action begins.
    """
    rng = Rng(schedule.seed)
    end = schedule.timeline.duration
    out: dict[int, list[tuple[float, GazeCycle]]] = {}
    for c, evs in enumerate(schedule.events):
        cycles = []
        for i, ev in enumerate(evs):
            if ev.action is not ActionKind.NOTETAKING:
                continue
            if i > 0 and evs[i - 1].action is ActionKind.NOTETAKING:
                continue
            j = i + 1
            while j < len(evs) and evs[j].action is ActionKind.NOTETAKING:
                j += 1
            stop = evs[j].start if j < len(evs) else end
            if stop > ev.start:
                cycles.append((ev.start, generate_gaze_cycle(stop - ev.start, rng.gaze(c))))
        if cycles:
            out[c] = cycles
    return out
