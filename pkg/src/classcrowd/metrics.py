"""Group positivity, time-in-state profiles and schedule validation."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import ActionKind, Mode, RowKind, Schedule, valence
from .scheduler import ModeParams, merge_episodes

# comparisons against generated millisecond times
EPS = 1e-6


def positivity(schedule: Schedule, t: float) -> int:
    """Sum of valences at ``t``; characters mid-transition count their new action."""
    return sum(valence(schedule.action_at(c, t)[0]) for c in range(schedule.n_characters))


@dataclass(frozen=True)
class PositivitySeries:
    sample_interval: float
    values: tuple[int, ...]

    @property
    def times(self) -> np.ndarray:
        return np.arange(len(self.values)) * self.sample_interval


def _sample_times(duration: float, interval: float) -> np.ndarray:
    n = math.floor(duration / interval + 1e-9)
    times = np.arange(n + 1) * interval
    return np.minimum(times, duration)


def positivity_series(schedule: Schedule, sample_interval: float = 0.1) -> PositivitySeries:
    if sample_interval <= 0:
        raise ValueError("sample_interval must be positive")
    times = _sample_times(schedule.timeline.duration, sample_interval)
    # each event changes its character's valence from the first sample at or after its start
    starts, deltas = [], []
    for evs in schedule.events:
        if not evs or evs[0].start > 0:
            raise ValueError("character without an event at t=0")
        prev = 0
        for ev in evs:
            v = valence(ev.action)
            starts.append(ev.start)
            deltas.append(v - prev)
            prev = v
    delta = np.zeros(len(times) + 1, dtype=np.int64)
    np.add.at(delta, np.searchsorted(times, starts, side="left"), deltas)
    total = np.cumsum(delta[:-1])
    return PositivitySeries(sample_interval, tuple(total.tolist()))


@dataclass(frozen=True)
class TimeProfile:
    """Share of character-time spent in each state.

    ``transition`` counts time spent blending into a new action, whatever the
    action; the other three count settled time by the action's valence.
    """

    positive: float
    transition: float
    negative: float
    neutral: float

    @property
    def unsettled(self) -> float:
        """Time that is neither settled-positive nor settled-negative."""
        return self.transition + self.neutral

    def three_way(self) -> tuple[float, float, float]:
        """(positive, transition + neutral, negative)."""
        return self.positive, self.unsettled, self.negative


def proportions(schedule: Schedule) -> TimeProfile:
    duration = schedule.timeline.duration
    acc = {"positive": 0.0, "transition": 0.0, "negative": 0.0, "neutral": 0.0}
    names = {1: "positive", -1: "negative", 0: "neutral"}
    for evs in schedule.events:
        for i, ev in enumerate(evs):
            stop = evs[i + 1].start if i + 1 < len(evs) else duration
            span = max(0.0, stop - ev.start)
            blend = min(ev.transition, span)
            acc["transition"] += blend
            acc[names[valence(ev.action)]] += span - blend
    total = schedule.n_characters * duration
    return TimeProfile(**{k: v / total for k, v in acc.items()})


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Finding:
    rule: str
    severity: str  # "error" | "warning"
    message: str
    character_id: int | None = None
    time: float | None = None


@dataclass
class ValidationReport:
    findings: list[Finding] = field(default_factory=list)

    @property
    def errors(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "error"]

    @property
    def warnings(self) -> list[Finding]:
        return [f for f in self.findings if f.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def __len__(self):
        return len(self.findings)

    def format(self) -> str:
        if not self.findings:
            return "no findings"
        lines = []
        for f in self.findings:
            where = []
            if f.character_id is not None:
                where.append(f"character {f.character_id}")
            if f.time is not None:
                where.append(f"t={f.time:.3f}")
            loc = f" ({', '.join(where)})" if where else ""
            lines.append(f"{f.severity.upper()} [{f.rule}]{loc}: {f.message}")
        return "\n".join(lines)


def batches(schedule: Schedule, max_gap: float) -> list[list[tuple[float, int]]]:
    """Group non-opening events into batches.

    Events belong to the same batch while consecutive starts are at most
    ``max_gap`` apart. Returns lists of (start, character_id).
    """
    starts = sorted(
        (ev.start, ev.character_id)
        for evs in schedule.events
        for ev in evs
        if ev.start > 0
    )
    out: list[list[tuple[float, int]]] = []
    for item in starts:
        if out and item[0] - out[-1][-1][0] <= max_gap + EPS:
            out[-1].append(item)
        else:
            out.append([item])
    return out


def _check_structure(schedule: Schedule, report: ValidationReport) -> bool:
    duration = schedule.timeline.duration
    ok = True
    for c, evs in enumerate(schedule.events):
        if not evs or evs[0].start != 0:
            report.findings.append(Finding("f", "error", "no event at t=0", c))
            ok = False
        if sum(1 for ev in evs if ev.start == 0) > 1:
            report.findings.append(Finding("f", "error", "more than one event at t=0", c, 0.0))
            ok = False
        for prev, ev in zip(evs, evs[1:]):
            if ev.start <= prev.start:
                report.findings.append(
                    Finding("f", "error", "event starts are not strictly increasing", c, ev.start)
                )
                ok = False
        for ev in evs:
            if ev.start < 0 or ev.start + ev.transition > duration + EPS:
                report.findings.append(
                    Finding("f", "error", "event outside the lecture", c, ev.start)
                )
                ok = False
            if ev.variation > schedule.variations[ev.action]:
                report.findings.append(
                    Finding("f", "error", f"variation {ev.variation} out of range for {ev.action.value}", c, ev.start)
                )
                ok = False
    return ok


def validate(schedule: Schedule, params: ModeParams | None = None) -> ValidationReport:
    """Check a schedule against timing and naturalness rules.

    Rules: (a) Stable toggle intervals, (b) transition durations, (c) Dynamic
    key-segment coverage, (d) negative actions in the front row at t=0,
    (e) perfectly synchronised batches, (f) ordering and range.
    """
    params = params or ModeParams()
    report = ValidationReport()
    structure_ok = _check_structure(schedule, report)
    tr_lo, tr_hi = params.transition_min, params.transition_max

    for c, evs in enumerate(schedule.events):
        for ev in evs:
            if ev.start == 0:
                continue
            if not tr_lo - EPS <= ev.transition <= tr_hi + EPS:
                report.findings.append(
                    Finding("b", "error", f"transition {ev.transition:.3f} s outside [{tr_lo}, {tr_hi}]", c, ev.start)
                )

    if structure_ok:
        for c in schedule.chart.ids_of(RowKind.FRONT):
            action = schedule.events[c][0].action
            if valence(action) < 0:
                report.findings.append(
                    Finding("d", "warning", f"front-row character opens with {action.value}", c, 0.0)
                )

    groups = batches(schedule, tr_hi)
    for group in groups:
        if len(group) > 1 and group[-1][0] - group[0][0] <= EPS:
            report.findings.append(
                Finding("e", "warning", f"{len(group)} characters change action in perfect sync", None, group[0][0])
            )

    if schedule.mode is Mode.STABLE:
        _check_toggles(schedule, params, groups, report)
    elif structure_ok:
        _check_coverage(schedule, params, report)
    return report


def _check_toggles(schedule, params, groups, report):
    lo, hi = params.stable.toggle_interval_min, params.stable.toggle_interval_max
    videos = schedule.timeline.video_segments
    anchors = [g[0][0] for g in groups]

    def in_video(t):
        return any(s - EPS <= t <= e + EPS for s, e in videos)

    for a, b in zip(anchors, anchors[1:]):
        if in_video(a) or in_video(b) or any(a < s and e < b for s, e in videos):
            continue
        gap = b - a
        if not lo - EPS <= gap <= hi + EPS:
            report.findings.append(
                Finding("a", "error", f"toggle interval {gap:.3f} s outside [{lo}, {hi}]", None, b)
            )


def _check_coverage(schedule, params, report):
    dp = params.dynamic
    episodes = merge_episodes(schedule.timeline.key_segments, dp.lead_in + params.transition_max)
    for s, e in episodes:
        lo = min(e, s - dp.lead_in + params.transition_max)
        for c, evs in enumerate(schedule.events):
            action, _ = schedule.action_at(c, lo)
            bad = valence(action) <= 0
            when = lo
            if not bad:
                for ev in evs:
                    if lo < ev.start < e and valence(ev.action) <= 0:
                        bad, when = True, ev.start
                        break
            if bad:
                report.findings.append(
                    Finding("c", "error", f"not positive during key segment ({s}, {e})", c, when)
                )
