import pytest
from hypothesis import given
from hypothesis import strategies as st

from classcrowd.core import (
    DEFAULT_VARIATIONS,
    NEGATIVE,
    NEUTRAL,
    POSITIVE,
    ActionEvent,
    ActionKind,
    LectureTimeline,
    RowKind,
    SeatingChart,
    action_at,
    valence,
)

N, S, NT = ActionKind.NODDING, ActionKind.SLEEPING, ActionKind.NOTETAKING


def test_valence_examples():
    assert valence(ActionKind.NODDING) == 1
    assert valence(ActionKind.SLEEPING) == -1
    assert valence(ActionKind.SITTING_UPRIGHT) == 0


def test_valence_partition():
    assert len(ActionKind) == 7
    assert (len(POSITIVE), len(NEGATIVE), len(NEUTRAL)) == (2, 3, 2)
    assert sum(valence(k) for k in ActionKind) == -1
    assert set(POSITIVE) == {ActionKind.NOTETAKING, ActionKind.NODDING}
    assert set(NEGATIVE) == {ActionKind.SLEEPING, ActionKind.LOOKING_AWAY, ActionKind.ELBOW_LEANING}


def test_variation_counts_in_range():
    assert all(DEFAULT_VARIATIONS[k] in (1, 2, 3) for k in ActionKind)


def test_action_names_are_snake_case():
    assert [k.value for k in ActionKind] == [
        "notetaking", "nodding", "sleeping", "looking_away",
        "elbow_leaning", "leaning_forward", "sitting_upright",
    ]
    with pytest.raises(ValueError):
        ActionKind.parse("dancing")


class TestActionAt:
    @pytest.fixture
    def sched(self, build):
        return build([[(0, S, 0), (10, N, 3)], [(0, S, 0)]], duration=60)

    def test_before_second_event(self, sched):
        assert action_at(sched, 0, 5) == (S, False)

    def test_within_transition(self, sched):
        assert action_at(sched, 0, 11) == (N, True)

    def test_transition_elapsed(self, sched):
        assert action_at(sched, 0, 13) == (N, False)

    def test_right_continuous_at_event(self, sched):
        assert action_at(sched, 0, 10) == (N, True)
        assert action_at(sched, 0, 9.999) == (S, False)

    def test_errors(self, sched):
        with pytest.raises(KeyError):
            action_at(sched, 5, 1)
        with pytest.raises(ValueError):
            action_at(sched, 0, 61)
        with pytest.raises(ValueError):
            action_at(sched, 0, -0.1)


@given(st.lists(st.floats(0.01, 99.0), min_size=1, max_size=12, unique=True), st.data())
def test_changes_equal_events_minus_one(starts, data):
    from conftest import build_schedule

    starts = sorted(round(s, 3) for s in starts)
    starts = sorted(set(starts))
    actions = [data.draw(st.sampled_from(list(ActionKind)))]
    for _ in starts:
        actions.append(data.draw(st.sampled_from([k for k in ActionKind if k is not actions[-1]])))
    evs = [(0.0, actions[0], 0.0)] + [(s, a, 0.0) for s, a in zip(starts, actions[1:])]
    sched = build_schedule([evs, [(0.0, S, 0.0)]], duration=100)
    probes = {0.0, 100.0}
    for a, b in zip([0.0] + starts, starts + [100.0]):
        probes |= {a, (a + b) / 2, max(0.0, b - 0.0005)}
    changes = 0
    prev = action_at(sched, 0, 0.0)[0]
    for t in sorted(probes):
        cur = action_at(sched, 0, t)[0]
        if cur is not prev:
            changes += 1
            prev = cur
    assert changes == len(evs) - 1


def test_default_chart():
    chart = SeatingChart.default()
    assert chart.n_characters == 22
    assert chart.ids_of(RowKind.FRONT) == list(range(11))
    assert chart.ids_of(RowKind.BACK) == list(range(11, 22))
    seats = {(chart.seat(c).row_index, chart.seat(c).lateral): c for c in range(22)}
    assert len(seats) == 22
    assert all(chart.rows[r][lat] == c for (r, lat), c in seats.items())


def test_chart_rejects_bad_layouts():
    with pytest.raises(ValueError):
        SeatingChart(((0, 1), (1, 2)), (RowKind.FRONT, RowKind.BACK))
    with pytest.raises(ValueError):
        SeatingChart(((0, 1), (2, 4)), (RowKind.FRONT, RowKind.BACK))
    with pytest.raises(ValueError):
        SeatingChart(((0, 1), (2, 3)), (RowKind.FRONT, RowKind.FRONT))


def test_front_center_distance():
    d = SeatingChart.default().front_center_distance()
    assert d[5] == 0.0
    assert d[11] == d[21] == 1.0
    assert d[4] == d[6]
    assert all(0 <= v <= 1 for v in d.values())


def test_timeline_invariants():
    LectureTimeline(100, ((10, 20), (30, 40)), ((50, 60),))
    with pytest.raises(ValueError):
        LectureTimeline(100, ((10, 20), (15, 40)))
    with pytest.raises(ValueError):
        LectureTimeline(100, ((30, 20),))
    with pytest.raises(ValueError):
        LectureTimeline(100, ((10, 120),))
    with pytest.raises(ValueError):
        LectureTimeline(100, ((10, 20),), ((15, 30),))


def test_event_invariants():
    with pytest.raises(ValueError):
        ActionEvent(0, N, 0, 1.0)
    with pytest.raises(ValueError):
        ActionEvent(0, N, 1, -1.0)
    with pytest.raises(ValueError):
        ActionEvent(0, N, 1, 1.0, -0.5)
