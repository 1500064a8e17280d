from pathlib import Path

import pytest

from classcrowd.core import ActionEvent, ActionKind, LectureTimeline, Mode, Schedule, SeatingChart
from classcrowd.fixtures import path as fixture_path
from classcrowd.io import load_config

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"


def build_schedule(per_char, duration, mode=Mode.STABLE, chart=None, seed=0):
    """per_char: list (one per character) of (start, action, transition[, variation])."""
    chart = chart or SeatingChart.default(front=(len(per_char) + 1) // 2, back=len(per_char) // 2)
    events = []
    for c, evs in enumerate(per_char):
        row = []
        for item in evs:
            start, action, tr = item[:3]
            var = item[3] if len(item) > 3 else 1
            row.append(ActionEvent(c, ActionKind(action) if isinstance(action, str) else action, var, start, tr))
        events.append(tuple(row))
    return Schedule(chart, LectureTimeline(duration), mode, seed, tuple(events))


@pytest.fixture
def build():
    return build_schedule


@pytest.fixture
def chart():
    return SeatingChart.default()


@pytest.fixture(scope="session")
def ref_dynamic():
    return load_config(fixture_path("reference_dynamic.yaml"))


@pytest.fixture(scope="session")
def ref_stable():
    return load_config(fixture_path("reference_stable.yaml"))


@pytest.fixture(scope="session")
def cohort_dir():
    return DATA / "cohort"


# ---------------------------------------------------------------------------
# one summary line per acceptance criterion

_ACCEPTANCE: dict[str, tuple[str, str]] = {}
_NOTES: dict[str, str] = {}


@pytest.fixture
def note(request):
    """Attach a measured-value summary to the criterion's result line."""

    def add(text):
        _NOTES[request.node.name] = text

    return add


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion_" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        prev = _ACCEPTANCE.get(name, ("passed", ""))[0]
        outcome = "failed" if "failed" in (prev, report.outcome) else report.outcome
        _ACCEPTANCE[name] = (outcome, report.nodeid)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_ACCEPTANCE, key=lambda n: int(n.split("_")[2])):
        outcome, _ = _ACCEPTANCE[name]
        tag = "PASS" if outcome == "passed" else "FAIL"
        detail = _NOTES.get(name, "")
        terminalreporter.write_line(f"{tag}  {name}" + (f"  ({detail})" if detail else ""))
