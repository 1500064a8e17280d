"""Rebuild tests/golden from the configs stored there.

Run after an intentional change to generator or analysis output; the CLI
tests compare fresh runs byte-for-byte against these files.
"""

import shutil
import sys
from pathlib import Path

from classcrowd.cli import main

ROOT = Path(__file__).resolve().parents[1]
GOLDEN = ROOT / "tests" / "golden"
COHORT = ROOT / "tests" / "data" / "cohort"

CONFIGS = ("stable_small", "dynamic_small")
ANALYSES = ("posture", "notes", "scores", "crosstab")


def analyze_argv(what: str, out: Path) -> list[str]:
    if what == "posture":
        inputs = sorted(str(p) for p in (COHORT / "keypoints").glob("*.csv"))
    elif what == "notes":
        inputs = [str(COHORT / "notes.csv")]
    else:
        inputs = [str(COHORT / "responses.csv")]
    argv = ["analyze", what, "--in", *inputs, "--groups", str(COHORT / "groups.csv"), "--out", str(out)]
    if what in ("scores", "crosstab"):
        argv += ["--key", str(COHORT / "key.csv")]
    if what == "crosstab":
        argv += ["--notes", str(COHORT / "notes.csv"), "--question-slides", str(COHORT / "question_slides.csv")]
    return argv


def regenerate(golden: Path = GOLDEN) -> None:
    for name in CONFIGS:
        cfg = golden / f"{name}.yaml"
        sched = golden / f"{name}.csv"
        assert main(["generate", "--config", str(cfg), "--out", str(sched)]) == 0
        assert main(["positivity", "--schedule", str(sched), "--config", str(cfg),
                     "--out", str(golden / f"{name}_positivity.csv")]) == 0
    for what in ANALYSES:
        out = golden / "analysis" / what
        shutil.rmtree(out, ignore_errors=True)
        assert main(analyze_argv(what, out)) == 0
        for svg in out.glob("*.svg"):
            svg.unlink()  # plots depend on the matplotlib version; only tables are pinned


if __name__ == "__main__":
    regenerate(Path(sys.argv[1]) if len(sys.argv) > 1 else GOLDEN)
