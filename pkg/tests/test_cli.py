import json
import shutil
import subprocess
import sys
from pathlib import Path

import pytest
from conftest import GOLDEN

from classcrowd.cli import main

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "scripts"))
import regen_golden  # noqa: E402


@pytest.fixture(scope="module")
def fresh(tmp_path_factory):
    out = tmp_path_factory.mktemp("golden")
    for name in regen_golden.CONFIGS:
        shutil.copy(GOLDEN / f"{name}.yaml", out)
    regen_golden.regenerate(out)
    return out


def golden_files():
    return sorted(p.relative_to(GOLDEN) for p in GOLDEN.rglob("*") if p.is_file() and p.suffix != ".yaml")


@pytest.mark.parametrize("rel", golden_files(), ids=str)
def test_matches_golden(fresh, rel):
    assert (fresh / rel).read_bytes() == (GOLDEN / rel).read_bytes()


def test_plots_written(fresh):
    for what, name in [("posture", "posture"), ("notes", "notes"), ("scores", "scores"), ("crosstab", "crosstab")]:
        svg = fresh / "analysis" / what / f"{name}.svg"
        assert not svg.exists()  # removed by the regeneration script
    # plots are produced by the CLI itself
    out = fresh / "again"
    assert main(regen_golden.analyze_argv("scores", out)) == 0
    assert (out / "scores.svg").read_text().startswith("<?xml")


def test_generate_twice_identical(tmp_path):
    cfg = GOLDEN / "dynamic_small.yaml"
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["generate", "--config", str(cfg), "--out", str(a)]) == 0
    assert main(["generate", "--config", str(cfg), "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_generate_prints_profile(tmp_path, capsys):
    main(["generate", "--config", str(GOLDEN / "stable_small.yaml"), "--out", str(tmp_path / "s.csv")])
    out = capsys.readouterr().out
    assert "positive" in out and "three-way" in out


@pytest.mark.parametrize("name", ["stable_small", "dynamic_small"])
def test_validate_generated(name):
    argv = ["validate", "--schedule", str(GOLDEN / f"{name}.csv"), "--config", str(GOLDEN / f"{name}.yaml")]
    assert main(argv) == 0


def test_validate_broken(tmp_path, capsys):
    lines = (GOLDEN / "stable_small.csv").read_text().splitlines()
    # stretch one transition beyond the allowed window
    cid, row, seat, start, action, var, _ = lines[30].split(",")
    lines[30] = ",".join([cid, row, seat, start, action, var, "9.000"])
    bad = tmp_path / "bad.csv"
    bad.write_text("\n".join(lines) + "\n")
    assert main(["validate", "--schedule", str(bad), "--config", str(GOLDEN / "stable_small.yaml")]) == 1
    assert "ERROR [b]" in capsys.readouterr().out


def test_positivity_svg(tmp_path):
    out = tmp_path / "pos.svg"
    argv = ["positivity", "--schedule", str(GOLDEN / "dynamic_small.csv"),
            "--config", str(GOLDEN / "dynamic_small.yaml"), "--out", str(out)]
    assert main(argv) == 0
    assert out.exists()
    assert out.with_suffix(".csv").read_bytes() == (GOLDEN / "dynamic_small_positivity.csv").read_bytes()
    first = out.read_bytes()
    assert main(argv) == 0
    assert out.read_bytes() == first


def test_missing_file_exit_two(tmp_path, capsys):
    assert main(["generate", "--config", str(tmp_path / "nope.yaml"), "--out", str(tmp_path / "x.csv")]) == 2
    assert "error" in capsys.readouterr().err


def test_bad_config_exit_two(tmp_path):
    cfg = tmp_path / "c.yaml"
    cfg.write_text("seed: 1\nmode: stable\ntimeline: {duration: 10, key_segments: [[5, 3]]}\n")
    assert main(["generate", "--config", str(cfg), "--out", str(tmp_path / "x.csv")]) == 2


def test_usage_error_exit_two():
    with pytest.raises(SystemExit) as exc:
        main(["bogus"])
    assert exc.value.code == 2


def test_scores_without_key(tmp_path, cohort_dir):
    argv = ["analyze", "scores", "--in", str(cohort_dir / "responses.csv"),
            "--groups", str(cohort_dir / "groups.csv"), "--out", str(tmp_path)]
    assert main(argv) == 2


def test_scores_summary(fresh, capsys):
    summary = json.loads((fresh / "analysis" / "scores" / "summary.json").read_text())
    assert summary["participants"] == 50 and summary["questions"] == 19
    assert summary["mean"] == pytest.approx(15.7, abs=1e-12)
    assert len(summary["kruskal_wallis"]["pairwise"]) == 6


def test_notes_exclusion(tmp_path, cohort_dir):
    argv = ["analyze", "notes", "--in", str(cohort_dir / "notes.csv"),
            "--groups", str(cohort_dir / "groups.csv"), "--out", str(tmp_path), "--exclude-non-notetakers"]
    assert main(argv) == 0
    rows = (tmp_path / "notes.csv").read_text().splitlines()[1:]
    assert len(rows) == 34
    assert all(int(r.split(",")[-1]) > 0 for r in rows)


def test_module_entry_point(tmp_path):
    res = subprocess.run(
        [sys.executable, "-m", "classcrowd", "generate", "--config", str(GOLDEN / "stable_small.yaml"),
         "--out", str(tmp_path / "s.csv")],
        capture_output=True, text=True,
    )
    assert res.returncode == 0, res.stderr
    assert (tmp_path / "s.csv").read_bytes() == (GOLDEN / "stable_small.csv").read_bytes()
