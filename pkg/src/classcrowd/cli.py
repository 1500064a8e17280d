"""Command line entry point.

Exit codes: 0 ok, 1 validation errors, 2 usage or I/O errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import defaultdict
from dataclasses import asdict
from pathlib import Path

from . import plots
from .analysis import (
    GROUPS,
    count_notes,
    group_label,
    kruskal_wallis,
    minute_averages,
    note_flags,
    per_question_crosstab,
    posture_series,
    score_test,
    wilcoxon_rank_sum,
)
from .io import (
    FormatError,
    load_config,
    read_answer_key,
    read_groups,
    read_keypoints,
    read_notes,
    read_question_slides,
    read_responses,
    read_schedule,
    serialize_schedule,
    table_csv,
    write_atomic,
)
from .metrics import positivity_series, proportions, validate
from .scheduler import generate

EXIT_OK, EXIT_INVALID, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _print_profile(profile) -> None:
    print(f"positive    {100 * profile.positive:6.2f} %")
    print(f"transition  {100 * profile.transition:6.2f} %")
    print(f"negative    {100 * profile.negative:6.2f} %")
    print(f"neutral     {100 * profile.neutral:6.2f} %")
    pos, unsettled, neg = profile.three_way()
    print(f"three-way   {100 * pos:.2f} / {100 * unsettled:.2f} / {100 * neg:.2f} % (positive / transition+neutral / negative)")


def cmd_generate(args) -> int:
    cfg = load_config(args.config)
    schedule = generate(cfg.mode, cfg.timeline, cfg.chart, cfg.params, cfg.seed)
    report = validate(schedule, cfg.params)
    if not report.ok:
        print(report.format(), file=sys.stderr)
        return EXIT_INVALID
    write_atomic(args.out, serialize_schedule(schedule))
    _print_profile(proportions(schedule))
    return EXIT_OK


def cmd_validate(args) -> int:
    cfg = load_config(args.config)
    schedule = read_schedule(args.schedule, cfg)
    report = validate(schedule, cfg.params)
    print(report.format())
    return EXIT_OK if report.ok else EXIT_INVALID


def cmd_positivity(args) -> int:
    cfg = load_config(args.config) if args.config else None
    schedule = read_schedule(args.schedule, cfg)
    series = positivity_series(schedule, args.interval)
    out = Path(args.out)
    rows = [[f"{t:.3f}", v] for t, v in zip(series.times, series.values)]
    text = table_csv(["t_s", "positivity"], rows)
    if out.suffix.lower() == ".svg":
        write_atomic(out.with_suffix(".csv"), text)
        plots.plot_positivity(series, schedule.n_characters, out)
    else:
        write_atomic(out, text)
    print(f"{len(series.values)} samples, min {min(series.values)}, max {max(series.values)}")
    return EXIT_OK


# ---------------------------------------------------------------------------
# analyze


def _stat(r) -> dict:
    return asdict(r)


def _compare_modes(values: dict[str, float], groups) -> dict | None:
    stable = [v for p, v in values.items() if groups[p][0] == "stable"]
    dynamic = [v for p, v in values.items() if groups[p][0] == "dynamic"]
    if not stable or not dynamic:
        return None
    return _stat(wilcoxon_rank_sum(stable, dynamic))


def _four_groups(values: dict[str, list[float]] | dict[str, float], groups) -> dict[str, list[float]]:
    out: dict[str, list[float]] = {g: [] for g in GROUPS}
    for p, v in values.items():
        out[group_label(*groups[p])].extend(v if isinstance(v, list) else [v])
    return out


def _kw(by_group: dict[str, list[float]]) -> dict | None:
    present = [g for g in GROUPS if by_group[g]]
    if len(present) < 2:
        return None
    omnibus, pairwise = kruskal_wallis([by_group[g] for g in present], bonferroni=True)
    pairs = [(a, b) for i, a in enumerate(present) for b in present[i + 1:]]
    return {
        "groups": present,
        "omnibus": _stat(omnibus),
        "pairwise": [{"a": a, "b": b, **_stat(r)} for (a, b), r in zip(pairs, pairwise)],
    }


def _require(groups, participants):
    missing = sorted(set(participants) - set(groups))
    if missing:
        raise UsageError(f"participants missing from the groups file: {', '.join(missing)}")


def analyze_posture(args, groups, out: Path) -> None:
    rows, per_participant = [], {}
    curves: dict[str, dict[int, list[float]]] = {g: defaultdict(list) for g in GROUPS}
    for path in args.inputs:
        pid = Path(path).stem
        _require(groups, [pid])
        label = group_label(*groups[pid])
        series = posture_series(pid, label, read_keypoints(path), args.facing)
        if not series.samples:
            print(f"warning: {pid}: no usable frames", file=sys.stderr)
            continue
        avgs = minute_averages(series)
        per_participant[pid] = [a for _, a in avgs]
        for minute, angle in avgs:
            rows.append([pid, label, minute, f"{angle:.6f}"])
            curves[label][minute].append(angle)
    write_atomic(out / "minute_averages.csv", table_csv(["participant_id", "group", "minute", "mean_angle_deg"], rows))
    means = {
        g: [(m, sum(v) / len(v)) for m, v in sorted(c.items())] for g, c in curves.items()
    }
    write_atomic(
        out / "group_means.csv",
        table_csv(["group", "minute", "mean_angle_deg"], [[g, m, f"{a:.6f}"] for g, pts in means.items() for m, a in pts]),
    )
    tests = {"kruskal_wallis": _kw(_four_groups(per_participant, groups))}
    write_atomic(out / "tests.json", json.dumps(tests, indent=2) + "\n")
    plots.plot_group_curves(means, "torso angle [deg]", out / "posture.svg")
    print(f"{len(per_participant)} participants, {len(rows)} participant-minutes")


def analyze_notes(args, groups, out: Path) -> None:
    records = [r for path in args.inputs for r in read_notes(path)]
    counts = {p: count_notes(records, p) for p in groups}
    zero = sorted(p for p, c in counts.items() if sum(c) == 0)
    if args.exclude_non_notetakers:
        counts = {p: c for p, c in counts.items() if sum(c) > 0}
    rows = [[p, groups[p][0], k, nk, k + nk] for p, (k, nk) in sorted(counts.items())]
    write_atomic(
        out / "notes.csv",
        table_csv(["participant_id", "mode", "key_slides", "nonkey_slides", "total_slides"], rows),
    )
    tests = {
        "excluded_non_notetakers": bool(args.exclude_non_notetakers),
        "participants_without_notes": zero,
        "total": _compare_modes({p: sum(c) for p, c in counts.items()}, groups),
        "key": _compare_modes({p: c[0] for p, c in counts.items()}, groups),
        "non_key": _compare_modes({p: c[1] for p, c in counts.items()}, groups),
    }
    write_atomic(out / "tests.json", json.dumps(tests, indent=2) + "\n")
    by_mode = {
        m: [sum(c) for p, c in counts.items() if groups[p][0] == m] for m in ("stable", "dynamic")
    }
    plots.plot_groups_box(by_mode, "slides with notes", out / "notes.svg")
    print(f"{len(counts)} participants, {len(zero)} without notes")


def _responses(args):
    if not args.key:
        raise UsageError("--key is required")
    key = read_answer_key(args.key)
    return key, [r for path in args.inputs for r in read_responses(path, key)]


def analyze_scores(args, groups, out: Path) -> None:
    key, responses = _responses(args)
    _require(groups, [r.participant for r in responses])
    scores = {r.participant: score_test(r) for r in responses}
    if not scores:
        raise UsageError("no responses")
    mean = sum(scores.values()) / len(scores)
    rows = [[p, groups[p][0], "yes" if groups[p][1] else "no", s] for p, s in scores.items()]
    write_atomic(out / "scores.csv", table_csv(["participant_id", "mode", "took_notes", "score"], rows))
    summary = {
        "participants": len(scores),
        "questions": len(key),
        "mean": mean,
        "mode_comparison": _compare_modes(scores, groups),
        "kruskal_wallis": _kw(_four_groups(scores, groups)),
    }
    write_atomic(out / "summary.json", json.dumps(summary, indent=2) + "\n")
    plots.plot_groups_box(_four_groups(scores, groups), "mini-test score", out / "scores.svg")
    print(f"mean score: {round(mean, 4)} / {len(key)} over {len(scores)} participants")


def analyze_crosstab(args, groups, out: Path) -> None:
    if not args.notes or not args.question_slides:
        raise UsageError("--notes and --question-slides are required")
    key, responses = _responses(args)
    _require(groups, [r.participant for r in responses])
    mapping = read_question_slides(args.question_slides)
    if sorted(mapping) != list(range(1, len(key) + 1)):
        raise UsageError("question-slide mapping must cover every question")
    flags = note_flags(read_notes(args.notes), [r.participant for r in responses], mapping)
    table = per_question_crosstab(responses, flags)
    write_atomic(
        out / "crosstab.csv",
        table_csv(["question", "accuracy", "notetaker_share"], [[q, f"{a:.6f}", f"{n:.6f}"] for q, a, n in table]),
    )
    plots.plot_crosstab(table, out / "crosstab.svg")
    print(f"{len(table)} questions, {len(responses)} participants")


ANALYSES = {
    "posture": analyze_posture,
    "notes": analyze_notes,
    "scores": analyze_scores,
    "crosstab": analyze_crosstab,
}


def cmd_analyze(args) -> int:
    groups = read_groups(args.groups)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    ANALYSES[args.what](args, groups, out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="classcrowd", description="Student-character behaviour schedules and analysis.")
    sub = ap.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="generate a schedule CSV from a config")
    g.add_argument("--config", required=True)
    g.add_argument("--out", required=True)
    g.set_defaults(func=cmd_generate)

    v = sub.add_parser("validate", help="check a schedule CSV")
    v.add_argument("--schedule", required=True)
    v.add_argument("--config", required=True)
    v.set_defaults(func=cmd_validate)

    p = sub.add_parser("positivity", help="sample group positivity")
    p.add_argument("--schedule", required=True)
    p.add_argument("--config", help="config the schedule was generated from (gives the lecture length)")
    p.add_argument("--interval", type=float, default=0.1)
    p.add_argument("--out", required=True, help=".csv, or .svg to also plot")
    p.set_defaults(func=cmd_positivity)

    a = sub.add_parser("analyze", help="run an evaluation analysis")
    a.add_argument("what", choices=sorted(ANALYSES))
    a.add_argument("--in", dest="inputs", nargs="+", required=True)
    a.add_argument("--groups", required=True, help="participant_id,mode,took_notes")
    a.add_argument("--out", required=True, help="output directory")
    a.add_argument("--key", help="answer key CSV (question,answer)")
    a.add_argument("--notes", help="note records CSV (crosstab)")
    a.add_argument("--question-slides", help="question,slides mapping CSV (crosstab)")
    a.add_argument("--facing", default="image-left", choices=["image-left", "image-right"])
    a.add_argument("--exclude-non-notetakers", action="store_true")
    a.set_defaults(func=cmd_analyze)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (FormatError, UsageError, OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
