"""Build the 33-minute reference lecture and calibrate the negative-dwell policy.

The lecture has 19 key segments and two embedded videos. Key-segment
placement is drawn once from a fixed seed; the dwell bounds are then picked
by grid search so that Dynamic mode's averaged time profile lands closest to
24.8 % positive / 42.1 % transition / 33.1 % negative (transition here
includes unvalenced neutral time, see TimeProfile.three_way).

    python scripts/calibrate_profile.py            # search and print
    python scripts/calibrate_profile.py --write    # also rewrite the fixtures
"""

import argparse
import itertools
from dataclasses import replace
from pathlib import Path

import numpy as np

from classcrowd.core import LectureTimeline, Mode, SeatingChart
from classcrowd.io import ProjectConfig
from classcrowd.metrics import proportions
from classcrowd.scheduler import DynamicParams, ModeParams, generate_dynamic

TARGET = np.array([0.248, 0.421, 0.331])
DURATION = 1980.0
FIXTURES = Path(__file__).resolve().parents[1] / "src" / "classcrowd" / "fixtures"


def reference_timeline(seed: int = 2023) -> LectureTimeline:
    gen = np.random.default_rng(seed)
    lengths = gen.uniform(21.0, 33.0, size=19).round(1)
    # videos sit in the gaps after key segments 6 and 13
    video_len = 48.0
    video_gaps = {6: video_len + 2 * 30.0, 13: video_len + 2 * 30.0}
    first, tail = 30.0, 40.0
    free = DURATION - first - tail - lengths.sum() - sum(video_gaps.values())
    weights = gen.uniform(0.7, 1.3, size=18)
    plain = [i for i in range(18) if i not in video_gaps]
    gaps = np.zeros(18)
    gaps[plain] = free * weights[plain] / weights[plain].sum()
    for i, g in video_gaps.items():
        gaps[i] = g
    keys, videos = [], []
    t = first
    for i, length in enumerate(lengths):
        keys.append((round(t, 1), round(t + length, 1)))
        t += length
        if i < 18:
            if i in video_gaps:
                videos.append((round(t + 30.0, 1), round(t + 30.0 + video_len, 1)))
            t += round(gaps[i], 1)
    return LectureTimeline(DURATION, tuple(keys), tuple(videos))


def profile(timeline, chart, params, seeds):
    rows = []
    for s in seeds:
        rows.append(proportions(generate_dynamic(timeline, chart, params, s)).three_way())
    return np.array(rows)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--write", action="store_true", help="rewrite the reference fixtures")
    ap.add_argument("--seeds", type=int, default=20)
    args = ap.parse_args()

    timeline = reference_timeline()
    chart = SeatingChart.default()
    seeds = range(args.seeds)
    best = None
    for lo, width in itertools.product(np.arange(6.0, 20.01, 1.0), (2.0, 4.0, 6.0, 8.0)):
        params = ModeParams(dynamic=DynamicParams(negative_dwell_min=float(lo), negative_dwell_max=float(lo + width)))
        got = profile(timeline, chart, params, seeds)
        worst = np.abs(got - TARGET).max()
        mean_err = np.abs(got.mean(axis=0) - TARGET).max()
        if best is None or (mean_err, worst) < best[0]:
            best = ((mean_err, worst), params, got)
    (mean_err, worst), params, got = best
    print(f"dwell [{params.dynamic.negative_dwell_min}, {params.dynamic.negative_dwell_max}] s")
    print("mean three-way profile:", np.round(got.mean(axis=0), 4), "target:", TARGET)
    print(f"max |error| of mean: {mean_err:.4f}; worst single seed: {worst:.4f}")

    if args.write:
        FIXTURES.mkdir(parents=True, exist_ok=True)
        for mode in Mode:
            cfg = ProjectConfig(timeline, chart, mode, params, seed=7)
            path = FIXTURES / f"reference_{mode.value}.yaml"
            path.write_text(cfg.dump(), encoding="utf-8")
            print("wrote", path)


if __name__ == "__main__":
    main()
