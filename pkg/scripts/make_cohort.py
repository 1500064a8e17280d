"""Write the synthetic 50-participant evaluation cohort used by the tests.

Scores are drawn around the target mean and then nudged so the cohort mean
is exactly 15.7 of 19. Eight participants per mode take no notes.

    python scripts/make_cohort.py [OUT_DIR]
"""

import sys
from pathlib import Path

import numpy as np

from classcrowd.io import KEYPOINT_HEADER, table_csv

N_PER_MODE = 25
QUESTIONS = 19
SLIDES = 29
TARGET_TOTAL = 785  # 15.7 * 50
POSTURE_PARTICIPANTS = 8
DEFAULT_OUT = Path(__file__).resolve().parents[1] / "tests" / "data" / "cohort"


def nudge_to_total(scores: np.ndarray, total: int, gen) -> np.ndarray:
    scores = scores.copy()
    while scores.sum() != total:
        step = 1 if scores.sum() < total else -1
        ok = np.flatnonzero((scores + step >= 0) & (scores + step <= QUESTIONS))
        scores[gen.choice(ok)] += step
    return scores


def main(out: Path) -> None:
    gen = np.random.default_rng(157)
    out.mkdir(parents=True, exist_ok=True)
    pids = [f"p{i:02d}" for i in range(1, 2 * N_PER_MODE + 1)]
    modes = ["stable"] * N_PER_MODE + ["dynamic"] * N_PER_MODE
    took = np.ones(len(pids), dtype=bool)
    for block in (range(0, N_PER_MODE), range(N_PER_MODE, 2 * N_PER_MODE)):
        took[gen.choice(list(block), size=8, replace=False)] = False

    key = gen.integers(1, 5, size=QUESTIONS)
    raw = np.clip(np.rint(gen.normal(15.7, 2.2, size=len(pids))), 8, QUESTIONS).astype(int)
    scores = nudge_to_total(raw, TARGET_TOTAL, gen)

    answers = []
    for s in scores:
        correct = set(gen.choice(QUESTIONS, size=s, replace=False).tolist())
        row = []
        for q in range(QUESTIONS):
            if q in correct:
                row.append(int(key[q]))
            else:
                wrong = [c for c in (1, 2, 3, 4) if c != key[q]]
                row.append(int(gen.choice(wrong)))
        answers.append(row)

    question_slides = {q + 1: sorted(gen.choice(np.arange(1, SLIDES + 1), size=gen.integers(1, 3), replace=False).tolist()) for q in range(QUESTIONS)}
    key_slides = sorted({s for v in question_slides.values() for s in v})

    notes = []
    for pid, t in zip(pids, took):
        if not t:
            continue
        for slide in sorted(gen.choice(np.arange(1, SLIDES + 1), size=gen.integers(2, 12), replace=False).tolist()):
            if slide in key_slides:
                notes.append([pid, slide, "key", int(gen.integers(1, 4))])
            if gen.random() < 0.4 or slide not in key_slides:
                notes.append([pid, slide, "non-key", int(gen.integers(1, 3))])

    (out / "groups.csv").write_text(
        table_csv(["participant_id", "mode", "took_notes"], [[p, m, "yes" if t else "no"] for p, m, t in zip(pids, modes, took)])
    )
    (out / "key.csv").write_text(table_csv(["question", "answer"], [[q + 1, int(a)] for q, a in enumerate(key)]))
    (out / "responses.csv").write_text(
        table_csv(["participant_id"] + [f"q{q + 1}" for q in range(QUESTIONS)], [[p] + a for p, a in zip(pids, answers)])
    )
    (out / "notes.csv").write_text(table_csv(["participant_id", "slide", "segment", "count"], notes))
    (out / "question_slides.csv").write_text(
        table_csv(["question", "slides"], [[q, ";".join(map(str, s))] for q, s in question_slides.items()])
    )

    # side-view keypoints: three minutes at 2 Hz for a handful of participants
    kp_dir = out / "keypoints"
    kp_dir.mkdir(exist_ok=True)
    picks = [0, 1, 2, 3, 25, 26, 27, 28]
    for i in picks[:POSTURE_PARTICIPANTS]:
        lean = 8.0 if not took[i] else -4.0
        rows = []
        for k in range(360):
            t = k * 0.5
            angle = np.radians(90.0 + lean + 3.0 * np.sin(t / 20.0) + gen.normal(0, 1.0))
            hip = (320.0 + gen.normal(0, 0.5), 400.0)
            length = 180.0
            # facing image-left: leaning back moves the neck to image-right
            neck = (hip[0] - length * np.cos(angle), hip[1] - length * np.sin(angle))
            conf = 0.1 if k % 50 == 7 else 0.9
            rows.append([f"{t:.3f}", f"{neck[0]:.3f}", f"{neck[1]:.3f}", f"{hip[0]:.3f}", f"{hip[1]:.3f}", conf, 0.9])
        (kp_dir / f"{pids[i]}.csv").write_text(table_csv(KEYPOINT_HEADER.split(","), rows))
    print(f"wrote cohort to {out} (mean {scores.mean():.4f})")


if __name__ == "__main__":
    main(Path(sys.argv[1]) if len(sys.argv) > 1 else DEFAULT_OUT)
