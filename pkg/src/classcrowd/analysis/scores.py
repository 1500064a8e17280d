from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Sequence


@dataclass(frozen=True)
class TestResponse:
    __test__ = False  # keep pytest from collecting this class

    participant: str
    answers: tuple[int, ...]
    key: tuple[int, ...]
    choices: int = 4

    def __post_init__(self):
        object.__setattr__(self, "answers", tuple(int(a) for a in self.answers))
        object.__setattr__(self, "key", tuple(int(k) for k in self.key))
        for a in self.answers + self.key:
            if not 1 <= a <= self.choices:
                raise ValueError(f"choice {a} outside 1..{self.choices}")


def score_test(response: TestResponse) -> int:
    if len(response.answers) != len(response.key):
        raise ValueError(
            f"{response.participant}: {len(response.answers)} answers for {len(response.key)} questions"
        )
    return sum(a == k for a, k in zip(response.answers, response.key))


def correct_matrix(responses: Sequence[TestResponse]) -> list[list[bool]]:
    for r in responses:
        score_test(r)  # length check
    return [[a == k for a, k in zip(r.answers, r.key)] for r in responses]


def per_question_crosstab(
    responses: Sequence[TestResponse],
    note_flags: Mapping[str, Sequence[bool]],
) -> list[tuple[int, float, float]]:
    """(question, share answering correctly, share with a key note) per question."""
    if not responses:
        return []
    missing = [r.participant for r in responses if r.participant not in note_flags]
    if missing:
        raise ValueError(f"no note flags for {missing}")
    correct = correct_matrix(responses)
    n_q = len(responses[0].key)
    for r in responses:
        if len(note_flags[r.participant]) != n_q:
            raise ValueError(f"{r.participant}: note flags do not cover {n_q} questions")
    n = len(responses)
    out = []
    for q in range(n_q):
        acc = sum(row[q] for row in correct) / n
        noted = sum(bool(note_flags[r.participant][q]) for r in responses) / n
        out.append((q + 1, acc, noted))
    return out
