from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

KEY = "key"
NON_KEY = "non-key"


@dataclass(frozen=True)
class NoteRecord:
    participant: str
    slide: int
    segment: str  # KEY or NON_KEY
    count: int

    def __post_init__(self):
        if self.segment not in (KEY, NON_KEY):
            raise ValueError(f"segment must be {KEY!r} or {NON_KEY!r}, got {self.segment!r}")
        if self.slide < 1:
            raise ValueError("slide index starts at 1")
        if self.count < 0:
            raise ValueError("note count must be non-negative")


def count_notes(records: Iterable[NoteRecord], participant: str) -> tuple[int, int]:
    """Slides with at least one key note and at least one non-key note.

    A slide holding both kinds counts once in each total.
    """
    key, non_key = set(), set()
    for r in records:
        if r.participant != participant or r.count < 1:
            continue
        (key if r.segment == KEY else non_key).add(r.slide)
    return len(key), len(non_key)


def took_notes(records: Iterable[NoteRecord], participant: str) -> bool:
    return sum(count_notes(records, participant)) > 0


def note_flags(
    records: Sequence[NoteRecord],
    participants: Iterable[str],
    question_slides: Mapping[int, Sequence[int]],
) -> dict[str, list[bool]]:
    """Per participant and question: was a key note taken on a slide feeding it?

    ``question_slides`` maps 1-based question numbers to slide indices.
    """
    noted: dict[str, set[int]] = {}
    for r in records:
        if r.segment == KEY and r.count > 0:
            noted.setdefault(r.participant, set()).add(r.slide)
    questions = sorted(question_slides)
    return {
        p: [bool(noted.get(p, set()) & set(question_slides[q])) for q in questions]
        for p in participants
    }
