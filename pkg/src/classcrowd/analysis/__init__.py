from .notes import KEY, NON_KEY, NoteRecord, count_notes, note_flags, took_notes
from .posture import (
    GROUPS,
    Facing,
    KeypointFrame,
    LowConfidence,
    PostureSeries,
    UndefinedAngle,
    group_label,
    minute_averages,
    posture_series,
    torso_angle,
)
from .scores import TestResponse, per_question_crosstab, score_test
from .stats import StatResult, kruskal_wallis, rank_sum_z, wilcoxon_rank_sum

__all__ = [
    "KEY", "NON_KEY", "NoteRecord", "count_notes", "note_flags", "took_notes",
    "GROUPS", "Facing", "KeypointFrame", "LowConfidence", "PostureSeries",
    "UndefinedAngle", "group_label", "minute_averages", "posture_series", "torso_angle",
    "TestResponse", "per_question_crosstab", "score_test",
    "StatResult", "kruskal_wallis", "rank_sum_z", "wilcoxon_rank_sum",
]
