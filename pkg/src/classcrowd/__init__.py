"""Behaviour schedules for a crowd of virtual-classroom student characters,
plus the posture, note, score and rank-test analyses used to evaluate them."""

from .core import (
    ActionEvent,
    ActionKind,
    GazeCycle,
    GazeTarget,
    LectureTimeline,
    Mode,
    RowKind,
    Schedule,
    SeatingChart,
    action_at,
    valence,
)
from .metrics import (
    PositivitySeries,
    TimeProfile,
    ValidationReport,
    positivity,
    positivity_series,
    proportions,
    validate,
)
from .rng import Rng
from .scheduler import (
    DynamicParams,
    ModeParams,
    StableParams,
    apply_jitter,
    generate,
    generate_dynamic,
    generate_gaze_cycle,
    generate_opening,
    generate_stable,
    notetaking_gaze,
)

__version__ = "0.1.0"
