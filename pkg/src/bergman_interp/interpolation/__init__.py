"""Constructive derivative interpolation with uniformly controlled norms."""

from .annihilator import Annihilator, build_annihilator
from .calibration import Calibration, CalibrationCheck, calibrate, ratio_radius, verify_calibration
from .engine import (
    CENTRAL,
    CLUSTERED,
    GENERAL,
    InterpolationProblem,
    InterpolationResult,
    Setup,
    clustered_matrix,
    estimate_result_norm,
    interpolate,
    interpolate_central,
    interpolate_clustered,
    pigeonhole,
    setup,
)
from .msequence import GREEDY, PAPER, MSequence, build_m_sequence, row_margins

__all__ = [
    "Annihilator",
    "CENTRAL",
    "CLUSTERED",
    "Calibration",
    "CalibrationCheck",
    "GENERAL",
    "GREEDY",
    "InterpolationProblem",
    "InterpolationResult",
    "MSequence",
    "PAPER",
    "Setup",
    "build_annihilator",
    "build_m_sequence",
    "calibrate",
    "clustered_matrix",
    "estimate_result_norm",
    "interpolate",
    "interpolate_central",
    "interpolate_clustered",
    "pigeonhole",
    "ratio_radius",
    "row_margins",
    "setup",
    "verify_calibration",
]
