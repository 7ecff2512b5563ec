"""Frames and semi-frames across a scale of weighted Hilbert spaces, at finite truncation."""

__version__ = "0.1.0"

from .config import ConfigError, ExperimentPlan, parse_config  # noqa: E402
from .frames import (  # noqa: E402
    canonical_dual,
    classify,
    completeness,
    cross_frame_operator,
    frame_bounds,
)
from .runner import ReportBundle, emit, run_plan  # noqa: E402
from .scale import ChainOperator, ScaleSpec, berezanskii_map, make_scale, pivot_adjoint  # noqa: E402
from .sequences import (  # noqa: E402
    SequenceFamily,
    canonical_basis,
    random_bessel,
    riesz_from_operator,
    transform_sequence,
    weighted_basis,
)

__all__ = [
    "ChainOperator",
    "ConfigError",
    "ExperimentPlan",
    "ReportBundle",
    "ScaleSpec",
    "SequenceFamily",
    "berezanskii_map",
    "canonical_basis",
    "canonical_dual",
    "classify",
    "completeness",
    "cross_frame_operator",
    "emit",
    "frame_bounds",
    "make_scale",
    "parse_config",
    "pivot_adjoint",
    "random_bessel",
    "riesz_from_operator",
    "run_plan",
    "transform_sequence",
    "weighted_basis",
]
