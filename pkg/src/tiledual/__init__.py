"""Exact tiling checks and certified spectral diagnostics for periodic sets on the line."""
from .fourier import StepFunction, TruncationError, plancherel_sum
from .intervals import Interval, IntervalSet, interval_set, measure
from .spectral import Thresholds, Verdict, duality_verdict
from .tiling import PeriodicSet, PreconditionError, complete_to_tile, tiles_by_residues

__version__ = "0.1.0"

__all__ = [
    "Interval",
    "IntervalSet",
    "PeriodicSet",
    "PreconditionError",
    "StepFunction",
    "Thresholds",
    "TruncationError",
    "Verdict",
    "complete_to_tile",
    "duality_verdict",
    "interval_set",
    "measure",
    "plancherel_sum",
    "tiles_by_residues",
]
