"""Instance configuration, the diagnostics pipeline and its stage log."""

from __future__ import annotations

from .config import InstanceConfig, Thresholds, kernel_generators
from .pipeline import DiagnosticsReport, decide_verdict, run_pipeline
from .stages import StageError, StageLog

__all__ = [
    "DiagnosticsReport",
    "InstanceConfig",
    "StageError",
    "StageLog",
    "Thresholds",
    "decide_verdict",
    "kernel_generators",
    "run_pipeline",
]
