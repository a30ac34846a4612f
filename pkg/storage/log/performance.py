"""Timing helpers built on the engine logger.

``PerformanceLogger`` logs the start and end of a named operation with its elapsed seconds,
measured with ``time.perf_counter()``.
"""

from __future__ import annotations

import logging
import time


class PerformanceLogger:
    """Context manager for measuring execution time of a named operation."""

    def __init__(self, logger: logging.Logger, operation_name: str, level: int = logging.DEBUG):
        self.logger = logger
        self.operation_name = operation_name
        self.level = level
        self.elapsed: float = 0.0
        self._start: float | None = None

    def __enter__(self):
        self._start = time.perf_counter()
        self.logger.debug(f"Starting operation: {self.operation_name}")
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.elapsed = time.perf_counter() - (self._start or time.perf_counter())
        self.logger.log(
            self.level, f"Operation '{self.operation_name}' completed in {self.elapsed:.4f}s"
        )
