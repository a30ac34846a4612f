"""Pipeline stage timing.

``stage(module, name)`` times one stage into a :class:`StageLog` and wraps any library error in
:class:`StageError` so the failure names where it happened. ``StageLog.summary()`` renders the
closing table the launcher logs after every run.
"""

from __future__ import annotations

import logging
import time
from collections import OrderedDict
from contextlib import contextmanager
from typing import Iterator, Tuple

from tabulate import tabulate

from groups.exceptions import AtlasError
from storage.logging_compat import get_logger

logger = get_logger(__name__)


class StageError(AtlasError):
    """An error raised inside a pipeline stage, tagged with the module and stage names."""

    def __init__(self, module: str, stage: str, cause: BaseException):
        super().__init__(f"[{module}/{stage}] {cause}")
        self.module = module
        self.stage = stage
        self.cause = cause
        self.exit_code = getattr(cause, "exit_code", 4)


class StageLog:
    """Ordered ``(module, stage) -> seconds`` record of one run."""

    def __init__(self):
        self.durations: "OrderedDict[Tuple[str, str], float]" = OrderedDict()
        self.skipped: "OrderedDict[Tuple[str, str], str]" = OrderedDict()

    def skip(self, module: str, name: str, reason: str) -> None:
        self.skipped[(module, name)] = reason
        logger.info(f"Skipped stage: {module}/{name} ({reason})")

    @contextmanager
    def stage(self, module: str, name: str) -> Iterator[None]:
        start = time.perf_counter()
        logger.info(f"Starting stage: {module}/{name}")
        try:
            yield
        except StageError:
            raise
        except AtlasError as exc:
            duration = time.perf_counter() - start
            self.durations[(module, name)] = duration
            logger.error(f"Failed stage: {module}/{name} after {duration:.4f}s - {exc}")
            raise StageError(module, name, exc) from exc
        duration = time.perf_counter() - start
        self.durations[(module, name)] = duration
        logger.info(f"Completed stage: {module}/{name} in {duration:.4f}s")

    @property
    def total(self) -> float:
        return sum(self.durations.values())

    def rows(self):
        total = self.total
        rows = []
        for (module, name), duration in self.durations.items():
            pct = f"{(duration / total * 100):.1f}%" if total > 0 else "0%"
            rows.append([module, name, f"{duration:.4f}", pct])
        for (module, name), reason in self.skipped.items():
            rows.append([module, name, "skipped", reason])
        rows.append(["TOTAL", "", f"{total:.4f}", "100%"])
        return rows

    def summary(self) -> str:
        return tabulate(
            self.rows(),
            headers=["Module", "Stage", "Duration (s)", "Share"],
            tablefmt="fancy_grid",
        )

    def log_summary(self, level: int = logging.INFO) -> None:
        logger.log(level, f"Stage summary:\n{self.summary()}")
