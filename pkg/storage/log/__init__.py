"""storage.log - the loguru-powered structured logger.

**loguru** does the rendering (colored console, optional rotating file and JSON sinks); the
stdlib is kept as the front door so ``get_logger`` returns a real ``logging.Logger`` and every
call site funnels into loguru via an ``InterceptHandler``.

The launcher imports the public surface::

    from storage.log import get_logger, setup_application_logging

Library modules consume ``get_logger`` via the sibling ``storage.logging_compat`` seam.
"""

from __future__ import annotations

from loguru import logger

from .factory import (
    CONSOLE_FORMAT,
    FILE_FORMAT,
    InterceptHandler,
    get_logger,
    set_global_level,
)
from .performance import PerformanceLogger
from .setup import setup_application_logging

__all__ = [
    "logger",
    "get_logger",
    "setup_application_logging",
    "set_global_level",
    "PerformanceLogger",
    "InterceptHandler",
    "CONSOLE_FORMAT",
    "FILE_FORMAT",
]
