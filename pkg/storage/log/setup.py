"""Application-level logging setup.

``setup_application_logging`` is the one call the launcher makes at startup: it fixes the shared
level (``LOG_LEVEL`` env wins), installs the loguru sinks and the stdlib -> loguru intercept, and
silences noisy third-party loggers.
"""

from __future__ import annotations

import logging
import os
from typing import Optional

from .factory import (
    _configure_sinks,
    _resolve_log_level,
    _silence_noisy_loggers,
    get_logger,
    set_global_level,
)


def setup_application_logging(
    app_name: str,
    log_level: int | str = logging.INFO,
    log_dir: Optional[str] = None,
    enable_json: bool = False,
) -> logging.Logger:
    """Set up application-wide logging.

    :param app_name: Application name; used for log file names and the default logger.
    :param log_level: Base level (the ``LOG_LEVEL`` env var still wins).
    :param log_dir: Directory for ``{app_name}.log`` / ``{app_name}.jsonl``; ``None`` keeps
        output on the console only.
    :param enable_json: Also write a structured JSON sink next to the text log.
    :return: The main application logger (a stdlib logger routed into loguru).
    """
    resolved_level = set_global_level(
        _resolve_log_level(os.getenv("LOG_LEVEL"), _resolve_log_level(log_level))
    )

    _configure_sinks(
        app_name,
        log_dir=log_dir,
        level=resolved_level,
        console=True,
        json=enable_json,
    )
    _silence_noisy_loggers()

    main_logger = get_logger(app_name)
    main_logger.debug(f"Application logging initialized for: {app_name}")
    return main_logger
