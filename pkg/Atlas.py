"""
Coset Atlas - command-line entry point.

Startup sequence:
    1. Load env from .env (+ .env.local override)
    2. setup_application_logging (loguru storage.log); console only unless ATLAS_LOG_DIR is set
    3. main(): banner + versions, then dispatch to the argparse surface in commands.cli
    4. exit with the command's code (0 ok, 2 precondition/gate, 3 budget, 4 invariant breach)
"""

import logging
import sys

from utils.env import load_project_env, str_env

# Load env before importing anything that reads it.
load_project_env()

import networkx
import numpy

from commands.cli import main as cli_main
from storage.log import setup_application_logging

APPLICATION_NAME = "coset-atlas"

logger = logging.getLogger(APPLICATION_NAME)


def _configure_logging() -> logging.Logger:
    """Install the loguru sinks; file sinks only when ``ATLAS_LOG_DIR`` is set."""
    log_dir = str_env("ATLAS_LOG_DIR")
    return setup_application_logging(
        app_name=APPLICATION_NAME,
        log_level=logging.INFO,
        log_dir=log_dir,
        enable_json=log_dir is not None,
    )


def main(argv=None) -> int:
    """Process entry point."""
    _configure_logging()
    logger.debug(f"=== Starting {APPLICATION_NAME} ===")
    logger.debug(
        f"Python {sys.version.split()[0]}, numpy {numpy.__version__}, "
        f"networkx {networkx.__version__}"
    )
    try:
        code = cli_main(argv)
    except KeyboardInterrupt:
        logger.info("Interrupted.")
        code = 130
    except Exception:
        logger.critical("Fatal error in main execution", exc_info=True)
        code = 4
    logger.debug(f"=== {APPLICATION_NAME} finished with exit code {code} ===")
    return code


if __name__ == "__main__":
    sys.exit(main())
