"""Single source of truth for environment loading (+ tiny typed env readers).

The launcher loads ``.env`` from the project root (falling back to the default ``.env`` search
from the working directory) and then ``.env.local`` over it, so local values win.
"""

import logging
import os
from pathlib import Path

from dotenv import load_dotenv

_loaded = False


def load_project_env() -> Path | None:
    """Load the project ``.env`` once (+ a ``.env.local`` override when present).

    Returns the path loaded, or None for the fallback search.
    """
    global _loaded
    if _loaded:
        return None
    root = Path(__file__).resolve().parent.parent
    candidate = root / ".env"
    _loaded = True
    if candidate.exists():
        load_dotenv(candidate)
        local = root / ".env.local"
        if local.exists():
            load_dotenv(local, override=True)
        return candidate
    load_dotenv()
    return None


def int_env(name: str, default: int) -> int:
    """Read an integer env var, falling back to ``default`` on unset/invalid values."""
    raw = os.getenv(name)
    if not raw:
        return default
    try:
        return int(raw)
    except ValueError:
        logging.getLogger(__name__).warning(
            "Invalid %s=%r; using default %d.", name, raw, default
        )
        return default


def float_env(name: str, default: float) -> float:
    """Read a float env var, falling back to ``default`` on unset/invalid values."""
    raw = os.getenv(name)
    if not raw:
        return default
    try:
        return float(raw)
    except ValueError:
        logging.getLogger(__name__).warning(
            "Invalid %s=%r; using default %s.", name, raw, default
        )
        return default


def str_env(name: str, default: str | None = None) -> str | None:
    raw = os.getenv(name)
    return raw.strip() if raw and raw.strip() else default
