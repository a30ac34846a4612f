"""Logger seam for library modules.

Modules import the logger as ``from storage.logging_compat import get_logger``; the logger ships
in ``storage.log``, so this is a one-line re-export kept as a stable import point.
"""

from __future__ import annotations

from .log import get_logger

__all__ = ["get_logger"]
