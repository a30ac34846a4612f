"""Logging engine (``storage.log``), the logger seam and report exports (``storage.export``).

Public surface::

    from storage.log import get_logger, setup_application_logging
    from storage.export import export_json, write_report
"""
