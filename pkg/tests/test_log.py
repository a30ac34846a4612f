import logging

from storage.log import PerformanceLogger


def test_performance_logger_reports_elapsed_time(caplog):
    logger = logging.getLogger("atlas.timing")
    with caplog.at_level(logging.DEBUG, logger="atlas.timing"):
        with PerformanceLogger(logger, "fold core") as timer:
            sum(range(1000))
    assert timer.elapsed >= 0
    messages = [r.getMessage() for r in caplog.records if r.name == "atlas.timing"]
    assert messages[0] == "Starting operation: fold core"
    assert messages[-1].startswith("Operation 'fold core' completed in ")


def test_performance_logger_uses_the_requested_level(caplog):
    logger = logging.getLogger("atlas.timing.info")
    with caplog.at_level(logging.INFO, logger="atlas.timing.info"):
        with PerformanceLogger(logger, "materialise", level=logging.INFO):
            pass
    levels = [r.levelno for r in caplog.records if r.name == "atlas.timing.info"]
    # The start line is DEBUG and filtered out at INFO.
    assert levels == [logging.INFO]
