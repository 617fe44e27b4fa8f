import logging
import os
import sys
from datetime import datetime
from logging.handlers import RotatingFileHandler

from . import dirs

# third-party loggers that flood DEBUG output (font lookups, image backends)
_QUIET_LOGGERS = ("matplotlib", "PIL")


def setup_logging(
    name: str,
    verbose: bool = False,
    log_stderr: bool = True,
    log_file: bool = False,
) -> None:  # pragma: no cover
    """
    Configure the root logger for a sicspin run.

    Python warnings (numpy overflow, scipy OptimizeWarning) are routed into
    logging so they end up next to the fit messages that caused them.
    """
    root = logging.getLogger()
    root.setLevel(logging.DEBUG if verbose else logging.INFO)
    root.handlers = []

    formatter = _human_formatter()
    if log_stderr:
        stderr_handler = logging.StreamHandler(stream=sys.stderr)
        stderr_handler.setFormatter(formatter)
        root.addHandler(stderr_handler)
    if log_file:
        file_handler = _run_file_handler(name)
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)

    for noisy in _QUIET_LOGGERS:
        logging.getLogger(noisy).setLevel(logging.WARNING)
    logging.captureWarnings(True)

    def excepthook(type_, value, tb):
        root.critical("Unhandled exception", exc_info=(type_, value, tb))
        if not log_stderr:
            sys.__excepthook__(type_, value, tb)

    sys.excepthook = excepthook


def _run_file_handler(name: str) -> logging.Handler:  # pragma: no cover
    # one file per run: $LOG_DIR/<name>/<name>_2026-01-05T00-21-39.log
    started = datetime.now().strftime("%Y-%m-%dT%H-%M-%S")
    path = os.path.join(dirs.get_log_dir(name), f"{name}_{started}.log")
    # 5 MB, two backups
    return RotatingFileHandler(path, maxBytes=5 * 1024 * 1024, backupCount=2)


def _human_formatter() -> logging.Formatter:
    return logging.Formatter(
        "%(asctime)s [%(levelname)-5s]: %(message)s  (%(name)s:%(lineno)s)",
        "%Y-%m-%d %H:%M:%S",
    )
