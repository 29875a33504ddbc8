import logging
import sys
from typing import Optional

_use_stderr = False


class _ConsoleHandler(logging.StreamHandler):
    """Stream handler that resolves stdout/stderr at emit time"""

    def emit(self, record):
        self.stream = sys.stderr if _use_stderr else sys.stdout
        super().emit(record)


def route_logs_to_stderr(enabled: bool = True) -> None:
    """Send log lines to stderr so stdout stays machine-readable (CLI mode)"""
    global _use_stderr
    _use_stderr = enabled


def get_logger(name: str, level: Optional[str] = None) -> logging.Logger:
    """Get configured logger instance"""
    logger = logging.getLogger(name)

    if not logger.handlers:
        log_level = getattr(logging, (level or "INFO").upper())
        logger.setLevel(log_level)

        handler = _ConsoleHandler()
        handler.setLevel(log_level)

        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        handler.setFormatter(formatter)
        logger.addHandler(handler)
        logger.propagate = False

    return logger


def set_level(level: str) -> None:
    """Apply a level to every lab logger created so far"""
    log_level = getattr(logging, level.upper())
    for name, obj in logging.root.manager.loggerDict.items():
        if name.startswith("src") and isinstance(obj, logging.Logger):
            obj.setLevel(log_level)
            for handler in obj.handlers:
                handler.setLevel(log_level)
