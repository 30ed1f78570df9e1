"""
Logging Module - Loggers for the linsess library and CLI
========================================================

Library code only obtains loggers through get_logger(); the command-line
front end calls setup_logging() once. Records go to:
- stderr, coloured when it is a terminal (stdout carries reports)
- linsess.log in --log-dir, plain text or JSON lines
- errors.log in --log-dir, JSON lines, ERROR and above

Every record carries the per-command context (command, source file) set
with set_log_context().
"""

import json
import logging
import sys
import threading
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, Optional


ROOT_LOGGER = "linsess"

PLAIN_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s:%(lineno)d | %(message)s"


class JSONFormatter(logging.Formatter):
    """One JSON object per record."""

    def format(self, record: logging.LogRecord) -> str:
        entry = {
            "timestamp": datetime.now(timezone.utc).isoformat().replace("+00:00", "Z"),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "where": f"{record.module}.{record.funcName}:{record.lineno}",
        }
        context = getattr(record, "extra_data", None)
        if context:
            entry["context"] = context
        if record.exc_info:
            entry["exception"] = self.formatException(record.exc_info)
        return json.dumps(entry, default=str)


class ColoredFormatter(logging.Formatter):
    """``[LEVEL] hh:mm:ss | logger | message | key=value ...``"""

    COLORS = {
        "DEBUG": "\033[36m",
        "INFO": "\033[32m",
        "WARNING": "\033[33m",
        "ERROR": "\033[31m",
        "CRITICAL": "\033[35m",
    }
    RESET = "\033[0m"
    BOLD = "\033[1m"

    def __init__(self, use_color: bool = True):
        super().__init__()
        self.use_color = use_color

    def format(self, record: logging.LogRecord) -> str:
        level = f"[{record.levelname}]"
        if self.use_color:
            level = f"{self.COLORS.get(record.levelname, '')}{self.BOLD}{level}{self.RESET}"
        short_name = record.name[len(ROOT_LOGGER) + 1:] or record.name
        line = f"{level} {datetime.now():%H:%M:%S} | {short_name} | {record.getMessage()}"

        context = getattr(record, "extra_data", None)
        if context:
            line += " | " + " ".join(f"{k}={v}" for k, v in sorted(context.items()))
        if record.exc_info:
            line += f"\n{self.formatException(record.exc_info)}"
        return line


class ContextFilter(logging.Filter):
    """
    Attaches the thread-local command context, merged with the adapter's
    fixed context, to each record as ``extra_data``.
    """

    _local = threading.local()

    @classmethod
    def set_context(cls, **kwargs) -> None:
        if not hasattr(cls._local, "data"):
            cls._local.data = {}
        cls._local.data.update(kwargs)

    @classmethod
    def clear_context(cls) -> None:
        cls._local.data = {}

    def filter(self, record: logging.LogRecord) -> bool:
        data = dict(getattr(self._local, "data", {}) or {})
        data.update(getattr(record, "adapter_extra", {}) or {})
        record.extra_data = data
        return True


class LoggerAdapter(logging.LoggerAdapter):
    """Carries a fixed context (e.g. component=engine) on every record."""

    def process(self, msg: str, kwargs: Dict[str, Any]) -> tuple:
        extra = dict(kwargs.get("extra", {}) or {})
        extra["adapter_extra"] = dict(self.extra)
        kwargs["extra"] = extra
        return msg, kwargs


_loggers: Dict[str, logging.Logger] = {}
_configured = False


def setup_logging(
    log_dir: Optional[str] = None,
    log_level: str = "WARNING",
    json_format: bool = False,
    console_output: bool = True,
) -> None:
    """
    Configure the ``linsess`` logger. Later calls are ignored until
    reset_logging().

    Args:
        log_dir: Directory for linsess.log and errors.log (none: no files)
        log_level: Minimum level, e.g. "DEBUG" for --debug
        json_format: JSON lines in linsess.log
        console_output: Log to stderr
    """
    global _configured

    if _configured:
        return

    root = logging.getLogger(ROOT_LOGGER)
    root.setLevel(getattr(logging, log_level.upper(), logging.WARNING))
    root.handlers.clear()
    root.propagate = False
    context_filter = ContextFilter()

    def attach(handler: logging.Handler, level: int, formatter: logging.Formatter) -> None:
        handler.setLevel(level)
        handler.setFormatter(formatter)
        handler.addFilter(context_filter)
        root.addHandler(handler)

    if console_output:
        attach(
            logging.StreamHandler(sys.stderr),
            logging.DEBUG,
            ColoredFormatter(use_color=sys.stderr.isatty()),
        )

    if log_dir:
        directory = Path(log_dir)
        directory.mkdir(parents=True, exist_ok=True)
        attach(
            logging.FileHandler(directory / "linsess.log", encoding="utf-8"),
            logging.DEBUG,
            JSONFormatter() if json_format else logging.Formatter(PLAIN_FORMAT),
        )
        attach(
            logging.FileHandler(directory / "errors.log", encoding="utf-8"),
            logging.ERROR,
            JSONFormatter(),
        )

    _configured = True


def reset_logging() -> None:
    """Close and drop every handler so setup_logging() configures afresh."""
    global _configured
    root = logging.getLogger(ROOT_LOGGER)
    for handler in list(root.handlers):
        root.removeHandler(handler)
        handler.close()
    _configured = False


def get_logger(name: str, **extra) -> LoggerAdapter:
    """
    Logger under ``linsess``.

    Example:
        logger = get_logger("semantics.reduction", component="engine")
    """
    full_name = name if name.startswith(ROOT_LOGGER) else f"{ROOT_LOGGER}.{name}"
    if full_name not in _loggers:
        _loggers[full_name] = logging.getLogger(full_name)
    return LoggerAdapter(_loggers[full_name], extra)


def set_log_context(**kwargs) -> None:
    """e.g. ``set_log_context(command="check", file="corpus/system_ok.lsp")``"""
    ContextFilter.set_context(**kwargs)


def clear_log_context() -> None:
    ContextFilter.clear_context()
