"""
Core Module - Foundation components for linsess
===============================================

This module provides the foundational components including:
- Configuration management
- Logging setup
- Exception handling
"""

from .config import Config, load_config, save_config
from .exceptions import (
    LinsessError,
    ConfigError,
    ParseError,
    TypeCheckError,
    NotRecursiveError,
    FuelExhausted,
    SortError,
)
from .logging import setup_logging, reset_logging, get_logger, set_log_context, clear_log_context

__all__ = [
    "Config",
    "load_config",
    "save_config",
    "LinsessError",
    "ConfigError",
    "ParseError",
    "TypeCheckError",
    "NotRecursiveError",
    "FuelExhausted",
    "SortError",
    "setup_logging",
    "reset_logging",
    "get_logger",
    "set_log_context",
    "clear_log_context",
]
