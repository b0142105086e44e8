"""
Logging for the library and the CLI.

Library modules log through logging.getLogger(__name__) and stay silent
until the package root is configured. Reports own stdout, so the handler
writes to stderr. Single modules can be made louder or quieter than the
root, e.g. DIOPHANTINE_LOG_LEVELS="empirical.enumeration=DEBUG".
"""

import logging
import sys
from typing import Mapping, TextIO

from diophantine_exponents.common.exceptions import PreconditionError

ROOT_LOGGER = "diophantine_exponents"
LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(message)s"


def _as_level(level: int | str) -> int:
    if isinstance(level, int):
        return level
    value = logging.getLevelName(level.strip().upper())
    if not isinstance(value, int):
        raise PreconditionError(f"unknown log level {level!r}", "logger")
    return value


def parse_module_levels(spec: str) -> dict[str, int]:
    """
    Parse "module=LEVEL,..." into {module: level}.

    Module names are relative to the package root.

    Raises:
        PreconditionError: On an entry without "=" or with an unknown level
    """
    levels: dict[str, int] = {}
    for item in (part.strip() for part in spec.split(",")):
        if not item:
            continue
        module, sep, level = item.partition("=")
        if not sep or not module.strip():
            raise PreconditionError(f"expected module=LEVEL, got {item!r}", "logger")
        levels[module.strip()] = _as_level(level)
    return levels


def setup_logger(
    level: int | str = logging.WARNING,
    module_levels: Mapping[str, int | str] | None = None,
    stream: TextIO | None = None,
    format_string: str | None = None,
) -> logging.Logger:
    """
    Configure the package root logger and per-module overrides.

    Calling it again replaces the handler, so repeated CLI runs in one
    process do not duplicate output.

    Args:
        level: Root level (name or number)
        module_levels: Levels for loggers below the root, e.g. {"selftest": "INFO"}
        stream: Output stream (default: stderr)
        format_string: Custom format string

    Returns:
        The package root logger

    Example:
        ```python
        setup_logger("WARNING", {"empirical.enumeration": "DEBUG"})
        ```
    """
    root = logging.getLogger(ROOT_LOGGER)
    root.setLevel(_as_level(level))
    root.handlers.clear()
    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setFormatter(logging.Formatter(format_string or LOG_FORMAT, datefmt="%Y-%m-%d %H:%M:%S"))
    root.addHandler(handler)
    for module, module_level in (module_levels or {}).items():
        logging.getLogger(f"{ROOT_LOGGER}.{module}").setLevel(_as_level(module_level))
    return root


def get_logger(name: str | None = None) -> logging.Logger:
    """Logger below the package root: get_logger("selftest") -> diophantine_exponents.selftest."""
    return logging.getLogger(f"{ROOT_LOGGER}.{name}" if name else ROOT_LOGGER)
