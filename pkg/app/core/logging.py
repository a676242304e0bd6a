"""
Logging configuration for the lab.

This module contains all logging setup including formatters, handlers,
and logger configuration shared by the services and the CLI.
"""
import logging
import logging.handlers
import sys
from typing import Dict, Any
from app.core.settings import settings


def get_log_format(include_colors: bool = False) -> str:
    """
    Get the appropriate log format string.

    Args:
        include_colors: Whether to include color codes for console output

    Returns:
        str: Log format string
    """
    if include_colors and settings.DEBUG:
        return (
            "\033[90m%(asctime)s\033[0m - "
            "\033[36m%(name)s\033[0m - "
            "%(levelname_color)s%(levelname)s\033[0m - "
            "%(message)s"
        )
    return "%(asctime)s - %(name)s - %(levelname)s - %(message)s"


class ColoredFormatter(logging.Formatter):
    """Formatter that adds colors to log levels."""

    COLORS = {
        'DEBUG': '\033[94m',    # Blue
        'INFO': '\033[92m',     # Green
        'WARNING': '\033[93m',  # Yellow
        'ERROR': '\033[91m',    # Red
        'CRITICAL': '\033[95m',  # Magenta
    }

    def format(self, record):
        record.levelname_color = self.COLORS.get(record.levelname, '')
        return super().format(record)


def setup_console_handler() -> logging.Handler:
    """
    Setup console handler with appropriate formatting.

    Logs go to stderr so that report tables on stdout stay clean.

    Returns:
        logging.Handler: Configured console handler
    """
    console_handler = logging.StreamHandler(sys.stderr)

    if settings.DEBUG:
        formatter = ColoredFormatter(get_log_format(include_colors=True))
    else:
        formatter = logging.Formatter(get_log_format(include_colors=False))

    console_handler.setFormatter(formatter)
    return console_handler


def _log_file_stem() -> str:
    return settings.APP_NAME.lower().replace(' ', '_')


def setup_file_handler() -> logging.Handler:
    """
    Setup rotating file handler for persistent logging.

    Returns:
        logging.Handler: Configured file handler
    """
    settings.LOG_DIR.mkdir(parents=True, exist_ok=True)
    file_handler = logging.handlers.RotatingFileHandler(
        filename=settings.LOG_DIR / f"{_log_file_stem()}.log",
        maxBytes=settings.LOG_FILE_MAX_SIZE,
        backupCount=settings.LOG_FILE_BACKUP_COUNT,
        encoding='utf-8'
    )

    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s"
    )
    file_handler.setFormatter(formatter)
    return file_handler


def setup_error_file_handler() -> logging.Handler:
    """
    Setup separate file handler for failed checks and errors.

    Returns:
        logging.Handler: Configured error file handler
    """
    settings.LOG_DIR.mkdir(parents=True, exist_ok=True)
    error_handler = logging.handlers.RotatingFileHandler(
        filename=settings.LOG_DIR / f"{_log_file_stem()}_errors.log",
        maxBytes=settings.LOG_FILE_MAX_SIZE,
        backupCount=settings.LOG_FILE_BACKUP_COUNT,
        encoding='utf-8'
    )

    error_handler.setLevel(logging.ERROR)
    formatter = logging.Formatter(
        "%(asctime)s - %(name)s - %(levelname)s - %(funcName)s:%(lineno)d - %(message)s\n"
        "Exception: %(exc_info)s\n" + "-" * 80
    )
    error_handler.setFormatter(formatter)
    return error_handler


def configure_third_party_loggers() -> None:
    """Configure logging levels for the numeric libraries."""
    for name in ("numpy", "scipy", "sympy", "mpmath", "matplotlib", "asyncio"):
        logging.getLogger(name).setLevel(logging.WARNING)


def setup_logging(level: str | None = None) -> logging.Logger:
    """
    Configure lab logging with handlers and formatters.

    Args:
        level: Optional override of settings.LOG_LEVEL

    Returns:
        logging.Logger: Configured lab logger
    """
    root_logger = logging.getLogger()
    root_logger.handlers.clear()

    log_level_name = (level or settings.LOG_LEVEL).upper()
    root_logger.setLevel(getattr(logging, log_level_name, logging.INFO))

    handlers = [setup_console_handler()]
    if settings.ENABLE_FILE_LOGGING:
        handlers.append(setup_file_handler())
        handlers.append(setup_error_file_handler())

    for handler in handlers:
        root_logger.addHandler(handler)

    configure_third_party_loggers()

    app_logger = logging.getLogger(__name__)
    app_logger.debug("=" * 60)
    app_logger.debug("Logging Configuration Summary")
    app_logger.debug(f"Log Level: {log_level_name}")
    app_logger.debug(f"Environment: {settings.ENVIRONMENT}")
    app_logger.debug(f"Debug Mode: {settings.DEBUG}")
    app_logger.debug(f"Handlers: {len(handlers)} configured")
    if settings.ENABLE_FILE_LOGGING:
        app_logger.debug(f"Log Directory: {settings.LOG_DIR.absolute()}")
        app_logger.debug(f"Max File Size: {settings.LOG_FILE_MAX_SIZE // (1024*1024)}MB")
        app_logger.debug(f"Backup Count: {settings.LOG_FILE_BACKUP_COUNT}")
    app_logger.debug("=" * 60)

    return app_logger


def get_logger(name: str) -> logging.Logger:
    """
    Get a logger instance with the specified name.

    Args:
        name: Logger name (usually __name__)

    Returns:
        logging.Logger: Configured logger instance
    """
    return logging.getLogger(name)


# Per-package levels applied by the CLI when --verbose is not given
LOGGER_CONFIG: Dict[str, Dict[str, Any]] = {
    'app.lattice': {
        'level': 'INFO',
        'propagate': True,
    },
    'app.enumeration': {
        'level': 'WARNING',
        'propagate': True,
    },
    'app.bounds': {
        'level': 'INFO',
        'propagate': True,
    },
    'app.theta': {
        'level': 'INFO',
        'propagate': True,
    },
}


def apply_logger_config(config: Dict[str, Dict[str, Any]] = LOGGER_CONFIG) -> None:
    """Apply the per-package levels of LOGGER_CONFIG."""
    for name, options in config.items():
        package_logger = logging.getLogger(name)
        package_logger.setLevel(getattr(logging, options['level']))
        package_logger.propagate = options['propagate']
