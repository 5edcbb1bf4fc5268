"""
Logger integration for trajectory-grpo-kit.

This module provides integration with the host system's logging infrastructure.
It supports:
- Using host system's logger (default)
- Custom logger injection
- Environment variable configuration (TRAJ_KIT_LOGGER_NAME)
- Lazy logger initialization
"""
import os
import sys
import logging
from typing import Dict, Optional

LOGGER_NAME_ENV = "TRAJ_KIT_LOGGER_NAME"
PACKAGE_LOGGER = "trajectory_grpo_kit"


class LoggerAdapter:
    """Adapter for integrating with host system's logger.

    Priority order:
    1. Custom injected logger (via set_logger())
    2. Host system's logger (from TRAJ_KIT_LOGGER_NAME env var)
    3. Root logger (if configured by host system)
    4. Default trajectory_grpo_kit logger (with basic stderr handler)

    Examples:
        >>> logger = LoggerAdapter.get_logger(__name__)
        >>> logger.info("Pretraining started")

        >>> import logging
        >>> LoggerAdapter.set_logger(logging.getLogger("lab.experiments"))
        >>> logger = LoggerAdapter.get_logger(__name__)  # Uses lab.experiments
    """

    _custom_logger: Optional[logging.Logger] = None
    _default_loggers: Dict[str, logging.Logger] = {}
    _default_configured = False

    @classmethod
    def get_logger(cls, name: str = PACKAGE_LOGGER) -> logging.Logger:
        """Get logger instance following the priority order above.

        Args:
            name: Logger name (typically __name__)

        Returns:
            Logger instance that integrates with host system's logging
        """
        if cls._custom_logger is not None:
            return cls._custom_logger

        env_name = os.getenv(LOGGER_NAME_ENV)
        if env_name:
            return logging.getLogger(env_name)

        root_logger = logging.getLogger()
        if root_logger.handlers:
            return logging.getLogger(name)

        if name not in cls._default_loggers:
            logger = logging.getLogger(name)
            if not cls._default_configured:
                cls._configure_default()
                cls._default_configured = True
            cls._default_loggers[name] = logger

        return cls._default_loggers[name]

    @classmethod
    def set_logger(cls, logger: logging.Logger) -> None:
        """Inject custom logger from host system.

        Once set, all calls to get_logger() return this logger regardless of name.
        """
        cls._custom_logger = logger

    @classmethod
    def reset_logger(cls) -> None:
        """Reset to automatic logger detection."""
        cls._custom_logger = None

    @classmethod
    def set_level(cls, level: int) -> None:
        """Set the level of the package logger and its default handler."""
        package_logger = logging.getLogger(PACKAGE_LOGGER)
        package_logger.setLevel(level)
        for handler in package_logger.handlers:
            handler.setLevel(level)

    @classmethod
    def _configure_default(cls) -> None:
        """Configure default logging for the package.

        Only runs when no custom logger, env override or root handler exists.
        Log records go to stderr so stdout stays free for command output.
        """
        root_logger = logging.getLogger(PACKAGE_LOGGER)
        root_logger.setLevel(logging.INFO)

        if root_logger.handlers:
            return

        handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(logging.INFO)
        formatter = logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        )
        handler.setFormatter(formatter)
        root_logger.addHandler(handler)

        # Avoid duplicate records through the root logger
        root_logger.propagate = False
