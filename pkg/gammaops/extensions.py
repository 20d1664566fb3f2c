"""
Logging and monitoring initialization.

Standard-library logging is used for module loggers; logfire receives spans
from the verification workflows when a token is present.
"""

import logging
import sys

import logfire

logger = logging.getLogger(__name__)

_logfire_configured = False


def init_extensions(config, log_level=None):
    """
    Initialize logging and logfire for a configuration.

    Safe to call more than once; logfire is configured only the first time.

    Args:
        config: Configuration class from gammaops.config
        log_level: Optional override of config.LOG_LEVEL

    Returns:
        The configuration that was applied
    """
    configure_logging(log_level or config.LOG_LEVEL)
    configure_logfire(config)
    return config


def configure_logging(log_level='WARNING'):
    """
    Configure the package logger.

    Args:
        log_level: Logging level name (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    """
    level = getattr(logging, str(log_level).upper(), logging.WARNING)
    package_logger = logging.getLogger('gammaops')
    package_logger.setLevel(level)

    # Only add handler if not already present
    if not package_logger.handlers:
        handler = logging.StreamHandler(sys.stderr)
        handler.setLevel(level)
        handler.setFormatter(logging.Formatter(
            '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
            datefmt='%Y-%m-%d %H:%M:%S'
        ))
        package_logger.addHandler(handler)
    else:
        for handler in package_logger.handlers:
            handler.setLevel(level)


def configure_logfire(config):
    """Configure logfire; data is only sent when LOGFIRE_TOKEN is set."""
    global _logfire_configured
    if _logfire_configured:
        return

    try:
        logfire.configure(
            token=config.LOGFIRE_TOKEN,
            send_to_logfire='if-token-present',
            service_name=config.SERVICE_NAME,
            console=False,
        )
        _logfire_configured = True
        if config.LOGFIRE_TOKEN:
            logger.info("✅ Logfire configured")
        else:
            logger.debug("LOGFIRE_TOKEN not set - spans stay local")

        # Suppress OpenTelemetry context errors
        logging.getLogger('opentelemetry.context').setLevel(logging.CRITICAL)
    except Exception as e:
        logger.error(f"❌ Logfire configuration error: {e}")
