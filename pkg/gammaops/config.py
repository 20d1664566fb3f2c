"""
Configuration module.

Settings are read from the environment (a local .env file is honoured) and
grouped per environment: development, testing, production.

Usage:
    from gammaops.config import get_config

    config = get_config()
    config.validate_config()
"""

import os
from dotenv import load_dotenv

load_dotenv()


def _env_float(name, default):
    value = os.getenv(name)
    return float(value) if value not in (None, '') else default


def _env_int(name, default):
    value = os.getenv(name)
    return int(value) if value not in (None, '') else default


class Config:
    """Base configuration shared by every environment."""

    ENV_NAME = 'base'
    DEBUG = False
    TESTING = False

    # Output
    OUTPUT_DIR = os.getenv('GAMMAOPS_OUTPUT_DIR', os.path.join(os.getcwd(), 'results'))

    # Logging / monitoring
    LOG_LEVEL = os.getenv('GAMMAOPS_LOG_LEVEL', 'WARNING')
    LOGFIRE_TOKEN = os.getenv('LOGFIRE_TOKEN')
    SERVICE_NAME = 'gammaops'

    # Quadrature defaults
    QUADRATURE_NODE_BUDGET = _env_int('GAMMAOPS_NODE_BUDGET', 8192)
    QUADRATURE_REL_TOL = _env_float('GAMMAOPS_REL_TOL', 1e-12)
    QUADRATURE_ABS_TOL = _env_float('GAMMAOPS_ABS_TOL', 1e-13)
    QUADRATURE_ORDER = 20
    TRUNCATION_LOG_DROP = 60.0

    # Modulus grids
    MODULUS_DOMAIN_CAP = 20.0
    MODULUS_GRID_POINTS = 4001
    MODULUS_H_POINTS = 512
    SMOOTHING_SCALES = (0.02, 0.05, 0.1, 0.2, 0.5)

    # Verification
    REFERENCE_C = 4.0
    MARGIN_FACTOR = 10.0
    VORONOVSKAJA_TOLERANCE = 2e-3

    @classmethod
    def validate_config(cls):
        """
        Check settings for internal consistency.

        Raises:
            ValueError: If a setting is out of range
        """
        if cls.QUADRATURE_NODE_BUDGET < 15:
            raise ValueError('QUADRATURE_NODE_BUDGET must be at least 15')
        if cls.QUADRATURE_REL_TOL <= 0 or cls.QUADRATURE_ABS_TOL <= 0:
            raise ValueError('Quadrature tolerances must be positive')
        if cls.MODULUS_DOMAIN_CAP <= 0:
            raise ValueError('MODULUS_DOMAIN_CAP must be positive')
        if min(cls.SMOOTHING_SCALES) <= 0:
            raise ValueError('SMOOTHING_SCALES must be positive')
        return True


class DevelopmentConfig(Config):
    """Development configuration: verbose logging."""
    ENV_NAME = 'development'
    DEBUG = True
    LOG_LEVEL = os.getenv('GAMMAOPS_LOG_LEVEL', 'INFO')


class TestingConfig(Config):
    """Testing configuration: coarser modulus grids, no remote logging."""
    __test__ = False

    ENV_NAME = 'testing'
    TESTING = True
    LOGFIRE_TOKEN = None
    MODULUS_GRID_POINTS = 801
    MODULUS_H_POINTS = 128


class ProductionConfig(Config):
    """Production configuration."""
    ENV_NAME = 'production'


config_by_name = {
    'development': DevelopmentConfig,
    'testing': TestingConfig,
    'production': ProductionConfig,
}


def get_config(config_name=None):
    """
    Get the configuration class for an environment.

    Args:
        config_name: 'development', 'testing' or 'production'.
                     If None, uses the GAMMAOPS_ENV environment variable.

    Returns:
        Configuration class
    """
    if config_name is None:
        config_name = os.getenv('GAMMAOPS_ENV', 'production')
    return config_by_name.get(config_name, ProductionConfig)


def create_directories(config):
    """Create the output directory if it does not exist."""
    os.makedirs(config.OUTPUT_DIR, exist_ok=True)
    return config.OUTPUT_DIR
