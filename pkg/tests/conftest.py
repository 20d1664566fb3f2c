"""
Pytest configuration and fixtures for gammaops tests
"""
import os
import sys

import pytest

# Add parent directory to path
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))
os.environ.setdefault('GAMMAOPS_ENV', 'testing')

from click.testing import CliRunner

from gammaops.config import TestingConfig
from gammaops.extensions import init_extensions
from gammaops.models import get_builtin
from gammaops.schemas import QuadratureConfig


@pytest.fixture(scope='session', autouse=True)
def app_config():
    """Testing configuration with logging and logfire initialised once"""
    os.environ['GAMMAOPS_ENV'] = 'testing'
    init_extensions(TestingConfig)
    return TestingConfig


@pytest.fixture(scope='session')
def quad(app_config):
    """Default quadrature settings"""
    return QuadratureConfig.from_config(app_config)


@pytest.fixture(scope='session')
def exp_neg():
    return get_builtin('exp-neg')


@pytest.fixture(scope='session')
def t_over_1pt():
    return get_builtin('t-over-1pt')


@pytest.fixture(scope='function')
def runner():
    """Create test CLI runner"""
    return CliRunner()
