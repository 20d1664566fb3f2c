"""
gammaops: generalized Gamma-type operators M_{n,k}.

Exact rational moments, quadrature evaluation, moduli of continuity and
empirical verification of the Voronovskaja limit and the modulus error
bounds, with an experiment CLI on top.
"""

__version__ = "0.1.0"

from gammaops.config import get_config, create_directories
from gammaops.extensions import init_extensions

__all__ = [
    '__version__',
    'get_config',
    'create_directories',
    'init_extensions',
]
