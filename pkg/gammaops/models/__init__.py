"""
Domain models package.

- test_function: the TestFunction bundle and the polynomial factory
- builtins: the builtin function suite addressed by id from the CLI
"""

from gammaops.models.test_function import TestFunction, polynomial
from gammaops.models.builtins import builtin_ids, get_builtin

__all__ = [
    'TestFunction',
    'polynomial',
    'builtin_ids',
    'get_builtin',
]
