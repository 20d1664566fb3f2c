"""
Builtin TestFunction suite.

Covers bounded, decaying and polynomially growing hypotheses:
- one, t, t2, t3, t4: monomials
- exp-neg: e^{-t}
- recip-1pt: 1/(1+t)
- t-over-1pt: t/(1+t)
- sin-exp-neg: sin(t) e^{-t} (grid-only moduli)

Completely monotone functions g (and their derivatives up to sign) attain
both moduli at x = 0, h = delta:
    omega(g, d) = |g(0) - g(d)|,   omega_2(g, d) = |g(0) - 2 g(d) + g(2d)|.
"""

import math
from functools import lru_cache
from typing import Callable, Dict, List

import numpy as np

from gammaops.exceptions import UnknownFunctionError
from gammaops.models.test_function import TestFunction, polynomial

MAX_ORDER = 6


def _completely_monotone_moduli(g: Callable[[float], float]):
    """Closed-form (omega, omega_2) for a completely monotone g, up to sign."""
    g0 = g(0.0)

    def omega1(delta):
        return abs(g0 - g(delta))

    def omega2(delta):
        return abs(g0 - 2.0 * g(delta) + g(2.0 * delta))

    return omega1, omega2


def _exp_neg() -> TestFunction:
    def signed(j):
        sign = -1.0 if j % 2 else 1.0
        return lambda t: sign * np.exp(-np.asarray(t, dtype=float))

    moduli = _completely_monotone_moduli(lambda s: math.exp(-s))
    return TestFunction(
        name='exp-neg',
        eval=signed(0),
        derivatives=tuple(signed(j) for j in range(1, MAX_ORDER + 1)),
        growth=0.0,
        bounded=True,
        sup_bound=1.0,
        analytic_omega1=moduli[0],
        analytic_omega2=moduli[1],
        derivative_moduli=tuple(moduli for _ in range(MAX_ORDER)),
        derivative_sup_bounds=tuple(1.0 for _ in range(MAX_ORDER)),
    )


def _recip_derivative(j: int):
    """d^j/dt^j 1/(1+t) = (-1)^j j! / (1+t)^(j+1)."""
    scale = (-1.0) ** j * math.factorial(j)
    return lambda t: scale / (1.0 + np.asarray(t, dtype=float)) ** (j + 1)


def _recip_moduli(j: int):
    factorial = math.factorial(j)
    return _completely_monotone_moduli(lambda s: factorial / (1.0 + s) ** (j + 1))


def _recip_1pt() -> TestFunction:
    return TestFunction(
        name='recip-1pt',
        eval=_recip_derivative(0),
        derivatives=tuple(_recip_derivative(j) for j in range(1, MAX_ORDER + 1)),
        growth=0.0,
        bounded=True,
        sup_bound=1.0,
        analytic_omega1=_recip_moduli(0)[0],
        analytic_omega2=_recip_moduli(0)[1],
        derivative_moduli=tuple(_recip_moduli(j) for j in range(1, MAX_ORDER + 1)),
        derivative_sup_bounds=tuple(float(math.factorial(j)) for j in range(1, MAX_ORDER + 1)),
    )


def _t_over_1pt() -> TestFunction:
    # t/(1+t) = 1 - 1/(1+t)
    def negated(j):
        inner = _recip_derivative(j)
        return lambda t: -inner(t)

    return TestFunction(
        name='t-over-1pt',
        eval=lambda t: np.asarray(t, dtype=float) / (1.0 + np.asarray(t, dtype=float)),
        derivatives=tuple(negated(j) for j in range(1, MAX_ORDER + 1)),
        growth=0.0,
        bounded=True,
        sup_bound=1.0,
        analytic_omega1=_recip_moduli(0)[0],
        analytic_omega2=_recip_moduli(0)[1],
        derivative_moduli=tuple(_recip_moduli(j) for j in range(1, MAX_ORDER + 1)),
        derivative_sup_bounds=tuple(float(math.factorial(j)) for j in range(1, MAX_ORDER + 1)),
    )


def _sin_exp_neg() -> TestFunction:
    # d^j/dt^j e^{-t} sin t = 2^{j/2} e^{-t} sin(t + 3 pi j / 4)
    def nth(j):
        scale = 2.0 ** (j / 2.0)
        phase = 3.0 * math.pi * j / 4.0
        return lambda t: scale * np.exp(-np.asarray(t, dtype=float)) * np.sin(np.asarray(t, dtype=float) + phase)

    return TestFunction(
        name='sin-exp-neg',
        eval=nth(0),
        derivatives=tuple(nth(j) for j in range(1, MAX_ORDER + 1)),
        growth=0.0,
        bounded=True,
        sup_bound=1.0,
        derivative_sup_bounds=tuple(2.0 ** (j / 2.0) for j in range(1, MAX_ORDER + 1)),
    )


def _monomial(m: int, name: str) -> TestFunction:
    coefficients = [0.0] * m + [1.0]
    return polynomial(coefficients, name=name)


_FACTORIES: Dict[str, Callable[[], TestFunction]] = {
    'one': lambda: _monomial(0, 'one'),
    't': lambda: _monomial(1, 't'),
    't2': lambda: _monomial(2, 't2'),
    't3': lambda: _monomial(3, 't3'),
    't4': lambda: _monomial(4, 't4'),
    'exp-neg': _exp_neg,
    'recip-1pt': _recip_1pt,
    't-over-1pt': _t_over_1pt,
    'sin-exp-neg': _sin_exp_neg,
}


def builtin_ids() -> List[str]:
    """Ids of every builtin TestFunction, sorted."""
    return sorted(_FACTORIES)


def get_builtin(function_id: str) -> TestFunction:
    """
    Look up a builtin TestFunction.

    Raises:
        UnknownFunctionError: If the id is not a builtin
    """
    if function_id not in _FACTORIES:
        raise UnknownFunctionError(
            f"Unknown function '{function_id}'. Available: {', '.join(builtin_ids())}"
        )
    return _build(function_id)


@lru_cache(maxsize=None)
def _build(function_id: str) -> TestFunction:
    return _FACTORIES[function_id]()
