"""
Property Tests

Randomised checks of positivity, order preservation and polynomial exactness
"""
from fractions import Fraction

from hypothesis import given, seed, settings
from hypothesis import strategies as st

from gammaops.models import get_builtin, polynomial
from gammaops.schemas import OperatorParams, QuadratureConfig
from gammaops.services import MomentService, OperatorService

QUAD = QuadratureConfig()
POINTS = st.floats(min_value=0.05, max_value=20.0, allow_nan=False, allow_infinity=False)


@st.composite
def operator_params(draw, max_n=200, max_r=0):
    n = draw(st.integers(min_value=max(2, max_r + 5), max_value=max_n))
    k = draw(st.integers(min_value=1, max_value=n))
    r = draw(st.integers(min_value=0, max_value=max_r))
    return OperatorParams(n=n, k=k, r=r)


@seed(1)
@settings(max_examples=25, deadline=None)
@given(p=operator_params(), x=POINTS)
def test_positive_functions_have_positive_images(p, x):
    for function_id in ('exp-neg', 't-over-1pt', 'recip-1pt'):
        assert OperatorService.apply(p, get_builtin(function_id), x, QUAD) >= 0.0


@seed(2)
@settings(max_examples=25, deadline=None)
@given(p=operator_params(), x=POINTS)
def test_order_preserving(p, x):
    """0 <= t/(1+t) <= 1 gives 0 <= M(t/(1+t)) <= M(1) = 1"""
    value = OperatorService.apply(p, get_builtin('t-over-1pt'), x, QUAD)
    assert 0.0 <= value <= 1.0 + 1e-12


@seed(3)
@settings(max_examples=25, deadline=None)
@given(
    p=operator_params(max_n=120, max_r=3),
    x=POINTS,
    coefficients=st.lists(st.integers(min_value=0, max_value=9), min_size=1, max_size=4),
)
def test_mstar_is_exact_on_polynomials(p, x, coefficients):
    value = OperatorService.apply_mstar(p.n, p.k, p.r, polynomial(coefficients), x, QUAD)
    exact = float(MomentService.polynomial_moment(coefficients, p.n, p.k, p.r, Fraction(x)))
    assert abs(value - exact) <= 1e-9 * max(abs(exact), 1.0)


@seed(4)
@given(n=st.integers(min_value=3, max_value=400), k=st.integers(min_value=1, max_value=400), r=st.integers(min_value=0, max_value=10))
def test_second_central_moment_is_positive(n, k, r):
    k = min(k, n)
    r = min(r, n - 2)
    assert MomentService.mstar_central_moment(n, k, r, 2) > 0
    assert MomentService.delta_n(n, k, r) == MomentService.mstar_central_moment(n, k, r, 2)


@seed(5)
@given(
    x=st.fractions(min_value=-10, max_value=10, max_denominator=50),
    m=st.integers(min_value=0, max_value=8),
)
def test_falling_factorial_recurrence(x, m):
    assert MomentService.falling_factorial(x, m + 1) == MomentService.falling_factorial(x, m) * (x - m)
