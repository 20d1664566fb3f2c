"""
Exact moment computation.

Every moment of M_{n,k}, M*_{n,k,r} and G_n is a rational multiple of x^m;
this service returns that rational coefficient exactly. The binomial-sum
central moments are the oracle the published closed forms are audited
against.
"""

import logging
from fractions import Fraction
from math import comb, factorial
from typing import Iterable, Sequence, Union

from gammaops.exceptions import MomentUndefinedError, ParameterConstraintError
from gammaops.schemas.operator import OperatorParams
from gammaops.schemas.reports import ClosedFormAudit, ClosedFormComparison

logger = logging.getLogger(__name__)

Rational = Union[int, Fraction]
ExactCoefficient = Fraction


def _check_order(m: int, limit: int, what: str) -> None:
    if m < 0:
        raise MomentUndefinedError(f'moment order must be non-negative, got {m}')
    if m > limit:
        raise MomentUndefinedError(f'{what} of order {m} is undefined: order limit is {limit}')


class MomentService:
    """Exact rational moments of the Gamma-type operators."""

    @staticmethod
    def falling_factorial(x: Rational, m: int) -> Fraction:
        """[x]_m = x (x-1) ... (x-m+1), with [x]_0 = 1."""
        if m < 0:
            raise ValueError(f'falling factorial order must be non-negative, got {m}')
        result = Fraction(1)
        x = Fraction(x)
        for i in range(m):
            result *= x - i
        return result

    @staticmethod
    def beta_n(n: int, k: int) -> Fraction:
        """Kernel constant (2n-k+1)! / (n! (n-k)!)."""
        OperatorParams.checked(n, k)
        return Fraction(factorial(2 * n - k + 1), factorial(n) * factorial(n - k))

    @staticmethod
    def raw_moment(n: int, k: int, m: int) -> Fraction:
        """
        Coefficient of x^m in M_{n,k}(t^m; x) = [n-k+m]_m / [n]_m x^m.

        Raises:
            ParameterConstraintError: If (n, k) is invalid
            MomentUndefinedError: If m > n - k
        """
        OperatorParams.checked(n, k)
        _check_order(m, n - k, 'raw moment')
        return MomentService.falling_factorial(n - k + m, m) / MomentService.falling_factorial(n, m)

    @staticmethod
    def central_moment(n: int, k: int, m: int) -> Fraction:
        """Coefficient of x^m in M_{n,k}((t-x)^m; x), via the binomial expansion."""
        OperatorParams.checked(n, k)
        _check_order(m, n - k, 'central moment')
        return sum(
            ((-1) ** j * comb(m, j) * MomentService.raw_moment(n, k, m - j) for j in range(m + 1)),
            Fraction(0),
        )

    @staticmethod
    def b_norm(n: int, k: int, r: int) -> Fraction:
        """Normalizer b(n,k,r) = (n-r)! (n-k+r)! / (n! (n-k)!)."""
        OperatorParams.checked(n, k, r)
        return Fraction(
            factorial(n - r) * factorial(n - k + r),
            factorial(n) * factorial(n - k),
        )

    @staticmethod
    def mstar_raw_moment(n: int, k: int, r: int, m: int) -> Fraction:
        """
        Coefficient of x^m in M*_{n,k,r}(e_m; x).

        Equals (n-r-m)! (n-k+r+m)! / ((n-r)! (n-k+r)!).

        Raises:
            MomentUndefinedError: If m > n - r
        """
        OperatorParams.checked(n, k, r)
        _check_order(m, n - r, 'M* raw moment')
        return MomentService.falling_factorial(n - k + r + m, m) / MomentService.falling_factorial(n - r, m)

    @staticmethod
    def mstar_central_moment(n: int, k: int, r: int, m: int) -> Fraction:
        """Coefficient of x^m in M*_{n,k,r}((t-x)^m; x); the oracle for the closed forms."""
        OperatorParams.checked(n, k, r)
        _check_order(m, n - r, 'M* central moment')
        return sum(
            ((-1) ** j * comb(m, j) * MomentService.mstar_raw_moment(n, k, r, m - j) for j in range(m + 1)),
            Fraction(0),
        )

    @staticmethod
    def c_poly(n: int, k: int, r: int) -> int:
        """Published numerator of the third central moment, as printed."""
        return (
            8 * r ** 3
            + r ** 2 * (36 - 2 * k)
            + r * (51 + 14 * n - 42 * k + 6 * k ** 2)
            - k ** 3 + 12 * k ** 2 - 34 * k
            - n ** 2
            + n * (17 - 6 * k - 6 * k ** 2 + 2 * k * r)
            + 21
        )

    @staticmethod
    def d_poly(n: int, k: int, r: int) -> int:
        """Published numerator of the fourth central moment, as printed."""
        return (
            16 * r ** 4
            + r ** 3 * (128 - 32 * k)
            + r ** 2 * (348 + 48 * n - 216 * k + 24 * k ** 2)
            + r * (366 + 177 * n + k * (6 * n ** 2 - 54 * n - 440) + 120 * k ** 2 - 8 * k ** 3)
            + k ** 4
            + k ** 3 * (4 * n - 22)
            + 139 * k ** 2
            - k * (245 + 116 * n)
            + 24 * n ** 2
            + 131 * n
            + 100
        )

    @staticmethod
    def drift(n: int, k: int, r: int) -> Fraction:
        """(2r-k+1)/(n-r): first central moment coefficient of M*."""
        OperatorParams.checked(n, k, r)
        if n - r < 1:
            raise ParameterConstraintError(f'drift needs n - r >= 1, got n={n}, r={r}')
        return Fraction(2 * r - k + 1, n - r)

    @staticmethod
    def delta_n(n: int, k: int, r: int) -> Fraction:
        """(4r^2 + 4r(2-k) + 2n + k^2 - 5k + 4) / ((n-r)(n-r-1)): coefficient of x^2."""
        OperatorParams.checked(n, k, r)
        if n - r < 2:
            raise ParameterConstraintError(f'delta_n needs n - r >= 2, got n={n}, r={r}')
        return Fraction(
            4 * r ** 2 + 4 * r * (2 - k) + 2 * n + k ** 2 - 5 * k + 4,
            (n - r) * (n - r - 1),
        )

    @staticmethod
    def closed_form_mstar_central(n: int, k: int, r: int, m: int) -> Fraction:
        """
        Published closed forms for M*((t-x)^m; x), m = 0..4, evaluated verbatim.

        Disagreement with mstar_central_moment is a finding, never patched here.

        Raises:
            ParameterConstraintError: If m is not in 0..4 or n - r < m
        """
        OperatorParams.checked(n, k, r)
        if m not in range(5):
            raise ParameterConstraintError(f'closed forms exist for m = 0..4 only, got {m}')
        if n - r < m:
            raise ParameterConstraintError(f'closed form of order {m} needs n - r >= {m}, got {n - r}')

        d = n - r
        if m == 0:
            return Fraction(1)
        if m == 1:
            return Fraction(2 * r - k + 1, d)
        if m == 2:
            return MomentService.delta_n(n, k, r)
        if m == 3:
            return Fraction(MomentService.c_poly(n, k, r), d * (d - 1) * (d - 2))
        return Fraction(MomentService.d_poly(n, k, r), d * (d - 1) * (d - 2) * (d - 3))

    @staticmethod
    def gn_raw_moment(n: int, m: int) -> Fraction:
        """Coefficient of x^m in G_n(t^m; x) = n^m (n-m)! / n!."""
        if n < 1:
            raise ParameterConstraintError(f'G_n needs n >= 1, got {n}')
        _check_order(m, n, 'G_n raw moment')
        return Fraction(n ** m) / MomentService.falling_factorial(n, m)

    @staticmethod
    def polynomial_moment(
        coefficients: Sequence[Rational],
        n: int,
        k: int,
        r: int,
        x: Rational,
    ) -> Fraction:
        """
        Exact M*_{n,k,r}(sum_j a_j t^j; x) at a rational x.

        With r = 0 this is M_{n,k} itself.
        """
        x = Fraction(x)
        total = Fraction(0)
        for j, a in enumerate(coefficients):
            a = Fraction(a)
            if a == 0:
                continue
            total += a * MomentService.mstar_raw_moment(n, k, r, j) * x ** j
        return total

    @staticmethod
    def audit_closed_forms(
        n_values: Iterable[int],
        k_values: Iterable[int],
        r_values: Iterable[int],
        orders: Iterable[int] = range(5),
    ) -> ClosedFormAudit:
        """
        Compare every closed form with the binomial-sum oracle over a grid.

        Combinations violating k <= n, r <= n or m <= n - r are skipped.
        Each mismatch is logged with the offending (n, k, r, m) and the oracle value.
        """
        orders = list(orders)
        comparisons = []
        for n in n_values:
            for k in k_values:
                for r in r_values:
                    if k > n or r > n:
                        continue
                    for m in orders:
                        if m > n - r:
                            continue
                        comparison = ClosedFormComparison(
                            n=n, k=k, r=r, m=m,
                            closed_form=MomentService.closed_form_mstar_central(n, k, r, m),
                            oracle=MomentService.mstar_central_moment(n, k, r, m),
                        )
                        if not comparison.match:
                            logger.warning(
                                f'Closed form mismatch at n={n}, k={k}, r={r}, m={m}: '
                                f'published={comparison.closed_form}, oracle={comparison.oracle}'
                            )
                        comparisons.append(comparison)

        audit = ClosedFormAudit(comparisons=comparisons)
        for m in audit.orders:
            logger.info(f'Closed form audit, order {m}: match rate {audit.match_rate(m):.3f}')
        return audit
