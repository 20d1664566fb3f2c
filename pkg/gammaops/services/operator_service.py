"""
Numeric evaluation of M_{n,k}, its derivative form, M*_{n,k,r} and G_n.

The substitutions t = x v, u = v / (1 + v) turn the M_{n,k} integral into
E[f(x U / (1 - U))] with U ~ Beta(n-k+1, n+1); M*_{n,k,r} is the same with
U ~ Beta(n-k+r+1, n-r+1). G_n becomes E[f(n x / S)] with S ~ Gamma(n+1).
"""

import logging
import math

from scipy.special import gammaln

from gammaops.exceptions import DomainError, GrowthViolationError, ParameterConstraintError
from gammaops.models.test_function import TestFunction
from gammaops.schemas.operator import OperatorParams, QuadratureConfig, SpecialKind
from gammaops.services.moment_service import MomentService
from gammaops.utils.quadrature import beta_density, expectation, gamma_density

logger = logging.getLogger(__name__)


def _check_point(x: float) -> float:
    x = float(x)
    if not x > 0 or not math.isfinite(x):
        raise DomainError(f'operators are defined for x > 0 only, got x={x}')
    return x


def _check_growth(f: TestFunction, limit: int, operator: str) -> None:
    # bounded (alpha = 0) integrands are always admissible
    if f.growth > 0 and f.growth > limit:
        raise GrowthViolationError(
            f'{operator}: {f.name} grows like t^{f.growth:g}, the integral needs growth <= {limit}'
        )


class OperatorService:
    """Quadrature evaluation of the Gamma-type operators."""

    @staticmethod
    def kernel_log(p: OperatorParams, x: float, t: float) -> float:
        """
        log K_{n,k}(x, t).

        K_{n,k}(x,t) = (2n-k+1)! x^{n+1} / (n!(n-k)!) t^{n-k} / (x+t)^{2n-k+2},
        with the factorials taken through log-gamma so large n stays finite.

        Raises:
            DomainError: If x <= 0 or t <= 0
        """
        n, k = p.n, p.k
        x = _check_point(x)
        t = float(t)
        if not t > 0:
            raise DomainError(f'kernel is evaluated for t > 0 only, got t={t}')
        log_beta = gammaln(2 * n - k + 2) - gammaln(n + 1) - gammaln(n - k + 1)
        return float(
            log_beta
            + (n + 1) * math.log(x)
            + (n - k) * math.log(t)
            - (2 * n - k + 2) * math.log(x + t)
        )

    @staticmethod
    def apply(p: OperatorParams, f: TestFunction, x: float, q: QuadratureConfig) -> float:
        """
        M_{n,k}(f; x).

        Args:
            p: Operator parameters (r is ignored)
            f: Integrand
            x: Evaluation point, x > 0
            q: Quadrature configuration

        Returns:
            The converged quadrature estimate

        Raises:
            DomainError: If x <= 0
            GrowthViolationError: If the declared growth of f exceeds n - k - 1
            QuadratureError: If the node budget is spent before convergence
        """
        x = _check_point(x)
        _check_growth(f, p.n - p.k - 1, f'M_({p.n},{p.k})')
        density = beta_density(p.n - p.k + 1, p.n + 1)

        def integrand(u):
            return f(x * u / (1.0 - u))

        value = expectation(density, integrand, q)
        logger.debug(f'M_({p.n},{p.k})({f.name}; {x:g}) = {value!r}')
        return value

    @staticmethod
    def apply_mstar(n: int, k: int, r: int, g: TestFunction, x: float, q: QuadratureConfig) -> float:
        """
        M*_{n,k,r}(g; x) = E[g(x U / (1 - U))], U ~ Beta(n-k+r+1, n-r+1).

        Raises:
            GrowthViolationError: If the declared growth of g exceeds n - r - 1
        """
        OperatorParams.checked(n, k, r)
        x = _check_point(x)
        _check_growth(g, n - r - 1, f'M*_({n},{k},{r})')
        density = beta_density(n - k + r + 1, n - r + 1)

        def integrand(u):
            return g(x * u / (1.0 - u))

        return expectation(density, integrand, q)

    @staticmethod
    def apply_derivative(p: OperatorParams, f: TestFunction, x: float, q: QuadratureConfig) -> float:
        """
        M^(r)_{n,k}(f; x) = b(n,k,r) M*_{n,k,r}(f^(r); x).

        With r = 0 this is apply itself.

        Raises:
            MissingDerivativeError: If f does not carry f^(r)
        """
        if p.r == 0:
            return OperatorService.apply(p, f, x, q)
        derivative = f.derivative(p.r)
        normalizer = float(MomentService.b_norm(p.n, p.k, p.r))
        return normalizer * OperatorService.apply_mstar(p.n, p.k, p.r, derivative, x, q)

    @staticmethod
    def apply_mstar_bar(n: int, k: int, r: int, g: TestFunction, x: float, q: QuadratureConfig) -> float:
        """
        Auxiliary operator M*(g;x) - g(x + (2r-k+1)x/(n-r)) + g(x).

        Reproduces affine functions exactly.
        """
        x = _check_point(x)
        shift = x + float(MomentService.drift(n, k, r)) * x
        if not shift > 0:
            raise DomainError(f'shifted point x(1 + drift) = {shift:g} is not positive')
        mstar = OperatorService.apply_mstar(n, k, r, g, x, q)
        return mstar - float(g(shift)) + float(g(x))

    @staticmethod
    def apply_gn(n: int, f: TestFunction, x: float, q: QuadratureConfig) -> float:
        """
        G_n(f; x) = E[f(n x / S)], S ~ Gamma(n+1).

        Raises:
            ParameterConstraintError: If n < 1
            GrowthViolationError: If the declared growth of f exceeds n - 1
        """
        if n < 1:
            raise ParameterConstraintError(f'G_n needs n >= 1, got {n}')
        x = _check_point(x)
        _check_growth(f, n - 1, f'G_{n}')
        density = gamma_density(n + 1)
        scale = n * x

        def integrand(s):
            return f(scale / s)

        return expectation(density, integrand, q)

    @staticmethod
    def make_special(kind: SpecialKind, n: int) -> OperatorParams:
        """F_n is M_{n,1}; L_n is M_{n+2,2}."""
        kind = SpecialKind(kind)
        if kind == SpecialKind.F:
            return OperatorParams.checked(n, 1, 0)
        return OperatorParams.checked(n + 2, 2, 0)

    @staticmethod
    def apply_special(kind: SpecialKind, n: int, f: TestFunction, x: float, q: QuadratureConfig) -> float:
        """F_n(f; x) or L_n(f; x)."""
        return OperatorService.apply(OperatorService.make_special(kind, n), f, x, q)

