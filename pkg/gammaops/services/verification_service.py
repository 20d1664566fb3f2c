"""
Empirical verification workflows.

Each workflow produces a pydantic report holding every number that went
into its verdict:
- Voronovskaja limit: scaled deviations n (M*(f^(r)) - f^(r)(x)) along a
  doubling ladder, extrapolated and compared with
  (2r-k+1) x f^(r+1)(x) + x^2 f^(r+2)(x)
- first-modulus bound: |M*(f^(r)) - f^(r)(x)| <= 2 omega(f^(r), sqrt(delta_n x^2)) (asserted)
- second-modulus bound: C omega_2(f^(r), gamma_n) + omega(f^(r), |2r-k+1| x/(n-r)),
  reported as an empirical constant, never asserted
- moment order: n^floor((m+1)/2) |central moment| stays bounded along a ladder
"""

import logging
import math
from fractions import Fraction
from typing import Iterable, List, Optional, Sequence

import logfire

from gammaops.config import get_config
from gammaops.exceptions import (
    LadderShapeError,
    MissingModulusError,
    ParameterConstraintError,
)
from gammaops.models.builtins import get_builtin
from gammaops.models.test_function import TestFunction
from gammaops.schemas.operator import OperatorParams, QuadratureConfig
from gammaops.schemas.reports import (
    BoundReport,
    ExactVoronovskajaReport,
    OrderReport,
    VoronovskajaReport,
)
from gammaops.services.moment_service import MomentService
from gammaops.services.moduli_service import ModuliService
from gammaops.services.operator_service import OperatorService
from gammaops.utils.extrapolation import check_doubling_ladder, richardson_extrapolate, two_point

logger = logging.getLogger(__name__)

FIRST_MODULUS = 'first-modulus'
SECOND_MODULUS = 'second-modulus'
THEOREMS = (FIRST_MODULUS, SECOND_MODULUS)

# rungs must leave every M* denominator up to order 4 positive
LADDER_OFFSET = 5


def _check_ladder(n_values: Sequence[int], k: int, r: int) -> List[int]:
    n_values = [int(n) for n in n_values]
    check_doubling_ladder(n_values)
    for n in n_values:
        if n < r + LADDER_OFFSET or n < k:
            raise LadderShapeError(f'ladder rung n={n} needs n >= r + {LADDER_OFFSET} = {r + LADDER_OFFSET} and n >= k = {k}')
    return n_values


def _margin(q: QuadratureConfig) -> float:
    return get_config().MARGIN_FACTOR * q.abs_tolerance


def _poly_derivative(coefficients: Sequence[Fraction], j: int) -> List[Fraction]:
    """Coefficients of the j-th derivative of sum_i a_i t^i."""
    return [
        a * MomentService.falling_factorial(i, j)
        for i, a in enumerate(coefficients)
        if i >= j
    ]


def _poly_eval(coefficients: Sequence[Fraction], x: Fraction) -> Fraction:
    total = Fraction(0)
    for a in reversed(coefficients):
        total = total * x + a
    return total


class VerificationService:
    """Voronovskaja, error-bound and moment-order checks."""

    @staticmethod
    def voronovskaja_target(f: TestFunction, x: float, k: int, r: int) -> float:
        """
        (2r-k+1) x f^(r+1)(x) + x^2 f^(r+2)(x).

        Raises:
            MissingDerivativeError: If f carries fewer than r + 2 derivatives
        """
        first = float(f.nth(r + 1)(x))
        second = float(f.nth(r + 2)(x))
        return (2 * r - k + 1) * x * first + x * x * second

    @staticmethod
    def voronovskaja_sequence(
        f: TestFunction,
        x: float,
        k: int,
        r: int,
        n_values: Sequence[int],
        q: QuadratureConfig,
        tolerance: Optional[float] = None,
    ) -> VoronovskajaReport:
        """
        Scaled deviations E_n = n ((1/b) M^(r)_{n,k}(f; x) - f^(r)(x)) along a doubling ladder.

        Args:
            f: Function with analytic derivatives up to order r + 2
            x: Evaluation point
            k, r: Operator parameters shared by every rung
            n_values: Doubling ladder n0, 2 n0, ...
            q: Quadrature configuration
            tolerance: Allowed |extrapolated - target|; defaults to VORONOVSKAJA_TOLERANCE

        Returns:
            VoronovskajaReport with the two-point extrapolation from the last two
            rungs and the full Richardson tableau over the ladder
        """
        n_values = _check_ladder(n_values, k, r)
        tolerance = tolerance if tolerance is not None else get_config().VORONOVSKAJA_TOLERANCE
        target = VerificationService.voronovskaja_target(f, x, k, r)
        fr_x = float(f.nth(r)(x))

        with logfire.span("voronovskaja_sequence") as span:
            span.set_attribute("function_id", f.name)
            span.set_attribute("k", k)
            span.set_attribute("r", r)
            span.set_attribute("x", x)
            span.set_attribute("ladder", n_values)

            e_n = []
            for n in n_values:
                p = OperatorParams.checked(n, k, r)
                value = OperatorService.apply_derivative(p, f, x, q) / float(MomentService.b_norm(n, k, r))
                e_n.append(n * (value - fr_x))
                logger.debug(f'E_{n}({f.name}; x={x:g}, k={k}, r={r}) = {e_n[-1]!r}')

            extrapolated = two_point(e_n[-2], e_n[-1])
            tableau = richardson_extrapolate(e_n)
            converged = abs(extrapolated - target) <= tolerance
            span.set_attribute("extrapolated", extrapolated)
            span.set_attribute("converged", converged)

        logger.info(
            f'Voronovskaja {f.name} x={x:g} k={k} r={r}: target={target:.10g}, '
            f'extrapolated={extrapolated:.10g}, converged={converged}'
        )
        return VoronovskajaReport(
            k=k,
            r=r,
            x=x,
            function_id=f.name,
            n_values=n_values,
            e_n=e_n,
            target=target,
            extrapolated=extrapolated,
            extrapolated_tableau=tableau,
            tolerance=tolerance,
            converged=converged,
        )

    @staticmethod
    def voronovskaja_sequence_exact(
        coefficients: Sequence,
        x,
        k: int,
        r: int,
        n_values: Sequence[int],
    ) -> ExactVoronovskajaReport:
        """
        Rational E_n for a polynomial f = sum_j a_j t^j, from exact M* moments.

        Every value, the target and the Richardson tableau stay in Fraction
        arithmetic.
        """
        n_values = _check_ladder(n_values, k, r)
        x = Fraction(x)
        if x <= 0:
            raise ParameterConstraintError(f'x must be positive, got {x}')
        coefficients = [Fraction(a) for a in coefficients]

        fr = _poly_derivative(coefficients, r)
        fr_x = _poly_eval(fr, x)
        target = (
            (2 * r - k + 1) * x * _poly_eval(_poly_derivative(coefficients, r + 1), x)
            + x * x * _poly_eval(_poly_derivative(coefficients, r + 2), x)
        )

        e_n = [n * (MomentService.polynomial_moment(fr, n, k, r, x) - fr_x) for n in n_values]
        return ExactVoronovskajaReport(
            k=k,
            r=r,
            x=x,
            coefficients=coefficients,
            n_values=n_values,
            e_n=e_n,
            target=target,
            extrapolated=two_point(e_n[-2], e_n[-1]),
            extrapolated_tableau=richardson_extrapolate(e_n),
        )

    @staticmethod
    def _deviation(f: TestFunction, x: float, n: int, k: int, r: int, q: QuadratureConfig):
        """f^(r) and |(1/b) M^(r)_{n,k}(f; x) - f^(r)(x)|."""
        p = OperatorParams.checked(n, k, r)
        if n < r + 2:
            raise ParameterConstraintError(f'bound checks need n >= r + 2, got n={n}, r={r}')
        derivative = f.derivative(r)
        value = OperatorService.apply_derivative(p, f, x, q) / float(MomentService.b_norm(n, k, r))
        return derivative, abs(value - float(derivative(x)))

    @staticmethod
    def check_first_modulus_bound(
        f: TestFunction,
        x: float,
        n: int,
        k: int,
        r: int,
        q: QuadratureConfig,
    ) -> BoundReport:
        """
        |(1/b) M^(r)_{n,k}(f; x) - f^(r)(x)| <= 2 omega(f^(r), sqrt(delta_n)).

        delta_n here is the full second central moment delta_n(n,k,r) x^2,
        recomputed for every (n, x).

        Raises:
            MissingModulusError: If f^(r) has no analytic omega
        """
        derivative = f.derivative(r)
        if derivative.analytic_omega1 is None:
            raise MissingModulusError(f'{derivative.name} carries no analytic modulus of continuity')

        with logfire.span("check_first_modulus_bound") as span:
            span.set_attribute("function_id", f.name)
            span.set_attribute("params", [n, k, r])
            span.set_attribute("x", x)

            derivative, lhs = VerificationService._deviation(f, x, n, k, r, q)
            delta = float(MomentService.delta_n(n, k, r)) * x * x
            omega = ModuliService.omega1(derivative, math.sqrt(delta)).value
            rhs = 2.0 * omega
            margin = _margin(q)
            slack = rhs - lhs
            span.set_attribute("slack", slack)

        return BoundReport(
            theorem=FIRST_MODULUS,
            n=n, k=k, r=r, x=x,
            function_id=f.name,
            lhs=lhs,
            rhs_components={'delta_n': delta, 'omega1': omega},
            rhs=rhs,
            slack=slack,
            margin=margin,
            holds=slack >= -margin,
            asserted=True,
        )

    @staticmethod
    def check_second_modulus_bound(
        f: TestFunction,
        x: float,
        n: int,
        k: int,
        r: int,
        q: QuadratureConfig,
        reference_C: Optional[float] = None,
    ) -> BoundReport:
        """
        Decompose the deviation against C omega_2(f^(r), gamma_n) + omega(f^(r), |2r-k+1| x/(n-r)).

        gamma_n = sqrt(delta_n x^2 + ((2r-k+1) x/(n-r))^2). The constant C is
        unknown: the report records
        empirical_C = max(0, lhs - omega term) / omega_2 term, and `holds`
        is evaluated against reference_C but never asserted.

        Raises:
            MissingModulusError: If f^(r) lacks an analytic omega_2, or an analytic
                omega when the drift term is non-zero
        """
        derivative = f.derivative(r)
        drift_step = abs(float(MomentService.drift(n, k, r))) * x
        if derivative.analytic_omega2 is None:
            raise MissingModulusError(f'{derivative.name} carries no analytic second-order modulus')
        if drift_step > 0 and derivative.analytic_omega1 is None:
            raise MissingModulusError(f'{derivative.name} carries no analytic modulus of continuity')
        reference_C = reference_C if reference_C is not None else get_config().REFERENCE_C

        with logfire.span("check_second_modulus_bound") as span:
            span.set_attribute("function_id", f.name)
            span.set_attribute("params", [n, k, r])
            span.set_attribute("x", x)

            derivative, lhs = VerificationService._deviation(f, x, n, k, r, q)
            delta = float(MomentService.delta_n(n, k, r)) * x * x
            drift = float(MomentService.drift(n, k, r)) * x
            gamma = math.sqrt(delta + drift * drift)
            omega2 = ModuliService.omega2(derivative, gamma).value
            omega1 = ModuliService.omega1(derivative, drift_step).value if drift_step > 0 else 0.0
            margin = _margin(q)

            excess = max(0.0, lhs - omega1)
            if omega2 > 0:
                empirical_C = excess / omega2
            else:
                empirical_C = 0.0 if excess <= margin else math.inf

            rhs = reference_C * omega2 + omega1
            slack = rhs - lhs
            components = {'gamma_n': gamma, 'omega2': omega2, 'omega1': omega1}
            if derivative.bounded:
                # the omega_2 term stands in for K(f^(r), gamma_n^2); record both sides
                components['k_functional'] = ModuliService.k_functional_upper(derivative, gamma * gamma)
                components['k_to_omega2'] = ModuliService.devore_lorentz_ratio(derivative, gamma * gamma)
            span.set_attribute("empirical_C", empirical_C)

        return BoundReport(
            theorem=SECOND_MODULUS,
            n=n, k=k, r=r, x=x,
            function_id=f.name,
            lhs=lhs,
            rhs_components=components,
            rhs=rhs,
            slack=slack,
            margin=margin,
            holds=slack >= -margin,
            asserted=False,
            empirical_C=empirical_C,
            reference_C=reference_C,
        )

    @staticmethod
    def check_moment_order(m: int, k: int, r: int, n_values: Sequence[int]) -> OrderReport:
        """
        n^floor((m+1)/2) |M*((t-x)^m; x) / x^m| along n_values.

        Passes when every consecutive ratio lies in [0.3, 3.0]; an all-zero
        sequence is a degenerate pass.

        Raises:
            ParameterConstraintError: If m exceeds min(n-k, n-r) at some n
        """
        n_values = [int(n) for n in n_values]
        if not n_values:
            raise ParameterConstraintError('check_moment_order needs at least one n')
        for n in n_values:
            OperatorParams.checked(n, k, r)
            if m > min(n - k, n - r):
                raise ParameterConstraintError(f'moment order {m} exceeds min(n-k, n-r) at n={n}')

        power = (m + 1) // 2
        scaled = [float(n ** power * abs(MomentService.mstar_central_moment(n, k, r, m))) for n in n_values]

        lower, upper = 0.3, 3.0
        if all(value == 0 for value in scaled):
            return OrderReport(m=m, k=k, r=r, n_values=n_values, scaled=scaled, ratios=[],
                               lower=lower, upper=upper, degenerate=True, passed=True)

        ratios = [b / a if a != 0 else math.inf for a, b in zip(scaled, scaled[1:])]
        passed = all(lower <= ratio <= upper for ratio in ratios)
        if not passed:
            logger.warning(f'Moment order check failed for m={m}, k={k}, r={r}: ratios={ratios}')
        return OrderReport(m=m, k=k, r=r, n_values=n_values, scaled=scaled, ratios=ratios,
                           lower=lower, upper=upper, degenerate=False, passed=passed)

    @staticmethod
    def bound_grid(
        theorems: Iterable[str],
        function_ids: Iterable[str],
        n_values: Iterable[int],
        k_values: Iterable[int],
        r_values: Iterable[int],
        x_values: Iterable[float],
        q: QuadratureConfig,
    ) -> List[BoundReport]:
        """
        Run bound checks over a parameter grid.

        Combinations whose hypotheses fail (k > n, n < r + 2, f^(r) unbounded
        or without the analytic moduli the check needs) are skipped. Reports
        come back sorted by (theorem, function, k, r, x, n).
        """
        checks = {
            FIRST_MODULUS: VerificationService.check_first_modulus_bound,
            SECOND_MODULUS: VerificationService.check_second_modulus_bound,
        }
        theorems = list(theorems)
        unknown = [t for t in theorems if t not in checks]
        if unknown:
            raise ParameterConstraintError(f"unknown bound check(s): {', '.join(unknown)}")

        n_values, k_values, r_values, x_values = (list(v) for v in (n_values, k_values, r_values, x_values))
        reports = []
        skipped = 0
        for function_id in function_ids:
            f = get_builtin(function_id)
            for r in r_values:
                if r > f.max_derivative or not f.derivative(r).bounded:
                    skipped += 1
                    continue
                for theorem in theorems:
                    for k in k_values:
                        for n in n_values:
                            if k > n or n < r + 2:
                                skipped += 1
                                continue
                            for x in x_values:
                                try:
                                    reports.append(checks[theorem](f, x, n, k, r, q))
                                except MissingModulusError as e:
                                    logger.debug(f'skipping {theorem} for {function_id}: {e}')
                                    skipped += 1

        if skipped:
            logger.info(f'bound grid: {len(reports)} reports, {skipped} combinations skipped')
        return sorted(reports, key=lambda report: report.sort_key)

    @staticmethod
    def violations(reports: Iterable[BoundReport]) -> List[BoundReport]:
        """Asserted reports whose bound failed beyond the margin."""
        return [report for report in reports if report.asserted and not report.holds]

