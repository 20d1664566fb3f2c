"""
Moduli of continuity and smoothness, and a constructive K-functional bound.

Analytic moduli are returned when the TestFunction carries them. Otherwise
the sup over [0, inf) is estimated on a tensor grid x in [0, T],
h in delta * geomspace(1e-4, 1); such estimates are LOWER bounds of the true
modulus and are tagged accordingly.
"""

import logging
import math
from typing import Iterable, List, Optional, Sequence

import numpy as np
from scipy.ndimage import gaussian_filter1d

from gammaops.config import get_config
from gammaops.exceptions import MissingModulusError, ParameterConstraintError
from gammaops.models.test_function import TestFunction
from gammaops.schemas.moduli import ModulusEstimate, ModulusKind

logger = logging.getLogger(__name__)

H_FLOOR = 1e-4
FILTER_TRUNCATE = 4.0


def _defaults(domain_cap, grid_points, h_points):
    config = get_config()
    return (
        float(domain_cap if domain_cap is not None else config.MODULUS_DOMAIN_CAP),
        int(grid_points if grid_points is not None else config.MODULUS_GRID_POINTS),
        int(h_points if h_points is not None else config.MODULUS_H_POINTS),
    )


def _check_delta(delta: float) -> float:
    delta = float(delta)
    if not delta > 0:
        raise ParameterConstraintError(f'delta must be positive, got {delta}')
    return delta


def _grid_sup(f: TestFunction, delta: float, order: int, domain_cap: float, grid_points: int, h_points: int) -> float:
    xs = np.linspace(0.0, domain_cap, grid_points)
    f0 = f(xs)
    best = 0.0
    for h in delta * np.geomspace(H_FLOOR, 1.0, h_points):
        if order == 1:
            diff = f(xs + h) - f0
        else:
            diff = f(xs + 2.0 * h) - 2.0 * f(xs + h) + f0
        best = max(best, float(np.max(np.abs(diff))))
    return best


class ModuliService:
    """First and second order moduli and the K-functional upper bound."""

    @staticmethod
    def omega1(
        f: TestFunction,
        delta: float,
        domain_cap: Optional[float] = None,
        grid_points: Optional[int] = None,
        h_points: Optional[int] = None,
    ) -> ModulusEstimate:
        """
        omega(f, delta) = sup_{0<h<=delta} sup_x |f(x+h) - f(x)|.

        Args:
            f: Function whose modulus is wanted
            delta: Step bound, delta > 0
            domain_cap: Truncation T of [0, inf) for the grid estimate
            grid_points: Number of x points on [0, T]
            h_points: Number of geometric h points on (0, delta]

        Returns:
            Analytic value when f carries one, grid lower estimate otherwise
        """
        return ModuliService._modulus(f, delta, 1, domain_cap, grid_points, h_points)

    @staticmethod
    def omega2(
        f: TestFunction,
        delta: float,
        domain_cap: Optional[float] = None,
        grid_points: Optional[int] = None,
        h_points: Optional[int] = None,
    ) -> ModulusEstimate:
        """omega_2(f, delta) = sup_{0<h<=delta} sup_x |f(x+2h) - 2f(x+h) + f(x)|."""
        return ModuliService._modulus(f, delta, 2, domain_cap, grid_points, h_points)

    @staticmethod
    def _modulus(f, delta, order, domain_cap, grid_points, h_points) -> ModulusEstimate:
        delta = _check_delta(delta)
        domain_cap, grid_points, h_points = _defaults(domain_cap, grid_points, h_points)
        analytic = f.analytic_omega1 if order == 1 else f.analytic_omega2

        if analytic is not None:
            return ModulusEstimate(
                delta=delta,
                value=float(analytic(delta)),
                kind=ModulusKind.analytic,
                order=order,
                grid_points=grid_points,
                domain_cap=domain_cap,
            )

        value = _grid_sup(f, delta, order, domain_cap, grid_points, h_points)
        logger.debug(f'grid omega_{order}({f.name}, {delta:g}) >= {value:.6g}')
        return ModulusEstimate(
            delta=delta,
            value=value,
            kind=ModulusKind.grid,
            order=order,
            grid_points=grid_points,
            domain_cap=domain_cap,
        )

    @staticmethod
    def omega_profile(
        f: TestFunction,
        deltas: Iterable[float],
        order: int = 1,
        domain_cap: Optional[float] = None,
        grid_points: Optional[int] = None,
        h_points: Optional[int] = None,
    ) -> List[ModulusEstimate]:
        """
        Moduli at ascending deltas.

        Grid estimates are replaced by their running maximum: a lower bound at
        a smaller delta is still a lower bound at a larger one, so the profile
        is non-decreasing.
        """
        if order not in (1, 2):
            raise ParameterConstraintError(f'modulus order must be 1 or 2, got {order}')
        estimates = []
        running = 0.0
        for delta in sorted(float(d) for d in deltas):
            estimate = ModuliService._modulus(f, delta, order, domain_cap, grid_points, h_points)
            if estimate.kind == ModulusKind.grid and estimate.value < running:
                estimate = estimate.model_copy(update={'value': running})
            running = max(running, estimate.value)
            estimates.append(estimate)
        return estimates

    @staticmethod
    def k_functional_upper(
        f: TestFunction,
        delta: float,
        smoothing_scales: Optional[Sequence[float]] = None,
        domain_cap: Optional[float] = None,
        grid_points: Optional[int] = None,
    ) -> float:
        """
        Upper bound on K(f, delta) = inf_g {||f - g|| + delta ||g''||}.

        Candidates are Gaussian mollifications g_sigma of f, plus g = f itself
        when f carries an analytic second derivative. f is continued to
        negative arguments by point reflection, f(-s) = 2 f(0) - f(s), before
        smoothing; the norms are taken on the grid over [0, T].

        Raises:
            ParameterConstraintError: If f is not bounded, delta < 0 or a scale is not positive
        """
        if not f.bounded:
            raise ParameterConstraintError(f'K-functional bound needs a bounded function, {f.name} is not')
        delta = float(delta)
        if delta < 0:
            raise ParameterConstraintError(f'delta must be non-negative, got {delta}')
        scales = tuple(smoothing_scales if smoothing_scales is not None else get_config().SMOOTHING_SCALES)
        if not scales or min(scales) <= 0:
            raise ParameterConstraintError('smoothing scales must be positive')
        domain_cap, grid_points, _ = _defaults(domain_cap, grid_points, None)

        xs = np.linspace(0.0, domain_cap, grid_points)
        dx = xs[1] - xs[0]
        pad = int(math.ceil(FILTER_TRUNCATE * max(scales) / dx)) + 1
        left = -dx * np.arange(pad, 0, -1)
        right = domain_cap + dx * np.arange(1, pad + 1)
        f0 = float(f(0.0))
        extended = np.concatenate([2.0 * f0 - f(-left), f(xs), f(right)])
        fx = extended[pad:pad + grid_points]

        candidates = []
        if f.max_derivative >= 2:
            candidates.append(delta * float(np.max(np.abs(f.nth(2)(xs)))))

        for sigma in scales:
            width = sigma / dx
            smooth = gaussian_filter1d(extended, width, order=0, mode='nearest', truncate=FILTER_TRUNCATE)
            curvature = gaussian_filter1d(extended, width, order=2, mode='nearest', truncate=FILTER_TRUNCATE) / dx ** 2
            g = smooth[pad:pad + grid_points]
            g2 = curvature[pad:pad + grid_points]
            candidates.append(float(np.max(np.abs(fx - g))) + delta * float(np.max(np.abs(g2))))

        best = min(candidates)
        logger.debug(f'K({f.name}, {delta:g}) <= {best:.6g} over {len(candidates)} candidates')
        return best

    @staticmethod
    def devore_lorentz_ratio(
        f: TestFunction,
        delta: float,
        smoothing_scales: Optional[Sequence[float]] = None,
        domain_cap: Optional[float] = None,
        grid_points: Optional[int] = None,
        h_points: Optional[int] = None,
    ) -> float:
        """K_upper(f, delta) / omega_2(f, sqrt(delta)): the empirical equivalence constant."""
        delta = _check_delta(delta)
        k_upper = ModuliService.k_functional_upper(f, delta, smoothing_scales, domain_cap, grid_points)
        w2 = ModuliService.omega2(f, math.sqrt(delta), domain_cap, grid_points, h_points).value
        if w2 == 0:
            return 0.0 if k_upper == 0 else math.inf
        return k_upper / w2

    @staticmethod
    def continuity_property_gap(
        f: TestFunction,
        delta: float,
        t_samples: Sequence[float],
        x_samples: Sequence[float],
    ) -> float:
        """
        max over sample pairs of |f(t) - f(x)| - (1 + |t - x| / delta) omega(f, delta).

        Non-positive when the property holds.

        Raises:
            MissingModulusError: If f has no analytic omega
        """
        delta = _check_delta(delta)
        if f.analytic_omega1 is None:
            raise MissingModulusError(f'{f.name} carries no analytic modulus of continuity')
        omega = float(f.analytic_omega1(delta))
        ts = np.asarray(t_samples, dtype=float)
        xs = np.asarray(x_samples, dtype=float)
        lhs = np.abs(np.subtract.outer(f(ts), f(xs)))
        rhs = (1.0 + np.abs(np.subtract.outer(ts, xs)) / delta) * omega
        return float(np.max(lhs - rhs))
