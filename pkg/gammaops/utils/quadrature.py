"""
Composite Gauss-Legendre expectations under a unimodal log-density.

Every operator in the package reduces to E[g(U)] for a Beta or Gamma
distributed U. The support is truncated where the log-density falls
`log_drop` units below its peak, split into panels around the mode, and the
panel count is doubled until two successive estimates agree.
"""

import logging
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Tuple

import numpy as np
from scipy import stats
from scipy.optimize import brentq

from gammaops.exceptions import QuadratureError
from gammaops.schemas.operator import QuadratureConfig, SplitPolicy

logger = logging.getLogger(__name__)

INITIAL_PANELS_PER_SIDE = 2
_MAX_BRACKET_STEPS = 2000
_RTOL = 4 * np.finfo(float).eps


@dataclass(frozen=True)
class LogDensity:
    """A unimodal probability density on (lower, upper), given in log space."""
    logpdf: Callable[[np.ndarray], np.ndarray]
    mode: float
    lower: float
    upper: float
    label: str = ''


def beta_density(a: float, b: float) -> LogDensity:
    """Beta(a, b) with a, b >= 1."""
    if a < 1 or b < 1:
        raise ValueError(f'Beta parameters must be >= 1, got ({a}, {b})')
    mode = (a - 1.0) / (a + b - 2.0) if a + b > 2 else 0.5
    return LogDensity(
        logpdf=lambda u: stats.beta.logpdf(u, a, b),
        mode=mode,
        lower=0.0,
        upper=1.0,
        label=f'Beta({a:g},{b:g})',
    )


def gamma_density(shape: float) -> LogDensity:
    """Gamma(shape, 1) with shape >= 1."""
    if shape < 1:
        raise ValueError(f'Gamma shape must be >= 1, got {shape}')
    return LogDensity(
        logpdf=lambda s: stats.gamma.logpdf(s, shape),
        mode=shape - 1.0,
        lower=0.0,
        upper=math.inf,
        label=f'Gamma({shape:g})',
    )


@lru_cache(maxsize=32)
def gauss_legendre(order: int) -> Tuple[np.ndarray, np.ndarray]:
    """Nodes and weights on [-1, 1]."""
    nodes, weights = np.polynomial.legendre.leggauss(order)
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return nodes, weights


def _crossing(density: LogDensity, threshold: float, toward: float) -> float:
    """
    Point between the mode and `toward` where the log-density equals threshold.

    Returns the boundary itself when the density never drops that far.
    """
    mode = density.mode
    if toward == mode:
        return mode

    def excess(u):
        return float(density.logpdf(u)) - threshold

    if math.isinf(toward):
        step = max(1.0, math.sqrt(max(mode, 1.0)))
        outer = mode + step
        for _ in range(_MAX_BRACKET_STEPS):
            if excess(outer) < 0:
                break
            step *= 2.0
            outer = mode + step
        else:
            raise QuadratureError(f'{density.label}: could not bracket the upper tail')
        return brentq(excess, mode, outer, xtol=1e-15, rtol=_RTOL)

    # finite boundary: halve the remaining gap until the density has dropped enough
    gap = toward - mode
    for _ in range(_MAX_BRACKET_STEPS):
        gap /= 2.0
        outer = toward - gap
        if outer == toward:
            return toward
        if excess(outer) < 0:
            a, b = sorted((mode, outer))
            return brentq(excess, a, b, xtol=1e-300, rtol=_RTOL)
    return toward


def truncated_support(density: LogDensity, log_drop: float) -> Tuple[float, float]:
    """Interval outside which the density is below exp(-log_drop) of its peak."""
    peak = float(density.logpdf(density.mode))
    if not math.isfinite(peak):
        raise QuadratureError(f'{density.label}: log-density is not finite at its mode')
    threshold = peak - log_drop
    lo = _crossing(density, threshold, density.lower)
    hi = _crossing(density, threshold, density.upper)
    return lo, hi


def _graded(panels: int) -> np.ndarray:
    """Breakpoints on [0, 1], dense at both ends."""
    j = np.arange(panels + 1)
    return 0.5 * (1.0 - np.cos(np.pi * j / panels))


def panel_edges(lo: float, mode: float, hi: float, panels_per_side: int, policy: SplitPolicy) -> np.ndarray:
    """Panel breakpoints on [lo, hi] for the given policy."""
    if policy == SplitPolicy.uniform:
        return np.linspace(lo, hi, 2 * panels_per_side + 1)

    grading = _graded(panels_per_side)
    pieces = []
    if mode > lo:
        pieces.append(mode - (mode - lo) * grading[::-1])
    if hi > mode:
        pieces.append(mode + (hi - mode) * grading)
    edges = np.unique(np.concatenate(pieces))
    return edges


def _composite_sum(edges: np.ndarray, order: int, density: LogDensity, g: Callable[[np.ndarray], np.ndarray]) -> float:
    nodes, weights = gauss_legendre(order)
    left = edges[:-1, None]
    half = 0.5 * np.diff(edges)[:, None]
    points = (left + half * (nodes[None, :] + 1.0)).ravel()
    w = (half * weights[None, :]).ravel()

    values = np.asarray(g(points), dtype=float)
    if values.shape != points.shape:
        values = np.broadcast_to(values, points.shape)
    terms = w * np.exp(density.logpdf(points)) * values
    if not np.all(np.isfinite(terms)):
        raise QuadratureError(f'{density.label}: integrand is not finite on the truncated support')
    return math.fsum(terms.tolist())


def expectation(density: LogDensity, g: Callable[[np.ndarray], np.ndarray], q: QuadratureConfig) -> float:
    """
    E[g(U)] for U distributed as `density`.

    Args:
        density: Unimodal log-density with its mode and support
        g: Vectorized integrand
        q: Quadrature configuration

    Returns:
        The converged estimate

    Raises:
        QuadratureError: If two successive estimates do not agree within
            tolerance before the node budget is spent
    """
    lo, hi = truncated_support(density, q.log_drop)
    mode = min(max(density.mode, lo), hi)

    panels = INITIAL_PANELS_PER_SIDE
    spent = 0
    previous = None
    while True:
        edges = panel_edges(lo, mode, hi, panels, q.split_policy)
        cost = (len(edges) - 1) * q.order
        if spent + cost > q.node_budget:
            raise QuadratureError(
                f'{density.label}: no convergence within {q.node_budget} nodes '
                f'(last estimate {previous!r}, rel_tol={q.rel_tolerance:g}, abs_tol={q.abs_tolerance:g})'
            )
        estimate = _composite_sum(edges, q.order, density, g)
        spent += cost

        if previous is not None:
            change = abs(estimate - previous)
            if change <= max(q.abs_tolerance, q.rel_tolerance * abs(estimate)):
                logger.debug(f'{density.label}: converged with {len(edges) - 1} panels, {spent} nodes, change={change:.3e}')
                return estimate
        previous = estimate
        panels *= 2
