"""
Utility Tests

Tests for Richardson extrapolation and the composite Gauss-Legendre expectation
"""
import math
from fractions import Fraction

import numpy as np
import pytest

from gammaops.exceptions import LadderShapeError, QuadratureError
from gammaops.schemas import QuadratureConfig, SplitPolicy
from gammaops.utils.extrapolation import (
    check_doubling_ladder,
    doubling_ladder,
    richardson_extrapolate,
    two_point,
)
from gammaops.utils.quadrature import (
    beta_density,
    expectation,
    gamma_density,
    gauss_legendre,
    panel_edges,
    truncated_support,
)


class TestLadders:
    """Test doubling ladders"""

    def test_doubling_ladder(self):
        assert doubling_ladder(25, 400) == [25, 50, 100, 200, 400]
        assert doubling_ladder(7, 7) == [7]

    @pytest.mark.parametrize('start, stop', [(25, 300), (0, 8), (10, 5)])
    def test_invalid_ladder(self, start, stop):
        with pytest.raises(LadderShapeError):
            doubling_ladder(start, stop)

    def test_check(self):
        check_doubling_ladder([10, 20, 40])
        with pytest.raises(LadderShapeError):
            check_doubling_ladder([10, 30])
        with pytest.raises(LadderShapeError):
            check_doubling_ladder([10])


class TestRichardson:
    """Test extrapolation on sequences with known expansions"""

    def test_two_point_removes_first_order(self):
        values = {n: 3 + Fraction(5, n) for n in (25, 50)}
        assert two_point(values[25], values[50]) == 3

    def test_tableau_removes_every_order(self):
        """Three rungs remove 1/n and 1/n^2 exactly"""
        values = [1 + Fraction(1, n) + Fraction(7, n * n) for n in (10, 20, 40)]
        assert richardson_extrapolate(values) == 1

    def test_floats(self):
        values = [math.pi + 2.0 / n - 1.0 / n ** 2 for n in (16, 32, 64, 128)]
        assert richardson_extrapolate(values) == pytest.approx(math.pi, abs=1e-12)

    def test_needs_two_values(self):
        with pytest.raises(LadderShapeError):
            richardson_extrapolate([1.0])


class TestQuadrature:
    """Test expectations under Beta and Gamma densities"""

    def test_nodes(self):
        nodes, weights = gauss_legendre(20)
        assert weights.sum() == pytest.approx(2.0)
        assert np.all(np.abs(nodes) < 1.0)

    def test_beta_mean(self):
        density = beta_density(3.0, 7.0)
        assert expectation(density, lambda u: u, QuadratureConfig()) == pytest.approx(0.3, rel=1e-12)

    def test_gamma_mean(self):
        density = gamma_density(11.0)
        assert expectation(density, lambda s: s, QuadratureConfig()) == pytest.approx(11.0, rel=1e-12)

    def test_uniform_policy(self):
        q = QuadratureConfig(split_policy=SplitPolicy.uniform)
        assert expectation(beta_density(5.0, 5.0), lambda u: u * u, q) == pytest.approx(5 * 6 / (10 * 11), rel=1e-12)

    def test_truncated_support(self):
        lo, hi = truncated_support(beta_density(50.0, 60.0), 60.0)
        assert 0.0 < lo < 49.0 / 108.0 < hi < 1.0

    def test_support_reaches_boundary(self):
        """Beta(1, b) peaks at 0, so the lower end stays at 0"""
        lo, _ = truncated_support(beta_density(1.0, 6.0), 60.0)
        assert lo == 0.0

    def test_panel_edges(self):
        edges = panel_edges(0.0, 0.3, 1.0, 4, SplitPolicy.mode_centered)
        assert len(edges) == 9
        assert 0.3 in edges
        assert np.all(np.diff(edges) > 0)
        assert len(panel_edges(0.0, 0.3, 1.0, 4, SplitPolicy.uniform)) == 9

    def test_invalid_densities(self):
        with pytest.raises(ValueError):
            beta_density(0.5, 2.0)
        with pytest.raises(ValueError):
            gamma_density(0.5)

    def test_non_finite_integrand(self):
        with pytest.raises(QuadratureError):
            expectation(beta_density(2.0, 2.0), lambda u: np.full_like(u, np.inf), QuadratureConfig())
