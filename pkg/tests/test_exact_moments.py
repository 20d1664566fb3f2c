"""
Exact Moment Tests

Tests for rational raw/central moments, normalizers and the closed-form audit
"""
import logging
from fractions import Fraction

import pytest

from gammaops.exceptions import MomentUndefinedError, ParameterConstraintError
from gammaops.services import MomentService


AUDIT_N = range(5, 51)
AUDIT_K = range(1, 6)
AUDIT_R = range(0, 6)


class TestFallingFactorial:
    """Test [x]_m"""

    def test_empty_product(self):
        """[x]_0 is one"""
        assert MomentService.falling_factorial(5, 0) == 1

    def test_integer(self):
        assert MomentService.falling_factorial(5, 3) == 60

    def test_rational_argument(self):
        """[1/2]_2 = (1/2)(-1/2)"""
        assert MomentService.falling_factorial(Fraction(1, 2), 2) == Fraction(-1, 4)

    def test_negative_order_rejected(self):
        with pytest.raises(ValueError):
            MomentService.falling_factorial(5, -1)


class TestRawMoments:
    """Test moments of M_{n,k}"""

    def test_first_values(self):
        """n=5, k=1: 1, 1, 3/2"""
        assert [MomentService.raw_moment(5, 1, m) for m in range(3)] == [1, 1, Fraction(3, 2)]

    def test_linear_moment(self):
        """(n-k+1)/n for m = 1"""
        assert MomentService.raw_moment(10, 2, 1) == Fraction(9, 10)

    def test_order_limit(self):
        """m = n - k is the last defined order"""
        assert MomentService.raw_moment(6, 2, 4) > 0
        with pytest.raises(MomentUndefinedError):
            MomentService.raw_moment(6, 2, 5)

    def test_invalid_params(self):
        with pytest.raises(ParameterConstraintError):
            MomentService.raw_moment(3, 4, 0)

    def test_parameter_error_is_value_error(self):
        with pytest.raises(ValueError):
            MomentService.raw_moment(0, 1, 0)

    def test_central_first_moment(self):
        """(1-k)/n"""
        assert MomentService.central_moment(10, 3, 1) == Fraction(-1, 5)
        assert MomentService.central_moment(17, 1, 1) == 0

    @pytest.mark.parametrize('n', [3, 7, 40])
    def test_central_second_moment_k1(self, n):
        """2/(n-1) for k = 1"""
        assert MomentService.central_moment(n, 1, 2) == Fraction(2, n - 1)


class TestNormalizers:
    """Test beta_n, b(n,k,r), delta_n and the drift"""

    def test_beta_n(self):
        """10! / (5! 4!)"""
        assert MomentService.beta_n(5, 1) == 1260

    def test_b_norm(self):
        assert MomentService.b_norm(5, 1, 1) == 1
        assert MomentService.b_norm(12, 3, 0) == 1
        assert MomentService.b_norm(20, 1, 2) == Fraction(21, 19)

    def test_delta_n_example(self):
        assert MomentService.delta_n(5, 1, 0) == Fraction(1, 2)

    def test_delta_n_needs_two_steps(self):
        with pytest.raises(ParameterConstraintError):
            MomentService.delta_n(5, 1, 4)

    def test_delta_n_is_second_central_moment(self):
        for n in range(6, 30):
            for k in range(1, 5):
                for r in range(0, 4):
                    assert MomentService.delta_n(n, k, r) == MomentService.mstar_central_moment(n, k, r, 2)

    def test_drift_is_first_central_moment(self):
        for n in range(6, 30):
            for k in range(1, 5):
                for r in range(0, 4):
                    assert MomentService.drift(n, k, r) == MomentService.mstar_central_moment(n, k, r, 1)


class TestMstarMoments:
    """Test moments of M*_{n,k,r}"""

    def test_raw_examples(self):
        assert MomentService.mstar_raw_moment(5, 1, 1, 1) == Fraction(3, 2)
        assert MomentService.mstar_raw_moment(20, 1, 2, 1) == Fraction(11, 9)

    def test_central_example(self):
        assert MomentService.mstar_central_moment(8, 2, 0, 2) == Fraction(1, 4)

    def test_reduces_to_raw_moment_at_r0(self):
        for n in range(5, 20):
            for k in range(1, 4):
                for m in range(0, n - k + 1):
                    assert MomentService.mstar_raw_moment(n, k, 0, m) == MomentService.raw_moment(n, k, m)

    def test_order_limit(self):
        with pytest.raises(MomentUndefinedError):
            MomentService.mstar_raw_moment(6, 1, 3, 4)

    def test_third_central_moment_k1(self):
        """12 / ((n-1)(n-2)) for k = 1, r = 0"""
        for n in range(5, 30):
            assert MomentService.mstar_central_moment(n, 1, 0, 3) == Fraction(12, (n - 1) * (n - 2))

    def test_fourth_central_moment_k1(self):
        """(12n + 84) / ((n-1)(n-2)(n-3)) for k = 1, r = 0"""
        for n in range(5, 30):
            expected = Fraction(12 * n + 84, (n - 1) * (n - 2) * (n - 3))
            assert MomentService.mstar_central_moment(n, 1, 0, 4) == expected


class TestClosedForms:
    """Test the published closed forms against the binomial-sum oracle"""

    def test_orders_0_to_2_match(self):
        """Orders 0..2 agree exactly over the whole grid"""
        for n in AUDIT_N:
            for k in AUDIT_K:
                for r in AUDIT_R:
                    for m in range(3):
                        if m > n - r:
                            continue
                        closed = MomentService.closed_form_mstar_central(n, k, r, m)
                        assert closed == MomentService.mstar_central_moment(n, k, r, m), (n, k, r, m)

    def test_order_2_example(self):
        assert MomentService.closed_form_mstar_central(5, 1, 0, 2) == Fraction(1, 2)

    def test_third_order_mismatch_is_reported_not_patched(self):
        """The printed cubic numerator gives 75 where the oracle gives 528"""
        assert MomentService.c_poly(20, 1, 1) == 75
        assert MomentService.closed_form_mstar_central(20, 1, 1, 3) == Fraction(75, 19 * 18 * 17)
        assert MomentService.mstar_central_moment(20, 1, 1, 3) == Fraction(528, 19 * 18 * 17)

    def test_invalid_order(self):
        with pytest.raises(ParameterConstraintError):
            MomentService.closed_form_mstar_central(10, 1, 0, 5)

    def test_denominator_guard(self):
        with pytest.raises(ParameterConstraintError):
            MomentService.closed_form_mstar_central(6, 1, 4, 3)

    def test_audit_records_every_order(self):
        audit = MomentService.audit_closed_forms(AUDIT_N, AUDIT_K, AUDIT_R)
        assert audit.orders == [0, 1, 2, 3, 4]
        for m in range(3):
            assert audit.match_rate(m) == 1.0
        for m in (3, 4):
            assert 0.0 <= audit.match_rate(m) <= 1.0
        assert all(c.m in (3, 4) for c in audit.mismatches)

    def test_audit_skips_invalid_combinations(self):
        audit = MomentService.audit_closed_forms([5], [1, 6], [0, 4])
        assert all(c.k <= c.n and c.m <= c.n - c.r for c in audit.comparisons)
        assert {c.r for c in audit.comparisons} == {0, 4}

    def test_audit_logs_mismatches(self, caplog):
        caplog.set_level(logging.WARNING, logger='gammaops')
        audit = MomentService.audit_closed_forms([20], [1], [1], orders=[3])
        assert len(audit.mismatches) == 1
        assert 'n=20, k=1, r=1, m=3' in caplog.text
        assert str(Fraction(528, 19 * 18 * 17)) in caplog.text

    def test_audit_match_rate_without_rows(self):
        audit = MomentService.audit_closed_forms([5], [1], [0], orders=[0])
        assert audit.match_rate(4) is None


class TestBackgroundAndPolynomials:
    """Test G_n moments and exact polynomial images"""

    def test_gn_moments(self):
        assert MomentService.gn_raw_moment(5, 0) == 1
        assert MomentService.gn_raw_moment(5, 1) == 1
        assert MomentService.gn_raw_moment(5, 2) == Fraction(5, 4)

    def test_gn_order_limit(self):
        with pytest.raises(MomentUndefinedError):
            MomentService.gn_raw_moment(3, 4)

    def test_polynomial_moment(self):
        assert MomentService.polynomial_moment([0, 0, 1], 5, 1, 0, 1) == Fraction(3, 2)
        assert MomentService.polynomial_moment([7], 9, 2, 3, Fraction(5, 2)) == 7

    def test_polynomial_moment_is_linear(self):
        combined = MomentService.polynomial_moment([1, 2, 3], 12, 2, 1, 2)
        parts = sum(
            c * MomentService.mstar_raw_moment(12, 2, 1, j) * 2 ** j
            for j, c in enumerate([1, 2, 3])
        )
        assert combined == parts
