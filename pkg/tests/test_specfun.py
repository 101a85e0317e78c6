import math
import random

import pytest

from prodelay.errors import DomainError, PoleError
from prodelay.specfun import (
    MultiIndex,
    gamma,
    gamma_ratio,
    lambert_w0,
    mittag_leffler,
    multi_mittag_leffler,
    multinomial,
    recip_gamma,
)


class TestGamma:
    def test_one(self):
        assert gamma(1.0) == pytest.approx(1.0, rel=1e-14)

    def test_half_integer(self):
        assert gamma(1.5) == pytest.approx(math.sqrt(math.pi) / 2, rel=1e-14)

    def test_factorial(self):
        assert gamma(11.0) == pytest.approx(3628800.0, rel=1e-13)

    def test_against_platform_gamma_across_range(self):
        rng = random.Random(1)
        xs = [rng.uniform(1e-3, 171.0) for _ in range(4000)]
        xs += [1e-6, 0.1, 0.5, 1.0, 2.0, 20.5, 130.0, 130.5, 170.9, 171.0]
        worst = max(abs(gamma(x) - math.gamma(x)) / math.gamma(x) for x in xs)
        assert worst <= 1e-13

    def test_reflection_negative_arguments(self):
        for x in (-0.5, -1.5, -2.3, -7.7):
            assert gamma(x) == pytest.approx(math.gamma(x), rel=1e-12)

    @pytest.mark.parametrize("x", [0.0, -1.0, -2.0, -40.0])
    def test_poles(self, x):
        with pytest.raises(PoleError):
            gamma(x)

    def test_ratio_large_arguments(self):
        # Gamma(x)/Gamma(x+0.5) stays finite far beyond the overflow range
        val = gamma_ratio(300.0, 300.5)
        assert val == pytest.approx(math.exp(math.lgamma(300.0) - math.lgamma(300.5)),
                                    rel=1e-12)

    def test_recip_gamma_large(self):
        assert recip_gamma(500.0) == pytest.approx(math.exp(-math.lgamma(500.0)), rel=1e-12)
        assert recip_gamma(5.0) == pytest.approx(1.0 / 24.0, rel=1e-13)


class TestMittagLeffler:
    @pytest.mark.parametrize("alpha", [0.3, 0.5, 1, 1.7])
    def test_value_at_zero(self, alpha):
        res = mittag_leffler(alpha, 0.0, terms=10)
        assert res.value == pytest.approx(1.0, abs=1e-15)
        assert res.converged

    def test_order_one_is_exp(self):
        res = mittag_leffler(1, 1.0, terms=60)
        assert res.value == pytest.approx(math.e, abs=1e-12)
        assert res.converged

    def test_half_order_against_erfc_identity(self):
        # E_{1/2}(z) = exp(z**2) * erfc(-z) for real z
        res = mittag_leffler(0.5, 1.0, terms=200)
        assert res.converged
        assert res.value == pytest.approx(math.exp(1.0) * math.erfc(-1.0), rel=1e-12)
        assert res.value == pytest.approx(5.008980080762283, rel=1e-9)

    def test_exp_agreement_on_symmetric_interval(self):
        for i in range(-50, 51):
            x = i / 10.0
            res = mittag_leffler(1, x, terms=80)
            assert res.converged
            assert abs(res.value - math.exp(x)) <= 1e-11 * abs(math.exp(x))

    def test_doubling_flag_detects_short_sums(self):
        res = mittag_leffler(0.5, 5.0, terms=40)
        assert not res.converged
        # values of order 1e11 cannot move by < 1e-12 absolute between
        # doublings (that is below one ulp), so the flag stays honest there;
        # an O(100) value converges cleanly
        good = mittag_leffler(0.5, 2.0, terms=120)
        assert good.converged
        assert good.value == pytest.approx(math.exp(4.0) * math.erfc(-2.0), rel=1e-12)

    def test_invalid_arguments(self):
        with pytest.raises(DomainError):
            mittag_leffler(0.0, 1.0)
        with pytest.raises(DomainError):
            mittag_leffler(1.0, 1.0, terms=0)


class TestMultinomial:
    def test_small(self):
        assert multinomial(MultiIndex((1, 2))) == 3

    def test_empty_weight(self):
        assert multinomial(MultiIndex((0, 0))) == 1

    def test_three_parts(self):
        assert multinomial(MultiIndex((2, 2, 2))) == 90

    def test_sequence_argument(self):
        assert multinomial([3, 1]) == 4

    def test_weight_property(self):
        idx = MultiIndex((1, 2, 3))
        assert idx.k == 6

    def test_validation(self):
        with pytest.raises(ValueError):
            MultiIndex((1, -1))
        with pytest.raises(ValueError):
            MultiIndex(())


class TestMultiMittagLeffler:
    def test_single_parameter_reduction_term_by_term(self):
        # with one z the double sum collapses onto the plain truncated sum;
        # the float paths share every operation, so equality is exact
        for alpha in (0.5, 0.85, 1.3):
            for x in (0.3, -1.2, 2.0):
                for kmax in (0, 3, 17):
                    direct = mittag_leffler(alpha, x, terms=kmax + 1).value
                    assert multi_mittag_leffler((alpha,), 1.0, (x,), kmax) == direct

    def test_zero_arguments(self):
        assert multi_mittag_leffler((0.7, 1.3), 1.0, (0.0, 0.0), 12) == pytest.approx(1.0)

    def test_binomial_collapse_to_exponential(self):
        # alpha = (1,1), beta = 1: sum over k of (u+v)**k / k!
        val = multi_mittag_leffler((1.0, 1.0), 1.0, (0.5, 0.5), 40)
        assert val == pytest.approx(math.e, rel=1e-13)

    def test_validation(self):
        with pytest.raises(DomainError):
            multi_mittag_leffler((1.0,), 1.0, (1.0, 2.0), 3)
        with pytest.raises(DomainError):
            multi_mittag_leffler((1.0,), 1.0, (1.0,), -1)


class TestLambertW:
    def test_zero(self):
        assert lambert_w0(0.0) == 0.0

    def test_at_e(self):
        assert lambert_w0(math.e) == pytest.approx(1.0, abs=1e-12)

    def test_omega_constant(self):
        assert lambert_w0(1.0) == pytest.approx(0.5671432904097838, abs=1e-12)

    def test_branch_point(self):
        assert lambert_w0(-math.exp(-1.0)) == pytest.approx(-1.0, abs=1e-6)

    def test_below_branch_point_rejected(self):
        with pytest.raises(DomainError):
            lambert_w0(-math.exp(-1.0) - 1e-12)

    def test_residuals_across_domain(self):
        rng = random.Random(5)
        xs = [rng.uniform(-math.exp(-1.0) + 1e-9, 10.0) for _ in range(200)]
        xs += [-math.exp(-1.0) + 1e-12, 1e-9, 1e3, 1e10, 1e100, 1e300]
        for x in xs:
            w = lambert_w0(x)
            assert abs(w * math.exp(w) - x) <= 1e-12 * max(1.0, abs(x))
