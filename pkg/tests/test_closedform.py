import math
import random
from fractions import Fraction as F

import pytest

from prodelay.errors import DimError, DomainError, FormatError
from prodelay.closedform import (
    AmbartsumianParams,
    PantographParams,
    SquareMatrix,
    ambartsumian_series,
    ambartsumian_system_series,
    pantograph_series,
    pantograph_system_series,
    sandwich_check,
    system_from_json,
)
from prodelay.sam import PolyRHS, ProblemSpec, solve
from prodelay.specfun import gamma


def eq17_oracle(a, b, q, y0, terms):
    """Independent coefficient evaluation: y0 * prod_{j<m}(a + b q**j) / m!."""
    out = []
    for m in range(terms):
        prod = F(1)
        for j in range(m):
            prod *= a + b * q ** j
        out.append(y0 * prod / math.factorial(m))
    return tuple(out)


class TestPantographSeries:
    def test_reference_setting(self):
        p = PantographParams(a=F(1), b=F(1), q=F(1, 2))
        s = pantograph_series(p, 8)
        assert s.coeffs[:4] == (F(1), F(2), F(3, 2), F(5, 8))

    def test_no_delay_term_gives_exponential(self):
        p = PantographParams(a=F(3, 2), b=F(0), q=F(1, 2))
        s = pantograph_series(p, 10)
        for m, c in enumerate(s.coeffs):
            assert c == F(3, 2) ** m / math.factorial(m)

    def test_first_order_coefficient_is_a_plus_b(self):
        p = PantographParams(a=F(1), b=F(1), q=F(1, 2))
        s = pantograph_series(p, 2)
        assert s.coeffs == (F(1), F(2))

    def test_matches_independent_oracle(self):
        rng = random.Random(13)
        for _ in range(10):
            a = F(rng.randint(-4, 4), rng.randint(1, 4))
            b = F(rng.randint(-4, 4), rng.randint(1, 4))
            q = F(rng.randint(1, 7), 8)
            y0 = F(rng.randint(-3, 3), rng.randint(1, 3))
            s = pantograph_series(PantographParams(a=a, b=b, q=q, y0=y0), 15)
            assert s.coeffs == eq17_oracle(a, b, q, y0, 15)

    def test_initial_value_scales_linearly(self):
        base = pantograph_series(PantographParams(a=F(1), b=F(-1), q=F(1, 4)), 10)
        scaled = pantograph_series(
            PantographParams(a=F(1), b=F(-1), q=F(1, 4), y0=F(3)), 10)
        assert scaled.coeffs == tuple(3 * c for c in base.coeffs)

    def test_fractional_coefficients(self):
        p = PantographParams(a=1, b=1, q=F(1, 2), alpha=F(1, 2))
        s = pantograph_series(p, 4)
        qa = 0.5 ** 0.5
        assert s.coeffs[1] == pytest.approx(2.0 / gamma(1.5), rel=1e-13)
        assert s.coeffs[2] == pytest.approx(2.0 * (1 + qa) / gamma(2.0), rel=1e-13)

    def test_q_range_enforced(self):
        with pytest.raises(DomainError):
            PantographParams(a=1, b=1, q=F(3, 2))

    def test_sam_oracle_equivalence(self):
        for a, b, q in ((F(1), F(1), F(1, 2)),
                        (F(1, 2), F(-1, 2), F(1, 4)),
                        (F(0), F(1), F(3, 4))):
            series = pantograph_series(PantographParams(a=a, b=b, q=q), 21)
            rhs = PolyRHS(((a, 0, 1, 0), (b, 0, 0, 1)), q)
            spec = ProblemSpec(rhs=rhs, alpha=1, y0=F(1), trunc=20, iters=25)
            result = solve(spec)
            assert result.stabilized
            assert result.series.coeffs == series.coeffs[:21]


class TestAmbartsumianSeries:
    def test_reference_setting(self):
        p = AmbartsumianParams(q=F(2))
        s = ambartsumian_series(p, 3)
        assert s.coeffs == (F(1), F(-1, 2), F(3, 16))

    def test_zero_initial_value(self):
        s = ambartsumian_series(AmbartsumianParams(q=F(2), lam=F(0)), 10)
        assert all(c == 0 for c in s.coeffs)

    def test_first_order_coefficient(self):
        s = ambartsumian_series(AmbartsumianParams(q=F(2)), 2)
        assert s.coeffs == (F(1), F(-1, 2))

    def test_q_range_enforced(self):
        for q in (F(1), F(1, 2), F(0)):
            with pytest.raises(DomainError):
                AmbartsumianParams(q=q)

    def test_product_forms_coincide_at_integer_order(self):
        p = AmbartsumianParams(q=2.0, alpha=1.0)
        frac = ambartsumian_series(p, 12, product_form="fractional")
        integer = ambartsumian_series(p, 12, product_form="integer")
        assert frac.coeffs == integer.coeffs

    def test_product_forms_differ_fractionally(self):
        p = AmbartsumianParams(q=2, alpha=F(1, 2))
        frac = ambartsumian_series(p, 5, product_form="fractional")
        integer = ambartsumian_series(p, 5, product_form="integer")
        assert frac.coeffs[1] == pytest.approx(
            (2.0 ** -1.0 - 1.0) / gamma(1.5), rel=1e-13)
        assert frac.coeffs[2] != integer.coeffs[2]

    def test_sam_oracle_equivalence(self):
        # the delayed argument t/q is realized inside the engine by the
        # reciprocal proportional factor
        for q in (F(2), F(3)):
            series = ambartsumian_series(AmbartsumianParams(q=q), 21)
            rhs = PolyRHS(((F(-1), 0, 1, 0), (F(1) / q, 0, 0, 1)), F(1) / q)
            spec = ProblemSpec(rhs=rhs, alpha=1, y0=F(1), trunc=20, iters=25)
            result = solve(spec)
            assert result.stabilized
            assert result.series.coeffs == series.coeffs[:21]


class TestSquareMatrix:
    def test_identity_and_matmul(self):
        eye = SquareMatrix.identity(2)
        m = SquareMatrix(((F(1), F(2)), (F(3), F(4))))
        assert (eye @ m).rows == m.rows
        assert (m @ m).rows == ((F(7), F(10)), (F(15), F(22)))

    def test_matvec(self):
        m = SquareMatrix(((F(1), F(2)), (F(0), F(1))))
        assert m.matvec((F(1), F(1))) == (F(3), F(1))

    def test_dimension_checks(self):
        with pytest.raises(DimError):
            SquareMatrix(((F(1), F(2)),))
        m2 = SquareMatrix.identity(2)
        m3 = SquareMatrix.identity(3)
        with pytest.raises(DimError):
            m2 @ m3
        with pytest.raises(DimError):
            m2.matvec((1, 2, 3))


class TestPantographSystem:
    def test_scalar_reduction(self):
        a, b, q = F(1), F(-1, 2), F(1, 3)
        scalar = pantograph_series(PantographParams(a=a, b=b, q=q), 12)
        system = pantograph_system_series(
            SquareMatrix(((a,),)), SquareMatrix(((b,),)), q, 1, (F(1),), 12)
        assert system.component(0).coeffs == scalar.coeffs

    def test_no_delay_matrix_collapses_to_matrix_exponential(self):
        A = SquareMatrix(((F(0), F(1)), (F(0), F(0))))  # nilpotent
        B = SquareMatrix(((F(0), F(0)), (F(0), F(0))))
        out = pantograph_system_series(A, B, F(1, 2), 1, (F(1), F(1)), 6)
        # exp(A t) @ (1,1) = (1 + t, 1)
        assert out.component(0).coeffs == (F(1), F(1), F(0), F(0), F(0), F(0))
        assert out.component(1).coeffs == (F(1), F(0), F(0), F(0), F(0), F(0))

    def test_diagonal_decoupling(self):
        A = SquareMatrix(((F(1), F(0)), (F(0), F(0))))
        B = SquareMatrix(((F(1), F(0)), (F(0), F(1))))
        out = pantograph_system_series(A, B, F(1, 2), 1, (F(1), F(1)), 16)
        first = pantograph_series(PantographParams(a=F(1), b=F(1), q=F(1, 2)), 16)
        second = pantograph_series(PantographParams(a=F(0), b=F(1), q=F(1, 2)), 16)
        assert out.component(0).coeffs == first.coeffs
        assert out.component(1).coeffs == second.coeffs

    def test_ordered_product_newest_factor_left(self):
        # non-commuting A, B: coefficient 2 must be (A+Bq) @ (A+B) / 2!
        A = SquareMatrix(((F(0), F(1)), (F(0), F(0))))
        B = SquareMatrix(((F(0), F(0)), (F(1), F(0))))
        q = F(1, 2)
        out = pantograph_system_series(A, B, q, 1, (F(1), F(0)), 3)
        f0 = A + B
        f1 = A + B.scaled(q)
        expected = (f1 @ f0).matvec((F(1), F(0)))
        assert out.coeffs[2] == tuple(c / 2 for c in expected)

    def test_paper_literal_flips_exponent(self):
        a, b, q = F(1), F(1), F(1, 2)
        lit = pantograph_system_series(
            SquareMatrix(((a,),)), SquareMatrix(((b,),)), q, 1, (F(1),), 4,
            paper_literal=True)
        # coefficient 2: (a + b*q**-1)(a + b) / 2!
        assert lit.component(0).coeffs[2] == (a + b / q) * (a + b) / 2
        assert lit.component(0).coeffs[3] == (a + b / q ** 2) * (a + b / q) * (a + b) / 6

    def test_dim_mismatch(self):
        with pytest.raises(DimError):
            pantograph_system_series(
                SquareMatrix.identity(2), SquareMatrix.identity(2), F(1, 2), 1,
                (F(1),), 4)

    def test_q_range(self):
        with pytest.raises(DomainError):
            pantograph_system_series(
                SquareMatrix.identity(1), SquareMatrix.identity(1), F(2), 1,
                (F(1),), 4)


class TestAmbartsumianSystem:
    def test_scalar_reduction_first_order(self):
        q = F(3)
        out = ambartsumian_system_series(SquareMatrix(((F(1, 3),),)), q, 1, (F(1),), 2)
        assert out.component(0).coeffs == (F(1), F(1, 3) - 1)

    def test_zero_initial_vector(self):
        out = ambartsumian_system_series(SquareMatrix.identity(2), F(2), 1,
                                         (F(0), F(0)), 6)
        assert all(c == 0 for row in out.coeffs for c in row)

    def test_second_order_coefficient_matches_scalar(self):
        # B = (1/q) I at q = 2: coefficient 2 is (3/16) I applied to lambda
        q = F(2)
        B = SquareMatrix(((F(1, 2), F(0)), (F(0), F(1, 2))))
        out = ambartsumian_system_series(B, q, 1, (F(1), F(1)), 3)
        assert out.coeffs[2] == (F(3, 16), F(3, 16))

    def test_matches_scalar_series_for_reciprocal_diagonal(self):
        for q in (F(2), F(3)):
            B = SquareMatrix(((F(1) / q, F(0)), (F(0), F(1) / q)))
            out = ambartsumian_system_series(B, q, 1, (F(1), F(2)), 16)
            scalar = ambartsumian_series(AmbartsumianParams(q=q), 16)
            assert out.component(0).coeffs == scalar.coeffs
            assert out.component(1).coeffs == tuple(2 * c for c in scalar.coeffs)

    def test_fractional_matches_fractional_scalar(self):
        q = F(2)
        alpha = F(1, 2)
        B = SquareMatrix(((F(1, 2),),))
        out = ambartsumian_system_series(B, q, alpha, (F(1),), 10)
        scalar = ambartsumian_series(AmbartsumianParams(q=q, alpha=alpha), 10)
        for got, want in zip(out.component(0).coeffs, scalar.coeffs):
            assert got == pytest.approx(want, rel=1e-12, abs=1e-300)

    def test_q_range(self):
        with pytest.raises(DomainError):
            ambartsumian_system_series(SquareMatrix.identity(1), F(1, 2), 1, (F(1),), 4)


class TestSandwich:
    def test_reference_order_two(self):
        p = PantographParams(a=F(1), b=F(1), q=F(1, 2))
        report = sandwich_check(p, 3)
        assert report.ok
        assert report.rows[2] == (F(1), F(3), F(4))

    def test_no_delay_degenerate(self):
        p = PantographParams(a=F(1), b=F(0), q=F(1, 2))
        report = sandwich_check(p, 10)
        assert report.ok
        assert all(low == mid == high for low, mid, high in report.rows)

    def test_pure_delay_order_two(self):
        p = PantographParams(a=F(0), b=F(1), q=F(1, 2))
        report = sandwich_check(p, 3)
        assert report.ok
        assert report.rows[2] == (F(0), F(1, 2), F(1))

    def test_negative_coefficients_rejected(self):
        with pytest.raises(DomainError):
            sandwich_check(PantographParams(a=F(-1), b=F(1), q=F(1, 2)), 5)


class TestConvergenceByDoubling:
    @pytest.mark.parametrize("terms", [40, 60])
    def test_integer_order_pantograph(self, terms):
        p = PantographParams(a=F(1), b=F(1), q=F(1, 2))
        short = pantograph_series(p, terms)
        long = pantograph_series(p, 2 * terms)
        assert abs(float(short.eval(5.0)) - float(long.eval(5.0))) < 1e-12

    def test_integer_order_ambartsumian(self):
        p = AmbartsumianParams(q=F(2))
        short = ambartsumian_series(p, 40)
        long = ambartsumian_series(p, 80)
        assert abs(float(short.eval(5.0)) - float(long.eval(5.0))) < 1e-12

    def test_fractional_orders_settle_with_enough_terms(self):
        # the alpha = 1/2 grids need roughly twice the coefficient count to
        # reach the same tail at t = 5
        p = PantographParams(a=1, b=1, q=F(1, 2), alpha=F(1, 2))
        short = pantograph_series(p, 80)
        long = pantograph_series(p, 160)
        assert abs(short.eval(5.0) - long.eval(5.0)) < 1e-12

    def test_term_magnitudes_eventually_decrease(self):
        p = PantographParams(a=F(1), b=F(1), q=F(1, 2))
        s = pantograph_series(p, 60)
        t = 5.0
        mags = [abs(float(c)) * t ** m for m, c in enumerate(s.coeffs)]
        tail = mags[20:]
        assert all(b < a for a, b in zip(tail, tail[1:]))


class TestSystemJson:
    def test_round_trip(self):
        doc = {"A": [[1, 0], [0, 0]], "B": [["1/2", 0], [0, 1]],
               "lambda": [1, "2/3"], "q": "1/2", "alpha": 1}
        parsed = system_from_json(doc)
        assert parsed["A"].rows[0][0] == F(1)
        assert parsed["B"].rows[0][0] == F(1, 2)
        assert parsed["lambda"] == (F(1), F(2, 3))

    def test_optional_a(self):
        doc = {"B": [[1]], "lambda": [1], "q": 2, "alpha": 1}
        parsed = system_from_json(doc)
        assert "A" not in parsed

    @pytest.mark.parametrize("mutate, field", [
        (lambda d: d.pop("B"), "B"),
        (lambda d: d.pop("lambda"), "lambda"),
        (lambda d: d.__setitem__("B", [[1, 2]]), "B"),
        (lambda d: d.__setitem__("lambda", []), "lambda"),
        (lambda d: d.__setitem__("q", [1]), "q"),
    ])
    def test_malformed(self, mutate, field):
        doc = {"A": [[1]], "B": [[1]], "lambda": [1], "q": "1/2", "alpha": 1}
        mutate(doc)
        with pytest.raises(FormatError) as exc_info:
            system_from_json(doc)
        assert field in str(exc_info.value)
