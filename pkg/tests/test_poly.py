"""Tests for polynomial arithmetic, orders and the degree sentinel."""

from fractions import Fraction

import pytest

from poly import (GREVLEX, LEX, MINUS_INFINITY, AmbientMismatchError, DivisionError, MonomialOrder, Polynomial,
                  ZeroPolynomialError, determinant, divide, exact_divide, is_minus_infinity, leading_term,
                  multiply, partial_derivative, polynomial_ring)
from tests.conftest import poly

XY = ("x", "y")
X123 = ("x1", "x2", "x3")


class TestArithmetic:
    """Ring operations on the canonical sparse form."""

    def test_multiply_difference_of_squares(self):
        x, y = polynomial_ring(XY)
        assert multiply(x + y, x - y) == x ** 2 - y ** 2

    def test_multiply_by_zero(self):
        x, _ = polynomial_ring(XY)
        assert multiply(x, Polynomial.zero(XY)).is_zero()

    def test_ambient_mismatch(self):
        x, _ = polynomial_ring(XY)
        z = Polynomial.variable(("z",), 0)
        with pytest.raises(AmbientMismatchError):
            x + z

    def test_rational_coefficients_exact(self):
        p = poly("1/3*x + 2/3*x", XY)
        assert p == Polynomial.variable(XY, "x")

    def test_scalar_equality(self):
        assert Polynomial.constant(XY, 5) == 5
        assert Polynomial.zero(XY) == 0

    def test_power_zero_is_one(self):
        x, _ = polynomial_ring(XY)
        assert (x + 1) ** 0 == 1

    def test_negative_power_rejected(self):
        x, _ = polynomial_ring(XY)
        with pytest.raises(ValueError):
            x ** -1


class TestDerivativesAndEvaluation:

    def test_partial_derivative_of_circle(self):
        p = poly("x1^2 + x2^2 - 1", X123[:2])
        assert partial_derivative(p, 0) == poly("2*x1", X123[:2])

    def test_derivative_of_constant(self):
        assert Polynomial.constant(XY, 7).derivative(1).is_zero()

    def test_mixed_derivative(self):
        p = poly("x^3*y^2", XY)
        assert p.derivative(0).derivative(1) == poly("6*x^2*y", XY)

    @pytest.mark.parametrize("point,expected", [
        ((0, 1), 0),
        ((Fraction(3, 5), Fraction(4, 5)), 0),
        ((1, 1), 1),
    ])
    def test_evaluate_circle(self, point, expected):
        p = poly("x1^2 + x2^2 - 1", X123[:2])
        assert p.evaluate(point) == expected

    def test_substitute(self):
        p = poly("x^2 + y", XY)
        x, y = polynomial_ring(XY)
        assert p.substitute([y, x]) == poly("y^2 + x", XY)

    def test_translate(self):
        p = poly("x*y", XY)
        assert p.translate([1, 2]) == poly("x*y + 2*x + y + 2", XY)


class TestDegree:

    def test_zero_degree_is_sentinel(self):
        assert is_minus_infinity(Polynomial.zero(XY).degree())

    def test_sentinel_below_integers(self):
        assert MINUS_INFINITY < 0
        assert 0 > MINUS_INFINITY
        assert max(MINUS_INFINITY, 3) == 3

    def test_sentinel_refuses_arithmetic(self):
        with pytest.raises(TypeError):
            MINUS_INFINITY + 1

    def test_total_degree(self):
        assert poly("x^2*y + y - 1", XY).degree() == 3

    def test_homogeneous(self):
        assert poly("x^2 + x*y", XY).is_homogeneous()
        assert not poly("x^2 + y", XY).is_homogeneous()


class TestOrders:
    """Leading terms under lex, grevlex and lex with a variable priority."""

    def test_grevlex_leading_term(self):
        p = poly("x1*x2 + x1^2 + x3^2", X123)
        assert leading_term(p, GREVLEX) == ((2, 0, 0), 1)

    def test_lex_leading_term(self):
        p = poly("x2^5 + x1", X123)
        assert leading_term(p, LEX)[0] == (1, 0, 0)

    def test_grevlex_prefers_degree(self):
        p = poly("x2^5 + x1", X123)
        assert leading_term(p, GREVLEX)[0] == (0, 5, 0)

    def test_grevlex_tie_break(self):
        # x1*x3 < x2^2 in grevlex: smaller power of the last variable wins
        p = poly("x1*x3 + x2^2", X123)
        assert leading_term(p, GREVLEX)[0] == (0, 2, 0)

    def test_priority_lex(self):
        order = MonomialOrder('lex', (1, 0))
        p = poly("y + x^5", XY)
        assert leading_term(p, order)[0] == (0, 1)

    def test_priority_must_be_permutation(self):
        with pytest.raises(ValueError):
            MonomialOrder('lex', (0, 0))

    def test_leading_term_of_zero(self):
        with pytest.raises(ZeroPolynomialError):
            leading_term(Polynomial.zero(XY))


class TestDivision:

    def test_exact_divide(self):
        p = poly("x^2 - y^2", XY)
        assert exact_divide(p, poly("x - y", XY)) == poly("x + y", XY)

    def test_divide_remainder(self):
        q, r = divide(poly("x^2 + 1", XY), poly("x", XY))
        assert q == poly("x", XY) and r == 1

    def test_exact_divide_raises(self):
        with pytest.raises(DivisionError):
            exact_divide(poly("x^2 + 1", XY), poly("x", XY))

    def test_divide_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            divide(poly("x", XY), Polynomial.zero(XY))


class TestDeterminant:

    def test_two_by_two(self):
        names = ("a", "b", "c", "d")
        a, b, c, d = polynomial_ring(names)
        assert determinant([[a, b], [c, d]]) == a * d - b * c

    def test_three_by_three_identity_value(self):
        names = tuple(f"x{i}{j}" for i in range(1, 4) for j in range(1, 4))
        xs = polynomial_ring(names)
        M = [list(xs[3 * i:3 * i + 3]) for i in range(3)]
        identity = [1 if i == j else 0 for i in range(3) for j in range(3)]
        assert determinant(M).evaluate(identity) == 1
