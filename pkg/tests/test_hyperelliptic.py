"""Tests for hyperelliptic curves, their degree filtration and bounded bracket checks."""

import pytest

from hyperelliptic import (GradedSeriesElement, HEElement, HyperellipticCurve, field_basis, field_bracket,
                           field_degree, graded_bracket, graded_fields_commute, he_degree, he_multiply, in_semigroup,
                           kernel_ad_bounded, leading_term_map, module_generators, monomial_basis,
                           not_in_image_check, smoothness_gcd, tau_apply, univariate_gcd)
from poly import is_minus_infinity
from tests.conftest import CURVE_TAU, poly
from vecfield import ZeroFieldError

X = ("x",)


class TestCurve:

    @pytest.mark.parametrize("h", ["x^2 + 1", "x^4 - x", "2*x^3 + 1", "x", "0"])
    def test_rejects(self, h):
        with pytest.raises(ValueError):
            HyperellipticCurve(h)

    def test_from_line(self):
        C = HyperellipticCurve.from_line("h: x^5 - x")
        assert C.m == 2
        assert C.dh == poly("5*x^4 - 1", X)

    def test_equation(self, smooth_curve):
        assert smooth_curve.equation == poly("y^2 - 2*x^3 - 2", ("x", "y"))

    @pytest.mark.parametrize("h,gcd", [("x^3 + 1", "1"), ("x^3 + x^2", "x"), ("x^3", "x^2"), ("x^5 - x", "1")])
    def test_smoothness_gcd(self, h, gcd):
        C = HyperellipticCurve(h)
        assert smoothness_gcd(C) == poly(gcd, X)
        assert C.is_smooth() == (gcd == "1")

    def test_univariate_gcd(self):
        assert univariate_gcd(poly("x^2 - 1", X), poly("2*x - 2", X)) == poly("x - 1", X)
        assert univariate_gcd(poly("0", X), poly("0", X)).is_zero()


class TestRing:

    def test_y_squared(self, smooth_curve):
        y = smooth_curve.y()
        assert y * y == smooth_curve.element("2*x^3 + 2")

    def test_he_multiply(self, smooth_curve):
        y = smooth_curve.y()
        assert he_multiply(y, y, smooth_curve) == smooth_curve.element("2*x^3 + 2")
        u = smooth_curve.element("x", "1")
        assert he_multiply(u, u, smooth_curve) == smooth_curve.element("2*x^3 + x^2 + 2", "2*x")

    def test_from_polynomial(self, smooth_curve):
        u = HEElement.from_polynomial(smooth_curve, poly("y^3 + x", ("x", "y")))
        assert u == smooth_curve.element("x", "2*x^3 + 2")

    def test_to_polynomial(self, smooth_curve):
        assert smooth_curve.element("x", "1").to_polynomial() == poly("x + y", ("x", "y"))

    def test_scalar_arithmetic(self, smooth_curve):
        u = smooth_curve.x() + 1
        assert u * 2 == smooth_curve.element("2*x + 2")
        assert (u - u).is_zero()


class TestGenerators:

    def test_smooth(self, smooth_curve):
        gens = module_generators(smooth_curve)
        assert gens.mu is None
        assert [str(f) for f in gens.fields] == [CURVE_TAU]

    def test_node(self):
        gens = module_generators(HyperellipticCurve("x^3 + x^2"))
        assert gens.d == poly("x", X)
        assert str(gens.mu) == "2*x^2 + 2*x, 3*x*y + 2*y"

    def test_cusp_gives_euler_field(self):
        gens = module_generators(HyperellipticCurve("x^3"))
        assert str(gens.mu) == "2*x, 3*y"
        assert gens.to_json()["d"] == "x^2"


class TestDegrees:

    def test_degrees(self, smooth_curve):
        assert he_degree(smooth_curve.x()) == 2
        assert he_degree(smooth_curve.y()) == 3
        assert he_degree(smooth_curve.element("x^2", "x")) == 5
        assert is_minus_infinity(he_degree(smooth_curve.zero()))

    def test_field_degree(self, smooth_curve):
        assert field_degree(smooth_curve.one()) == 1
        assert field_degree(smooth_curve.x()) == 3

    def test_tau(self, smooth_curve):
        assert tau_apply(smooth_curve.x()) == smooth_curve.y()
        assert tau_apply(smooth_curve.y()) == smooth_curve.element("3*x^2")
        assert tau_apply(smooth_curve.one()).is_zero()

    def test_bracket_antisymmetric(self, smooth_curve):
        f, g = smooth_curve.x(), smooth_curve.element("1", "x")
        assert field_bracket(f, g) == -field_bracket(g, f)

    @pytest.mark.parametrize("d,m,expected", [(0, 1, True), (1, 1, False), (3, 1, True), (3, 2, False),
                                              (5, 2, True), (-2, 1, False)])
    def test_semigroup(self, d, m, expected):
        assert in_semigroup(d, m) == expected

    def test_leading_terms(self, smooth_curve):
        assert str(leading_term_map(smooth_curve.x())) == "2*t^2"
        assert str(leading_term_map(smooth_curve.y())) == "4*t^3"

    def test_leading_term_of_relation(self, smooth_curve):
        y = smooth_curve.y()
        assert leading_term_map(y * y) == leading_term_map(y) ** 2

    def test_leading_term_of_zero(self, smooth_curve):
        with pytest.raises(ValueError):
            leading_term_map(smooth_curve.zero())

    def test_graded_support(self):
        with pytest.raises(ValueError):
            GradedSeriesElement.monomial(1, 1, 1)
        assert str(GradedSeriesElement.monomial(1, 3, 0)) == "0"

    def test_graded_bracket(self):
        assert graded_bracket(1, 2) == (1, 2)
        assert graded_fields_commute(3, 3)
        assert not graded_fields_commute(2, 3)


class TestBoundedChecks:

    def test_monomial_basis(self, smooth_curve):
        assert [he_degree(u) for u in monomial_basis(smooth_curve, 5)] == [0, 2, 3, 4, 5]

    def test_field_basis_respects_bound(self, smooth_curve):
        assert all(field_degree(g) <= 9 for g in field_basis(smooth_curve, 9))

    def test_kernel_of_tau_is_constants(self, smooth_curve):
        assert kernel_ad_bounded(smooth_curve, smooth_curve.one(), 10) == [smooth_curve.one()]

    def test_kernel_contains_the_field(self, smooth_curve):
        f = smooth_curve.x()
        kernel = kernel_ad_bounded(smooth_curve, f, 10)
        assert len(kernel) == 1
        assert field_bracket(f, kernel[0]).is_zero()

    @pytest.mark.parametrize("f", [("1", "0"), ("x", "0"), ("0", "1")])
    def test_not_in_image(self, smooth_curve, f):
        report = not_in_image_check(smooth_curve, smooth_curve.element(*f), bound=8)
        assert report.ok, report.to_json()

    def test_singular_curve_rejected(self):
        C = HyperellipticCurve("x^3")
        with pytest.raises(ValueError):
            not_in_image_check(C, C.one())

    def test_zero_field_rejected(self, smooth_curve):
        with pytest.raises(ZeroFieldError):
            kernel_ad_bounded(smooth_curve, smooth_curve.zero())
