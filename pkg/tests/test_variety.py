"""Tests for varieties: coordinate rings, the Jacobian criterion, charts and jets."""

from fractions import Fraction

import pytest

from poly import Polynomial
from tests.conftest import VARIETIES_DIR, poly
from variety import (EmptyVarietyError, JetError, JetSeries, PointNotOnVarietyError, SingularPointError, Variety,
                     dimension, is_singular_point, is_smooth, jacobian, jacobian_rank, jet_expansion, load_variety,
                     local_chart, parse_variety, quotient_normal_form, rational_points, singular_ideal, small_rationals,
                     tangent_space)

X12 = ("x1", "x2")


class TestCoordinateRing:

    def test_reduction_identifies_circle_relation(self, circle):
        assert circle.element("x1^2") == circle.element("1 - x2^2")

    def test_generator_is_zero(self, circle):
        assert circle.element("x1^2 + x2^2 - 1").is_zero()

    def test_arithmetic_stays_reduced(self, circle):
        u = circle.element("x1")
        assert u * u + circle.element("x2^2") == 1

    def test_quotient_normal_form_under_curve_order(self):
        X = load_variety(VARIETIES_DIR / "curve.var")
        assert quotient_normal_form(poly("y^2 + x", ("x", "y")), X).rep == poly("2*x^3 + x + 2", ("x", "y"))

    def test_contains_polynomial(self, curve):
        assert curve.contains_polynomial(poly("x*(y^2 - 2*x^3 - 2)", ("x", "y")))
        assert not curve.contains_polynomial(poly("y", ("x", "y")))

    def test_empty_variety(self):
        X = Variety(("x", "y"), [poly("x", ("x", "y")), poly("x - 1", ("x", "y"))])
        with pytest.raises(EmptyVarietyError):
            X.groebner

    def test_zero_generators_dropped(self):
        X = Variety(X12, [Polynomial.zero(X12)])
        assert X.m == 0

    def test_generator_ambient_checked(self):
        with pytest.raises(ValueError):
            Variety(X12, [poly("x", ("x", "y"))])


class TestPoints:

    @pytest.mark.parametrize("point", [(0, 1), (1, 0), (Fraction(3, 5), Fraction(4, 5)), (Fraction(-5, 13), Fraction(12, 13))])
    def test_points_on_circle(self, circle, point):
        assert circle.contains_point(point)

    def test_point_off_circle(self, circle):
        with pytest.raises(PointNotOnVarietyError):
            circle.check_point((1, 1))

    def test_point_dimension(self, circle):
        with pytest.raises(ValueError):
            circle.contains_point((1, 0, 0))

    def test_small_rationals(self):
        assert small_rationals(1) == [0, -1, 1]
        assert Fraction(1, 2) in small_rationals(2)

    def test_rational_points_on_circle(self, circle):
        points = rational_points(circle, height=2)
        assert (0, 1) in points and (1, 0) in points
        assert all(circle.contains_point(p) for p in points)

    def test_rational_points_respect_limit(self, plane):
        assert len(rational_points(plane, height=3, limit=7)) == 7


class TestJacobianCriterion:

    def test_jacobian(self, circle):
        assert jacobian(circle) == [[poly("2*x1", X12), poly("2*x2", X12)]]

    @pytest.mark.parametrize("fixture,expected", [
        ("circle", 1), ("curve", 1), ("cusp", 1), ("node", 1), ("plane", 2),
    ])
    def test_dimension(self, request, fixture, expected):
        assert dimension(request.getfixturevalue(fixture)) == expected

    @pytest.mark.parametrize("fixture", ["circle", "curve", "plane"])
    def test_smooth_with_certificate(self, request, fixture):
        certificate = is_smooth(request.getfixturevalue(fixture))
        assert certificate
        assert certificate.expand() == 1

    @pytest.mark.parametrize("fixture", ["cusp", "node"])
    def test_singular(self, request, fixture):
        X = request.getfixturevalue(fixture)
        assert not is_smooth(X)
        assert is_singular_point(X, (0, 0))

    def test_nonsingular_points_of_singular_curves(self, cusp, node):
        assert not is_singular_point(cusp, (2, 4))
        assert not is_singular_point(node, (-1, 0))

    def test_singular_ideal_of_plane_is_unit(self, plane):
        assert singular_ideal(plane) == [plane.element(1)]

    def test_group_hypersurface(self):
        X = load_variety(VARIETIES_DIR / "sl2.var")
        assert jacobian_rank(X) == 1
        assert dimension(X) == 3
        assert is_smooth(X)

    def test_tangent_line_of_circle(self, circle):
        (v,) = tangent_space(circle, (1, 0))
        assert v[0] == 0 and v[1] != 0


class TestCharts:

    def test_circle_chart_at_north_pole(self, circle):
        chart = local_chart(circle, (0, 1))
        assert chart.free == (0,) and chart.leading == (1,)
        assert chart.h == poly("2*x2", X12)
        assert chart.tau == [[poly("2*x2", X12), poly("-2*x1", X12)]]

    def test_chart_at_singular_point(self, cusp):
        with pytest.raises(SingularPointError):
            local_chart(cusp, (0, 0))

    def test_jet_of_circle(self, circle):
        chart = local_chart(circle, (0, 1))
        jet = jet_expansion(circle, chart, poly("x2", X12), 5)
        assert jet.poly == poly("1 - 1/2*t1^2 - 1/8*t1^4", ("t1",))

    def test_jet_of_free_coordinate(self, circle):
        chart = local_chart(circle, (0, 1))
        assert jet_expansion(circle, chart, poly("x1", X12), 3).poly == poly("t1", ("t1",))

    def test_jet_order_positive(self, circle):
        chart = local_chart(circle, (0, 1))
        with pytest.raises(ValueError):
            jet_expansion(circle, chart, poly("x1", X12), 0)


class TestJetSeries:

    def test_geometric_inverse(self):
        s = JetSeries(poly("1 - t", ("t",)), 4)
        assert s.inverse().poly == poly("1 + t + t^2 + t^3", ("t",))

    def test_non_unit_not_invertible(self):
        with pytest.raises(JetError):
            JetSeries(poly("t", ("t",)), 3).inverse()

    def test_truncation_on_multiply(self):
        s = JetSeries(poly("1 + t", ("t",)), 2)
        assert (s * s).poly == poly("1 + 2*t", ("t",))

    def test_lowest_part(self):
        s = JetSeries(poly("t^2 + t^3", ("t",)), 5)
        assert s.lowest_part() == (2, poly("t^2", ("t",)))


class TestVarietyFiles:

    def test_load_names_by_stem(self):
        assert load_variety(VARIETIES_DIR / "circle.var").name == "circle"

    def test_order_line(self):
        X = load_variety(VARIETIES_DIR / "curve.var")
        assert X.order.kind == "lex" and X.order.priority == (1, 0)

    @pytest.mark.parametrize("text", [
        "x^2 - 1\nvars: x",
        "vars: x\norder: degrevlex\nx",
        "vars: x\norder: lex y\nx",
        "# nothing declared\n",
    ])
    def test_bad_files(self, text):
        with pytest.raises(ValueError):
            parse_variety(text)
