"""Tests for the polynomial and vector-field text grammar."""

from fractions import Fraction

import pytest

from poly import Polynomial
from polyparse import (MAX_EXPONENT, ParseError, SourceSpan, format_polynomial, format_vector_field, parse_point,
                       parse_polynomial, parse_polynomial_lines, parse_vector_field, validate_variables)
from tests.conftest import DATA_DIR

XY = ("x", "y")
X12 = ("x1", "x2")


class TestParsePolynomial:
    """Valid inputs and their canonical polynomials."""

    def test_circle(self):
        p = parse_polynomial("x1^2 + x2^2 - 1", X12)
        assert p.terms == {(2, 0): 1, (0, 2): 1, (0, 0): -1}

    def test_zero(self):
        assert parse_polynomial("0", X12).is_zero()

    def test_curve_with_parentheses(self):
        assert parse_polynomial("y^2 - 2*(x^3 + 1)", XY) == parse_polynomial("y^2 - 2*x^3 - 2", XY)

    def test_rational_literal(self):
        p = parse_polynomial("1/3*x", XY)
        assert p.coefficient((1, 0)) == Fraction(1, 3)

    def test_unary_minus_binds_looser_than_power(self):
        assert parse_polynomial("-x^2", XY).coefficient((2, 0)) == -1

    def test_power_right_associative(self):
        assert parse_polynomial("x^2^3", XY) == parse_polynomial("x^8", XY)

    def test_whitespace_insensitive(self):
        assert parse_polynomial("  x*y+1 ", XY) == parse_polynomial("x * y + 1", XY)


class TestParseErrors:
    """Every violation carries a kind and a span inside the input."""

    @pytest.mark.parametrize("text,kind", [
        ("", "empty-input"),
        ("   ", "empty-input"),
        ("2x", "unexpected-token"),
        ("x y", "unexpected-token"),
        ("z + 1", "unknown-variable"),
        ("x^y", "bad-exponent"),
        ("x^-1", "bad-exponent"),
        ("(x + 1", "unexpected-token"),
        ("x / y", "unexpected-token"),
        ("x / 0", "unexpected-token"),
        ("x $ 1", "unexpected-token"),
    ])
    def test_error_kinds(self, text, kind):
        with pytest.raises(ParseError) as info:
            parse_polynomial(text, XY)
        assert info.value.kind == kind
        assert 0 <= info.value.span.start <= info.value.span.end <= len(text.encode("utf-8"))

    def test_unknown_variable_span(self):
        with pytest.raises(ParseError) as info:
            parse_polynomial("x + zz", XY)
        assert info.value.span == SourceSpan(4, 6)

    def test_implicit_multiplication_span(self):
        with pytest.raises(ParseError) as info:
            parse_polynomial("2x", XY)
        assert info.value.span == SourceSpan(1, 2)

    @pytest.mark.parametrize("text,span", [
        ("x^1001", SourceSpan(1, 6)),
        ("x^100000", SourceSpan(1, 8)),
        ("2^100^100", SourceSpan(1, 9)),
        ("y + x^2^10", SourceSpan(5, 10)),
    ])
    def test_exponent_limit(self, text, span):
        with pytest.raises(ParseError) as info:
            parse_polynomial(text, XY)
        assert info.value.kind == "bad-exponent"
        assert info.value.span == span

    def test_exponent_at_limit(self):
        assert parse_polynomial(f"x^{MAX_EXPONENT}", XY).degree() == MAX_EXPONENT
        assert parse_polynomial("x^3^2", XY) == parse_polynomial("x^9", XY)
        assert parse_polynomial("x^1^1000", XY) == parse_polynomial("x", XY)

    @pytest.mark.parametrize("names", [[], ["1x"], ["x", "x"]])
    def test_bad_variable_lists(self, names):
        with pytest.raises(ValueError):
            validate_variables(names)


class TestFormat:

    @pytest.mark.parametrize("text,variables,expected", [
        ("x^2 - 1", ("x",), "x^2 - 1"),
        ("0", ("x",), "0"),
        ("-x2 + 2*x2*x1", X12, "2*x1*x2 - x2"),
        ("-1/3*x1^2", X12, "-1/3*x1^2"),
        ("3*x^2", XY, "3*x^2"),
    ])
    def test_canonical_text(self, text, variables, expected):
        assert format_polynomial(parse_polynomial(text, variables)) == expected

    def test_roundtrip_golden_file(self):
        text = (DATA_DIR / "polynomials.txt").read_text()
        variables = ("x1", "x2", "x3")
        for p in parse_polynomial_lines(text, variables):
            assert parse_polynomial(format_polynomial(p), variables) == p

    def test_golden_file_is_canonical(self):
        lines = [ln for ln in (DATA_DIR / "polynomials.txt").read_text().splitlines()
                 if ln.strip() and not ln.startswith("#")]
        variables = ("x1", "x2", "x3")
        for line in lines:
            assert format_polynomial(parse_polynomial(line, variables)) == line


class TestVectorFields:

    def test_rotation_field(self):
        comps = parse_vector_field("x2, -x1", X12)
        assert comps == [Polynomial.variable(X12, 1), -Polynomial.variable(X12, 0)]

    def test_zero_field(self):
        assert all(c.is_zero() for c in parse_vector_field("0, 0", X12))

    def test_tau(self):
        comps = parse_vector_field("y, 3*x^2", XY)
        assert format_vector_field(comps) == "y, 3*x^2"

    def test_commas_inside_parentheses_do_not_split(self):
        with pytest.raises(ParseError):
            parse_vector_field("(x, y)", XY)

    def test_wrong_arity(self):
        with pytest.raises(ParseError) as info:
            parse_vector_field("x, y, 1", XY)
        assert info.value.span == SourceSpan(0, 7)

    def test_component_error_span_is_shifted(self):
        with pytest.raises(ParseError) as info:
            parse_vector_field("x, q", XY)
        assert info.value.kind == "unknown-variable"
        assert info.value.span == SourceSpan(3, 4)


class TestLinesAndPoints:

    def test_comment_lines_skipped(self):
        polys = parse_polynomial_lines("# circle\nx1^2 + x2^2 - 1\n\nx1\n", X12)
        assert len(polys) == 2

    def test_line_error_span_is_absolute(self):
        with pytest.raises(ParseError) as info:
            parse_polynomial_lines("x1\nx1 + w\n", X12)
        assert info.value.span == SourceSpan(8, 9)

    @pytest.mark.parametrize("text,expected", [
        ("0,1", (0, 1)),
        ("(3/5, 4/5)", (Fraction(3, 5), Fraction(4, 5))),
        ("-1, 0", (-1, 0)),
    ])
    def test_parse_point(self, text, expected):
        assert parse_point(text, 2) == expected

    def test_point_dimension_checked(self):
        with pytest.raises(ValueError):
            parse_point("1,2,3", 2)
