"""Tests for the sphere: rotations, the sl_N action and harmonic decomposition."""

import random

import pytest

from poly import Polynomial
from sphere import (SlElement, SphereContext, commutator, delta_field, delta_relation, double_factorial,
                    forms_of_degree, generation_check, harmonic_decompose, harmonic_dimension,
                    harmonic_dimension_formula, harmonic_project, harmonic_spanning_set, homogenize, laplacian,
                    parity_preserved, rotation_fields, sl_basis, sl_bracket_check, sl_embedding, spread_check)
from tests.conftest import poly

X123 = ("x1", "x2", "x3")


class TestContext:

    def test_too_small(self):
        with pytest.raises(ValueError):
            SphereContext(1)

    def test_two_sphere_is_smooth_surface(self, sphere3):
        assert sphere3.check()

    @pytest.mark.parametrize("N,count", [(2, 1), (3, 3), (4, 6)])
    def test_rotation_count(self, N, count):
        assert len(rotation_fields(SphereContext(N))) == count

    def test_delta_field(self, sphere3):
        assert str(delta_field(sphere3, 1, 2)) == "x2, -x1, 0"

    def test_delta_needs_distinct_indices(self, sphere3):
        with pytest.raises(ValueError):
            delta_field(sphere3, 2, 2)

    def test_delta_relation_vanishes(self, sphere3):
        assert delta_relation(sphere3, 1, 2, 3).is_zero()


class TestSl:

    def test_basis_size(self):
        assert len(sl_basis(3)) == 8

    def test_element_names(self):
        assert str(SlElement('offdiag', 1, 2)) == "E12"
        assert str(SlElement('diag', 1, 2)) == "E11-E22"

    def test_bad_elements(self):
        with pytest.raises(ValueError):
            SlElement('diag', 1, 1)
        with pytest.raises(ValueError):
            SlElement('upper', 1, 2)
        with pytest.raises(ValueError):
            SlElement('offdiag', 1, 4).matrix(3)

    def test_commutator(self):
        E12 = SlElement('offdiag', 1, 2).matrix(2)
        E21 = SlElement('offdiag', 2, 1).matrix(2)
        assert commutator(E12, E21) == SlElement('diag', 1, 2).matrix(2)

    def test_circle_embedding(self):
        ctx = SphereContext(2)
        assert str(sl_embedding(ctx, SlElement('offdiag', 1, 2))) == "x2^3, -x1*x2^2"

    def test_embedding_is_linear(self, sphere3):
        E12 = SlElement('offdiag', 1, 2)
        E21 = SlElement('offdiag', 2, 1)
        M = [[a + b for a, b in zip(r, s)] for r, s in zip(E12.matrix(3), E21.matrix(3))]
        assert sl_embedding(sphere3, M) == sl_embedding(sphere3, E12) + sl_embedding(sphere3, E21)

    def test_brackets_reverse_on_circle(self):
        report = sl_bracket_check(SphereContext(2))
        assert report['pairs'] == 9
        assert report['ok'], report

    @pytest.mark.slow
    def test_brackets_reverse_on_two_sphere(self, sphere3):
        report = sl_bracket_check(sphere3)
        assert report['failures'] == [] and report['so_failures'] == []


class TestHarmonics:

    @pytest.mark.parametrize("n,expected", [(-1, 1), (0, 1), (1, 1), (5, 15), (6, 48)])
    def test_double_factorial(self, n, expected):
        assert double_factorial(n) == expected

    def test_double_factorial_domain(self):
        with pytest.raises(ValueError):
            double_factorial(-3)

    def test_laplacian(self):
        assert laplacian(poly("x1^3 + x2^2*x3", X123)) == poly("6*x1 + 2*x3", X123)

    def test_project_square(self):
        assert harmonic_project(poly("x1^2", X123)) == poly("2/3*x1^2 - 1/3*x2^2 - 1/3*x3^2", X123)

    @pytest.mark.parametrize("text", ["x1^3", "x1^2*x2", "x1^4 + x2*x3^3", "x1*x2*x3"])
    def test_projection_is_harmonic(self, text):
        assert laplacian(harmonic_project(poly(text, X123))).is_zero()

    def test_harmonic_forms_are_fixed(self):
        h = poly("x1*x2", X123)
        assert harmonic_project(h) == h

    @pytest.mark.parametrize("text", ["x1^4", "x1^2*x2^2 + x3^4", "x1^3*x2"])
    def test_decompose_reassembles(self, text):
        f = poly(text, X123)
        decomposition = harmonic_decompose(f)
        assert decomposition.reassemble() == f
        assert all(laplacian(h).is_zero() for _, h in decomposition.components)

    def test_decompose_levels(self):
        decomposition = harmonic_decompose(poly("x1^4", X123))
        assert [level for level, _ in decomposition.components] == [4, 2, 0]

    @pytest.mark.parametrize("text,kwargs", [
        ("x1 + x2^2", {}),
        ("0", {}),
        ("x1^2", {"degree": 3}),
        ("x1^2", {"N": 2}),
    ])
    def test_project_rejects(self, text, kwargs):
        with pytest.raises(ValueError):
            harmonic_project(poly(text, X123), **kwargs)

    @pytest.mark.parametrize("N,l", [(3, 0), (3, 1), (3, 2), (3, 3), (3, 4), (4, 2), (4, 3), (5, 2)])
    def test_dimension_matches_formula(self, N, l):
        assert harmonic_dimension(N, l) == harmonic_dimension_formula(N, l)

    def test_dimension_values(self):
        assert harmonic_dimension(3, 3) == 7
        assert harmonic_dimension_formula(4, 2) == 9

    def test_spanning_set_spans(self, sphere3):
        from linalg import polynomial_rank
        assert polynomial_rank(harmonic_spanning_set(sphere3, 2)) == 5


def random_form(rng, variables, degree):
    """A nonzero degree-`degree` form with small integer coefficients."""
    while True:
        f = Polynomial.zero(variables)
        for m in forms_of_degree(variables, degree):
            f = f + m * rng.randint(-3, 3)
        if not f.is_zero():
            return f


def random_harmonic(rng, variables, degree):
    while True:
        h = harmonic_project(random_form(rng, variables, degree), degree=degree)
        if not h.is_zero():
            return h


class TestProjection:

    @pytest.mark.parametrize("l", range(7))
    def test_idempotent(self, l):
        rng = random.Random(l)
        for _ in range(5):
            p = harmonic_project(random_form(rng, X123, l), degree=l)
            assert laplacian(p).is_zero()
            assert harmonic_project(p, degree=l) == p

    @pytest.mark.parametrize("l", range(7))
    def test_identity_on_harmonics(self, sphere3, l):
        spanning = harmonic_spanning_set(sphere3, l)
        assert len(spanning) >= harmonic_dimension(3, l)
        for h in spanning:
            assert harmonic_project(h, degree=l) == h


class TestHomogenize:

    def test_lift_to_form(self):
        assert homogenize(poly("x1^2 - 1", X123), 2) == poly("-x2^2 - x3^2", X123)

    def test_zero(self):
        assert homogenize(Polynomial.zero(X123), 4).is_zero()

    @pytest.mark.parametrize("text,degree", [("x1 + 1", 2), ("x1^3", 2)])
    def test_mismatch(self, text, degree):
        with pytest.raises(ValueError):
            homogenize(poly(text, X123), degree)

    def test_parity(self, sphere3):
        assert parity_preserved(sphere3, poly("x1*x2", X123))
        assert parity_preserved(sphere3, poly("x3", X123))
        with pytest.raises(ValueError):
            parity_preserved(sphere3, poly("x1 + x2^2", X123))


class TestSpreadAndGeneration:

    @pytest.mark.parametrize("h,element", [
        ("x1", SlElement('offdiag', 1, 2)),
        ("x1*x2", SlElement('diag', 1, 2)),
        ("x1^2 - x3^2", SlElement('offdiag', 3, 1)),
    ])
    def test_spread(self, sphere3, h, element):
        report = spread_check(poly(h, X123), element, sphere3)
        assert report.ok
        assert set(report.components) == {report.level + 2, report.level, report.level - 2}

    def test_spread_needs_harmonic(self, sphere3):
        with pytest.raises(ValueError):
            spread_check(poly("x1^2", X123), SlElement('offdiag', 1, 2), sphere3)

    def test_spread_random_harmonics(self, sphere3):
        rng = random.Random(7)
        elements = sl_basis(3)
        for _ in range(50):
            l = rng.randint(1, 4)
            h = random_harmonic(rng, X123, l)
            element = rng.choice(elements)
            report = spread_check(h, element, sphere3)
            assert report.ok, report.to_json()
            assert report.level == l

    @pytest.mark.parametrize("l,direction,target", [
        (1, 'up', 3),
        (2, 'up', 4),
        (3, 'up', 5),
        pytest.param(4, 'up', 6, marks=pytest.mark.slow),
        (2, 'down', 0),
        (3, 'down', 1),
        (4, 'down', 2),
    ])
    def test_generation(self, sphere3, l, direction, target):
        report = generation_check(sphere3, l, direction)
        assert report.target_level == target
        assert report.ok, report.to_json()

    def test_constants_do_not_generate(self, sphere3):
        report = generation_check(sphere3, 0, 'up')
        assert report.rank == 0 and not report.ok

    @pytest.mark.parametrize("l,direction", [(1, 'down'), (-1, 'up'), (2, 'sideways')])
    def test_bad_steps(self, sphere3, l, direction):
        with pytest.raises(ValueError):
            generation_check(sphere3, l, direction)

    def test_generation_needs_three_variables(self):
        with pytest.raises(ValueError):
            generation_check(SphereContext(2), 1)
