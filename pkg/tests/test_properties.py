"""Tests for the randomized property suites."""

import random

import pytest

from properties import SUITES, PropertyResult, random_polynomial, random_rational, run_suites


class TestGenerators:

    def test_rational_height(self):
        rng = random.Random(0)
        for _ in range(50):
            q = random_rational(rng, height=3)
            assert abs(q.numerator) <= 3 and q.denominator <= 3

    def test_polynomial_degree(self):
        rng = random.Random(1)
        for _ in range(20):
            p = random_polynomial(rng, ("x", "y"), max_degree=2)
            assert p.is_zero() or p.degree() <= 2

    def test_seeded(self):
        a = random_polynomial(random.Random(5), ("x", "y", "z"))
        b = random_polynomial(random.Random(5), ("x", "y", "z"))
        assert a == b


class TestSuites:

    @pytest.mark.parametrize("name", ["bracket_expansion", "switch", "grab", "parse_roundtrip", "hyperelliptic"])
    def test_suite_passes(self, name):
        [result] = run_suites([name], instances=5, seed=3)
        assert result.name == name
        assert result.instances == 5
        assert result.ok, result.failures

    def test_groebner_has_a_floor(self):
        [result] = run_suites(["groebner"], instances=5)
        assert result.instances == 10
        assert result.ok, result.failures

    def test_unknown_suite(self):
        with pytest.raises(ValueError, match="nope"):
            run_suites(["switch", "nope"])

    def test_default_runs_every_suite(self):
        assert [r.name for r in run_suites(instances=1)] == list(SUITES)

    def test_result_json(self):
        result = PropertyResult("demo", instances=2, failures=["instance 1: broken"])
        assert not result.ok
        assert result.to_json() == {"name": "demo", "instances": 2, "failures": ["instance 1: broken"], "ok": False}

    @pytest.mark.slow
    def test_full_run(self):
        assert all(r.ok for r in run_suites(seed=11))
