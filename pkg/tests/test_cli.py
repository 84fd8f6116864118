"""Tests for the polyvf command line: exit codes, text reports and JSON reports."""

import json

import jsonschema
import pytest

from polyvf import REPORT_SCHEMA, build_parser, run
from tests.conftest import CIRCLE_DELTA, CURVE_TAU, DATA_DIR, VARIETIES_DIR

CIRCLE_ARGS = ["--vars", "x1 x2", "--ideal", "x1^2 + x2^2 - 1"]


def json_report(capsys):
    report = json.loads(capsys.readouterr().out)
    jsonschema.validate(report, REPORT_SCHEMA)
    return report


class TestParser:

    def test_command_required(self):
        assert run([]) == 2

    def test_unknown_command(self):
        assert run(["factor"]) == 2

    def test_defaults(self):
        args = build_parser().parse_args(["sphere"])
        assert args.n == 3
        assert args.direction == 'up'
        assert args.level is None

    def test_version(self, capsys):
        assert run(["--version"]) == 0
        assert capsys.readouterr().out.startswith("polyvf ")


class TestInputErrors:

    def test_missing_variety(self):
        assert run(["smooth"]) == 2

    def test_parse_error(self):
        assert run(["smooth", "--vars", "x y", "--ideal", "x^^2"]) == 2

    def test_parse_error_json(self, capsys):
        assert run(["smooth", "--format", "json", "--vars", "x y", "--ideal", "x^^2"]) == 2
        report = json_report(capsys)
        assert report["ok"] is False
        assert report["result"] == {}
        assert "bad-exponent" in report["error"]

    def test_parse_error_text_has_no_report(self, capsys):
        assert run(["smooth", "--vars", "x y", "--ideal", "x^^2"]) == 2
        assert capsys.readouterr().out == ""

    def test_bad_variable_name(self):
        assert run(["smooth", "--vars", "x x", "--ideal", "x"]) == 2

    def test_missing_variety_file(self, tmp_path):
        assert run(["smooth", "--variety", str(tmp_path / "none.var")]) == 2

    def test_invalid_config(self, config_file):
        assert run(["smooth", "--config", config_file({"jet_order": 0})] + CIRCLE_ARGS) == 2

    def test_field_required(self):
        assert run(["bracket", "--vars", "x y", "--eta", "1, 0"]) == 2

    def test_singular_point(self):
        args = ["witness", "--variety", str(VARIETIES_DIR / "cusp.var"), "--field", "2*x, 3*y", "--point", "0,0"]
        assert run(args) == 2

    def test_group_size_needs_opt_in(self):
        assert run(["group", "--n", "3"]) == 2


class TestSmooth:

    def test_circle(self, capsys):
        assert run(["smooth"] + CIRCLE_ARGS) == 0
        out = capsys.readouterr().out
        assert "smooth: true" in out
        assert "dimension: 1" in out
        assert "certificate: 1 = " in out

    def test_cusp_from_file(self, capsys):
        assert run(["smooth", "--variety", str(VARIETIES_DIR / "cusp.var")]) == 0
        out = capsys.readouterr().out
        assert "smooth: false" in out
        assert "singular ideal: " in out

    def test_json(self, capsys):
        assert run(["smooth", "--format", "json"] + CIRCLE_ARGS) == 0
        report = json_report(capsys)
        assert report["command"] == "smooth"
        assert report["ok"] is True
        assert report["result"]["smooth"] is True
        assert report["result"]["dimension"] == 1


class TestFields:

    def test_generators(self, capsys):
        assert run(["generators", "--variety", str(VARIETIES_DIR / "curve.var")]) == 0
        assert capsys.readouterr().out.splitlines() == [CURVE_TAU]

    def test_generators_json(self, capsys):
        assert run(["generators", "--format", "json", "--relations"] + CIRCLE_ARGS) == 0
        report = json_report(capsys)
        assert report["result"]["generators"] == [CIRCLE_DELTA]
        assert report["result"]["relations"] == []

    def test_bracket(self, capsys):
        assert run(["bracket", "--vars", "x y", "--eta", "0, x", "--mu", "y, 0"]) == 0
        assert capsys.readouterr().out.strip() == "x, -y"

    def test_witness(self, capsys):
        assert run(["witness", "--format", "json", "--field", CIRCLE_DELTA, "--point", "0,1"] + CIRCLE_ARGS) == 0
        result = json_report(capsys)["result"]
        assert result["exponents"] == [0]
        assert result["value"] == "1"
        assert "second_derivative" in result

    def test_simplicity(self, capsys):
        assert run(["simplicity", "--field", CIRCLE_DELTA] + CIRCLE_ARGS) == 0
        assert "certificate: 1 = " in capsys.readouterr().out

    def test_filtration(self, capsys):
        args = ["filtration", "--variety", str(VARIETIES_DIR / "cusp.var"), "--field", "2*x, 3*y"]
        assert run(args) == 0
        out = capsys.readouterr().out
        assert "singular ideal invariant: true" in out
        assert "depth: 1" in out


class TestSphere:

    def test_generation(self, capsys):
        assert run(["sphere", "--n", "3", "--level", "1", "--format", "json"]) == 0
        result = json_report(capsys)["result"]
        assert result["dimension"] == {"computed": 7, "formula": 7}

    def test_constants_fail(self, capsys):
        assert run(["sphere", "--level", "0"]) == 1
        assert "rank 0 of" in capsys.readouterr().out

    def test_circle_table(self, capsys):
        assert run(["sphere", "--n", "2", "--table"]) == 0
        assert "9 pairs, 0 failures" in capsys.readouterr().out


class TestCurve:

    def test_smooth_curve_file(self, capsys):
        args = ["curve", "--curve", str(DATA_DIR / "smooth.curve"), "--degree-bound", "8"]
        assert run(args) == 0
        out = capsys.readouterr().out
        assert "gcd(h, h'): 1" in out
        assert f"generator: {CURVE_TAU}" in out
        assert "image checks: pass" in out

    def test_singular_curve(self, capsys):
        assert run(["curve", "--h", "x^3", "--format", "json"]) == 0
        result = json_report(capsys)["result"]
        assert result["smooth"] is False
        assert result["gcd"] == "x^2"
        assert "kernel" not in result

    def test_rejected_h(self):
        assert run(["curve", "--h", "x^2 + 1"]) == 2


class TestGroup:

    def test_sl2(self, capsys):
        assert run(["group", "--format", "json"]) == 0
        result = json_report(capsys)["result"]
        assert result["n"] == 2
        assert all(result[key] for key in ("commute", "kronecker", "independent", "roundtrip"))


class TestSelftest:

    def test_single_suite(self, capsys, config_file):
        path = config_file({"instances": 3})
        assert run(["selftest", "--config", path, "--suite", "groebner", "--suite", "switch"]) == 0
        out = capsys.readouterr().out.splitlines()
        assert out == ["groebner: 10 instances, ok", "switch: 3 instances, ok"]

    def test_unknown_suite(self):
        assert run(["selftest", "--suite", "nope"]) == 2

    @pytest.mark.slow
    def test_all_suites_json(self, capsys):
        assert run(["selftest", "--format", "json", "--seed", "1"]) == 0
        report = json_report(capsys)
        assert len(report["result"]["suites"]) == 6
