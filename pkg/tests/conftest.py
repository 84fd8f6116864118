"""Shared fixtures for polyvf tests."""

from pathlib import Path

import pytest

from alggroup import GroupContext
from hyperelliptic import HyperellipticCurve
from poly import Polynomial
from polyparse import parse_polynomial
from sphere import SphereContext
from variety import Variety

DATA_DIR = Path(__file__).parent / "data"
VARIETIES_DIR = Path(__file__).parent.parent / "varieties"

# ---------------------------------------------------------------------------
# Variety descriptions used across modules
# ---------------------------------------------------------------------------

CIRCLE = (("x1", "x2"), ["x1^2 + x2^2 - 1"])
CURVE = (("x", "y"), ["y^2 - 2*x^3 - 2"])        # y^2 = 2h, h = x^3 + 1
CUSP = (("x", "y"), ["y^2 - 2*x^3"])             # h = x^3
NODE = (("x", "y"), ["y^2 - 2*x^3 - 2*x^2"])     # h = x^3 + x^2
PARABOLA = (("x", "y"), ["y - x^2"])

CIRCLE_DELTA = "x2, -x1"
CURVE_TAU = "y, 3*x^2"


def make_variety(description) -> Variety:
    variables, gens = description
    return Variety(variables, [parse_polynomial(g, variables) for g in gens])


def poly(text: str, variables) -> Polynomial:
    return parse_polynomial(text, variables)


# ---------------------------------------------------------------------------
# Fixtures
# ---------------------------------------------------------------------------
# Varieties cache their Gröbner bases, so the expensive ones are module scoped.

@pytest.fixture(scope="module")
def circle():
    return make_variety(CIRCLE)


@pytest.fixture(scope="module")
def curve():
    return make_variety(CURVE)


@pytest.fixture(scope="module")
def cusp():
    return make_variety(CUSP)


@pytest.fixture(scope="module")
def node():
    return make_variety(NODE)


@pytest.fixture(scope="module")
def plane():
    return Variety.affine_space(("x", "y"))


@pytest.fixture(scope="module")
def sphere3():
    return SphereContext(3)


@pytest.fixture(scope="module")
def smooth_curve():
    return HyperellipticCurve("x^3 + 1")


@pytest.fixture(scope="module")
def sl2():
    return GroupContext(2)


@pytest.fixture
def config_file(tmp_path):
    """Factory writing a JSON config file and returning its path."""
    import json

    def write(values):
        path = tmp_path / "polyvf.json"
        path.write_text(json.dumps(values))
        return str(path)
    return write
