"""
Seeded randomized property suites.

Each suite draws its instances from random.Random(seed) and checks an exact
identity; a suite fails on the first instance that violates it, recording a
short description of the instance. Used by `polyvf selftest` and the tests.
"""

import logging
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Sequence

from groebner import buchberger, ideal_membership, normal_form, verify_groebner
from hyperelliptic import HyperellipticCurve, he_degree, he_multiply, leading_term_map
from poly import Polynomial
from polyparse import format_polynomial, parse_polynomial
from variety import Variety
from vecfield import (IdentityViolation, VectorField, bracket_expansion_identity, simplicity_witness,
                      switch_identity, switch_identity_same)

logger = logging.getLogger(__name__)

DEFAULT_INSTANCES = 200


@dataclass
class PropertyResult:
    name: str
    instances: int = 0
    failures: List[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self) -> Dict[str, Any]:
        return {'name': self.name, 'instances': self.instances, 'failures': self.failures, 'ok': self.ok}


# ---------------------------------------------------------------------------
# Generators
# ---------------------------------------------------------------------------

def random_rational(rng: random.Random, height: int = 5) -> Fraction:
    return Fraction(rng.randint(-height, height), rng.randint(1, height))


def random_polynomial(rng: random.Random, variables: Sequence[str], max_terms: int = 4,
                      max_degree: int = 2, height: int = 5) -> Polynomial:
    n = len(variables)
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        degree = rng.randint(0, max_degree)
        mono = [0] * n
        for _ in range(degree):
            mono[rng.randrange(n)] += 1
        terms[tuple(mono)] = random_rational(rng, height)
    return Polynomial(variables, terms)


def _plane() -> Variety:
    return Variety.affine_space(('x', 'y'))


def _circle() -> Variety:
    return Variety(('x1', 'x2'), [parse_polynomial("x1^2 + x2^2 - 1", ('x1', 'x2'))], name='circle')


def random_field(rng: random.Random, X: Variety, basis: Optional[Sequence[VectorField]] = None) -> VectorField:
    """Random A-combination of basis fields, or random components on affine space."""
    if basis is None:
        return VectorField(X, [random_polynomial(rng, X.variables) for _ in range(X.n)])
    total = VectorField.zero(X)
    for eta in basis:
        total = total + eta.scale(random_polynomial(rng, X.variables))
    return total


def _field_source(rng: random.Random):
    """Alternate between the plane and the circle."""
    if rng.random() < 0.5:
        X = _plane()
        return X, lambda: random_field(rng, X)
    X = _circle()
    delta = VectorField.parse(X, "x2, -x1")
    return X, lambda: random_field(rng, X, [delta])


# ---------------------------------------------------------------------------
# Suites
# ---------------------------------------------------------------------------

def _run(name: str, instances: int, check: Callable[[int], Optional[str]]) -> PropertyResult:
    result = PropertyResult(name)
    for i in range(instances):
        result.instances += 1
        problem = check(i)
        if problem is not None:
            result.failures.append(problem)
            break
    logger.info(f"Suite {name}: {result.instances} instances, ok={result.ok}")
    return result


def bracket_expansion_suite(rng: random.Random, instances: int) -> PropertyResult:
    def check(i: int) -> Optional[str]:
        X, make = _field_source(rng)
        eta, mu = make(), make()
        f, g = random_polynomial(rng, X.variables), random_polynomial(rng, X.variables)
        if not bracket_expansion_identity(eta, mu, f, g):
            return f"instance {i}: eta={eta} mu={mu} f={f} g={g}"
        return None
    return _run('bracket_expansion', instances, check)


def switch_suite(rng: random.Random, instances: int) -> PropertyResult:
    def check(i: int) -> Optional[str]:
        X, make = _field_source(rng)
        eta, mu = make(), make()
        f, h = random_polynomial(rng, X.variables), random_polynomial(rng, X.variables)
        if not switch_identity(mu, eta, f):
            return f"instance {i}: switch mu={mu} eta={eta} f={f}"
        if not switch_identity_same(mu, f, h):
            return f"instance {i}: switch_same mu={mu} f={f} h={h}"
        return None
    return _run('switch', instances, check)


def grab_suite(rng: random.Random, instances: int) -> PropertyResult:
    def check(i: int) -> Optional[str]:
        X, make = _field_source(rng)
        mu, tau = make(), make()
        f, g, p = (random_polynomial(rng, X.variables) for _ in range(3))
        try:
            simplicity_witness(mu, tau, f, g, p)
        except IdentityViolation as e:
            return f"instance {i}: {e}"
        return None
    return _run('grab', instances, check)


def parse_roundtrip_suite(rng: random.Random, instances: int) -> PropertyResult:
    names = ('x1', 'x2', 'x3', 'x4', 'x5')

    def check(i: int) -> Optional[str]:
        variables = names[:rng.randint(1, 5)]
        p = random_polynomial(rng, variables, max_terms=10, max_degree=7, height=9)
        text = format_polynomial(p)
        if parse_polynomial(text, variables) != p:
            return f"instance {i}: {text!r}"
        return None
    return _run('parse_roundtrip', instances, check)


def _nonzero(rng: random.Random, variables: Sequence[str]) -> Polynomial:
    while True:
        p = random_polynomial(rng, variables, max_terms=3, max_degree=2, height=3)
        if not p.is_zero():
            return p


def groebner_suite(rng: random.Random, instances: int) -> PropertyResult:
    """Smaller instance count: each one runs Buchberger."""
    variables = ('x', 'y')

    def check(i: int) -> Optional[str]:
        gens = [_nonzero(rng, variables) for _ in range(2)]
        G = buchberger(gens, cofactors=True, variables=variables)
        if not verify_groebner(G):
            return f"instance {i}: S-polynomials of {gens} do not reduce to 0"
        p = random_polynomial(rng, variables, max_terms=4, max_degree=3)
        r = normal_form(p, G)
        if normal_form(r, G) != r:
            return f"instance {i}: normal form of {p} not idempotent"
        member = p * gens[0] + gens[1]
        found, _ = ideal_membership(member, gens, certificate=True)
        if not found:
            return f"instance {i}: {member} not found in {gens}"
        return None
    return _run('groebner', max(10, instances // 10), check)


def hyperelliptic_suite(rng: random.Random, instances: int) -> PropertyResult:
    C = HyperellipticCurve("x^3 + 1")
    univariate = ('x',)

    def random_element():
        while True:
            u = C.element(random_polynomial(rng, univariate, 3, 3), random_polynomial(rng, univariate, 2, 2))
            if not u.is_zero():
                return u

    def check(i: int) -> Optional[str]:
        u, v = random_element(), random_element()
        uv = he_multiply(u, v, C)
        generic = C.variety.reduce(u.to_polynomial() * v.to_polynomial())
        if uv.to_polynomial() != generic:
            return f"instance {i}: product of {u} and {v} disagrees with the quotient ring"
        if he_degree(uv) != he_degree(u) + he_degree(v):
            return f"instance {i}: deg({u} * {v}) not additive"
        if leading_term_map(uv) != leading_term_map(u) * leading_term_map(v):
            return f"instance {i}: LT not multiplicative on {u}, {v}"
        return None
    return _run('hyperelliptic', instances, check)


SUITES: Dict[str, Callable[[random.Random, int], PropertyResult]] = {
    'bracket_expansion': bracket_expansion_suite,
    'switch': switch_suite,
    'grab': grab_suite,
    'parse_roundtrip': parse_roundtrip_suite,
    'groebner': groebner_suite,
    'hyperelliptic': hyperelliptic_suite,
}


def run_suites(names: Optional[Sequence[str]] = None, instances: int = DEFAULT_INSTANCES,
               seed: int = 0) -> List[PropertyResult]:
    """Run the named suites (all by default), each from its own seeded generator."""
    names = list(names) if names else list(SUITES)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"Unknown property suites: {', '.join(unknown)}")
    results = []
    for offset, name in enumerate(names):
        rng = random.Random(seed * 1000 + offset)
        results.append(SUITES[name](rng, instances))
    return results
