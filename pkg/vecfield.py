"""
Vector fields on an affine variety X, viewed as derivations of A = Q[x]/I.

A field is a tuple of n normal forms (g_1, ..., g_n) satisfying the
tangency system sum_j g_j df_i/dx_j in I. This module computes generators
of the derivation module through syzygies, applies and brackets fields,
and builds the constructive witnesses of the simplicity argument: ample
fields at a point, the bracket identities, the global certificate that 1
lies in the ideal of functions reached from a seed field, and the
singular-locus filtration.

Elements of the Lie ideal generated by a seed are carried as FieldExpr
chains (seed, bracket with a field of D on the left, rational scaling,
sums), so every witness can be re-evaluated from scratch.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import combinations_with_replacement
from math import gcd
from typing import Any, Dict, List, Optional, Sequence, Tuple

import linalg
from groebner import (
    FreeModuleVector, GroebnerBasis, buchberger, module_groebner,
    module_membership, module_normal_form, radical_membership, syzygies, unit_certificate,
)
from poly import Polynomial, Scalar
from polyparse import format_vector_field, parse_vector_field
from variety import (
    LocalChart, QuotientElement, SingularPointError, Variety, dimension, format_point, is_singular_point,
    jacobian, jet_expansion, local_chart, rational_points, singular_ideal,
)

logger = logging.getLogger(__name__)

DEFAULT_JET_ORDER = 6
DEFAULT_JET_CAP = 48
DEFAULT_SWEEP_HEIGHT = 5
DEFAULT_WORD_BOUND = 4


class NotTangentError(ValueError):
    def __init__(self, components: Sequence[Polynomial]):
        self.components = tuple(components)
        super().__init__(f"({format_vector_field(self.components)}) is not tangent to the variety")


class ZeroFieldError(ValueError):
    """Operation needs a nonzero field."""


class IdentityViolation(ArithmeticError):
    """A bracket identity failed to hold exactly."""

    def __init__(self, name: str, lhs, rhs):
        self.name = name
        self.lhs = lhs
        self.rhs = rhs
        super().__init__(f"{name} violated: {lhs} != {rhs}")


class WitnessNotFound(RuntimeError):
    def __init__(self, reason: str, jet_order: Optional[int] = None):
        self.reason = reason
        self.jet_order = jet_order
        suffix = f" (jet order {jet_order})" if jet_order is not None else ""
        super().__init__(f"{reason}{suffix}")


class CertificateNotFound(RuntimeError):
    """1 is not in the ideal generated by the collected local functions."""

    def __init__(self, uncovered: Sequence[Polynomial], vanishing_coordinates: Sequence[str],
                 points: Sequence[Tuple[Fraction, ...]]):
        self.uncovered = list(uncovered)
        self.vanishing_coordinates = list(vanishing_coordinates)
        self.points = list(points)
        locus = ', '.join(str(g) for g in self.uncovered)
        super().__init__(f"No certificate from {len(self.points)} points; uncovered locus V({locus}); "
                         f"vanishing coordinates: {', '.join(self.vanishing_coordinates) or 'none'}")


# ---------------------------------------------------------------------------
# VectorField
# ---------------------------------------------------------------------------

def _lift(X: Variety, f) -> Polynomial:
    if isinstance(f, QuotientElement):
        return f.rep
    if isinstance(f, Polynomial):
        return f
    if isinstance(f, str):
        return X.polynomial(f)
    return Polynomial.constant(X.variables, f)


def tangency_images(X: Variety, components: Sequence[Polynomial]) -> List[Polynomial]:
    """sum_j g_j df_i/dx_j for each generator f_i, reduced mod I."""
    J = jacobian(X)
    images = []
    for row in J:
        total = Polynomial.zero(X.variables)
        for g, d in zip(components, row):
            if not g.is_zero() and not d.is_zero():
                total = total + g * d
        images.append(X.reduce(total))
    return images


def is_tangent(X: Variety, components: Sequence[Polynomial]) -> bool:
    if len(components) != X.n:
        raise ValueError(f"Expected {X.n} components, got {len(components)}")
    return all(image.is_zero() for image in tangency_images(X, components))


class VectorField:
    """Derivation of A given by its values on the coordinates."""

    __slots__ = ('variety', 'components')

    def __init__(self, variety: Variety, components: Sequence, check: bool = True):
        if len(components) != variety.n:
            raise ValueError(f"Expected {variety.n} components, got {len(components)}")
        self.variety = variety
        self.components: Tuple[Polynomial, ...] = tuple(variety.reduce(_lift(variety, c)) for c in components)
        if check and not is_tangent(variety, self.components):
            raise NotTangentError(self.components)

    @classmethod
    def parse(cls, X: Variety, text: str) -> 'VectorField':
        return cls(X, parse_vector_field(text, X.variables))

    @classmethod
    def zero(cls, X: Variety) -> 'VectorField':
        return cls(X, [Polynomial.zero(X.variables)] * X.n, check=False)

    @classmethod
    def coordinate(cls, X: Variety, j: int) -> 'VectorField':
        """d/dx_j; tangent only when no generator involves x_j."""
        return cls(X, [Polynomial.constant(X.variables, int(i == j)) for i in range(X.n)])

    def apply(self, f) -> QuotientElement:
        X = self.variety
        p = _lift(X, f)
        total = Polynomial.zero(X.variables)
        for j, g in enumerate(self.components):
            if not g.is_zero():
                d = p.derivative(j)
                if not d.is_zero():
                    total = total + g * d
        return X.element(total)

    __call__ = apply

    def bracket(self, other: 'VectorField') -> 'VectorField':
        """[self, other]_j = self(other_j) - other(self_j)."""
        self._same(other)
        comps = [(self.apply(b) - other.apply(a)).rep for a, b in zip(self.components, other.components)]
        return VectorField(self.variety, comps, check=False)

    def scale(self, f) -> 'VectorField':
        p = _lift(self.variety, f)
        return VectorField(self.variety, [p * g for g in self.components], check=False)

    def _same(self, other: 'VectorField'):
        if other.variety is not self.variety:
            raise ValueError("Vector fields on different varieties")

    def __add__(self, other: 'VectorField') -> 'VectorField':
        self._same(other)
        return VectorField(self.variety, [a + b for a, b in zip(self.components, other.components)], check=False)

    def __sub__(self, other: 'VectorField') -> 'VectorField':
        self._same(other)
        return VectorField(self.variety, [a - b for a, b in zip(self.components, other.components)], check=False)

    def __neg__(self):
        return VectorField(self.variety, [-g for g in self.components], check=False)

    def __mul__(self, f):
        return self.scale(f)

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return other.variety is self.variety and other.components == self.components

    def __hash__(self):
        return hash(self.components)

    def is_zero(self) -> bool:
        return all(g.is_zero() for g in self.components)

    def evaluate(self, point: Sequence[Scalar]) -> Tuple[Fraction, ...]:
        return tuple(g.evaluate(point) for g in self.components)

    def as_vector(self) -> FreeModuleVector:
        return FreeModuleVector(self.components)

    def __str__(self):
        return format_vector_field(self.components)

    def __repr__(self):
        return f"VectorField({self})"


def apply(eta: VectorField, f) -> QuotientElement:
    return eta.apply(f)


def bracket(eta: VectorField, mu: VectorField) -> VectorField:
    return eta.bracket(mu)


def tangent_evaluation(eta: VectorField, point: Sequence[Scalar]) -> Tuple[Fraction, ...]:
    point = eta.variety.check_point(point)
    return eta.evaluate(point)


# ---------------------------------------------------------------------------
# Spans and generators of D
# ---------------------------------------------------------------------------

def _ideal_vectors(X: Variety, rank: int) -> List[FreeModuleVector]:
    zero = Polynomial.zero(X.variables)
    return [FreeModuleVector(tuple(f if i == k else zero for i in range(rank)))
            for f in X.generators for k in range(rank)]


class FieldSpan:
    """A-span of a list of fields, with module membership modulo I."""

    def __init__(self, X: Variety, fields: Sequence[VectorField]):
        self.variety = X
        self.fields = list(fields)
        self._groebner: Optional[GroebnerBasis] = None

    @property
    def groebner(self) -> GroebnerBasis:
        if self._groebner is None:
            X = self.variety
            vectors = [f.as_vector() for f in self.fields] + _ideal_vectors(X, X.n)
            self._groebner = module_groebner(vectors, variables=X.variables, rank=X.n)
        return self._groebner

    def contains(self, eta: VectorField) -> bool:
        return module_normal_form(eta.as_vector(), self.groebner).is_zero()

    def coefficients(self, eta: VectorField) -> Optional[List[QuotientElement]]:
        """a with eta = sum a_i fields_i in A^n, or None."""
        X = self.variety
        vectors = [f.as_vector() for f in self.fields] + _ideal_vectors(X, X.n)
        member, coefficients = module_membership(eta.as_vector(), vectors)
        if not member:
            return None
        return [X.element(c) for c in coefficients[:len(self.fields)]]

    def same_span(self, other: 'FieldSpan') -> bool:
        return all(self.contains(f) for f in other.fields) and all(other.contains(f) for f in self.fields)


def same_span(X: Variety, first: Sequence[VectorField], second: Sequence[VectorField]) -> bool:
    return FieldSpan(X, first).same_span(FieldSpan(X, second))


def _field_degree(eta: VectorField) -> int:
    return max((g.degree() for g in eta.components if not g.is_zero()), default=0)


def primitive_field(eta: VectorField) -> VectorField:
    """Scale to coprime integer coefficients, first leading coefficient positive."""
    coeffs = [c for g in eta.components for c in g.terms.values()]
    if not coeffs:
        return eta
    denominator = reduce(lambda a, b: a * b // gcd(a, b), (c.denominator for c in coeffs), 1)
    numerator = reduce(gcd, (abs(c.numerator) for c in coeffs), 0)
    lead = next(g for g in eta.components if not g.is_zero()).leading_coefficient()
    factor = Fraction(denominator, numerator) * (1 if lead > 0 else -1)
    return eta if factor == 1 else eta.scale(factor)


def _prune(X: Variety, candidates: List[VectorField]) -> List[VectorField]:
    """Keep a candidate only when it is outside the span of the ones kept before it."""
    ordered = sorted(candidates, key=lambda f: (_field_degree(f), str(f)))
    kept: List[VectorField] = []
    for f in ordered:
        if f.is_zero() or (kept and FieldSpan(X, kept).contains(f)):
            continue
        kept.append(f)
    return kept


@dataclass
class DerivationModuleGens:
    variety: Variety
    generators: List[VectorField]
    relations: List[List[QuotientElement]] = field(default_factory=list)

    def span(self) -> FieldSpan:
        return FieldSpan(self.variety, self.generators)

    def to_json(self) -> Dict[str, Any]:
        return {
            'generators': [str(g) for g in self.generators],
            'relations': [[str(a) for a in r] for r in self.relations],
        }


def relations_among(X: Variety, fields: Sequence[VectorField]) -> List[List[QuotientElement]]:
    """Generators of {a in A^k : sum a_i fields_i = 0}."""
    fields = list(fields)
    if not fields:
        return []
    extra = _ideal_vectors(X, X.n)
    syz = syzygies([f.as_vector() for f in fields] + extra)
    k = len(fields)
    relations = []
    seen = set()
    for r in syz.relations:
        coefficients = [X.element(c) for c in r.components[:k]]
        if all(c.is_zero() for c in coefficients):
            continue
        key = tuple(c.rep for c in coefficients)
        if key in seen:
            continue
        seen.add(key)
        relations.append(coefficients)
    relations.sort(key=lambda r: (max(c.rep.degree() for c in r if not c.is_zero()), [str(c) for c in r]))
    return relations


def relation_in_span(X: Variety, relation: Sequence, relations: Sequence[Sequence[QuotientElement]]) -> bool:
    """Is a coefficient vector an A-combination of the given relations?"""
    k = len(relation)
    vectors = [FreeModuleVector(tuple(c.rep for c in r)) for r in relations] + _ideal_vectors(X, k)
    target = FreeModuleVector(tuple(_lift(X, c) for c in relation))
    G = module_groebner(vectors, variables=X.variables, rank=k)
    return module_normal_form(target, G).is_zero()


def derivation_module_generators(X: Variety, with_relations: bool = False) -> DerivationModuleGens:
    """Generators of D = Der(A) from syzygies of the Jacobian columns and I * e_i."""
    def compute():
        if not X.generators:
            return [VectorField.coordinate(X, j) for j in range(X.n)]
        J = jacobian(X)
        columns = [FreeModuleVector(tuple(J[i][j] for i in range(X.m))) for j in range(X.n)]
        syz = syzygies(columns + _ideal_vectors(X, X.m))
        candidates = []
        for r in syz.relations:
            eta = VectorField(X, r.components[:X.n])
            if not eta.is_zero():
                candidates.append(primitive_field(eta))
        kept = _prune(X, candidates)
        logger.info(f"{X.name}: {len(kept)} derivation generators from {len(syz.relations)} syzygies")
        return kept

    generators = X._once('derivations', compute)
    relations = relations_among(X, generators) if with_relations else []
    return DerivationModuleGens(X, list(generators), relations)


# ---------------------------------------------------------------------------
# Ideal chains
# ---------------------------------------------------------------------------

@dataclass
class FieldExpr:
    """Element of the Lie ideal generated by a seed field.

    op is 'seed' (field), 'bracket' ([left, arg] with left any field of D),
    'scale' (rational factor times arg) or 'sum' (args).
    """
    op: str
    value: VectorField
    seed_field: Optional[VectorField] = None
    left: Optional[VectorField] = None
    factor: Optional[Fraction] = None
    args: List['FieldExpr'] = field(default_factory=list)

    @classmethod
    def seed(cls, eta: VectorField) -> 'FieldExpr':
        return cls('seed', eta, seed_field=eta)

    @classmethod
    def bracket(cls, left: VectorField, arg: 'FieldExpr') -> 'FieldExpr':
        return cls('bracket', left.bracket(arg.value), left=left, args=[arg])

    @classmethod
    def scaled(cls, factor: Scalar, arg: 'FieldExpr') -> 'FieldExpr':
        factor = Fraction(factor)
        return cls('scale', arg.value.scale(factor), factor=factor, args=[arg])

    @classmethod
    def sum(cls, args: Sequence['FieldExpr']) -> 'FieldExpr':
        value = args[0].value
        for a in args[1:]:
            value = value + a.value
        return cls('sum', value, args=list(args))

    def evaluate(self) -> VectorField:
        """Recompute the value from the leaves."""
        if self.op == 'seed':
            return self.seed_field
        if self.op == 'bracket':
            return self.left.bracket(self.args[0].evaluate())
        if self.op == 'scale':
            return self.args[0].evaluate().scale(self.factor)
        values = [a.evaluate() for a in self.args]
        total = values[0]
        for v in values[1:]:
            total = total + v
        return total

    def verify(self) -> bool:
        return self.evaluate() == self.value

    def depth(self) -> int:
        return 0 if self.op == 'seed' else 1 + max(a.depth() for a in self.args)

    def to_json(self) -> Dict[str, Any]:
        node: Dict[str, Any] = {'op': self.op, 'value': str(self.value)}
        if self.op == 'seed':
            node['field'] = str(self.seed_field)
        elif self.op == 'bracket':
            node['left'] = str(self.left)
            node['arg'] = self.args[0].to_json()
        elif self.op == 'scale':
            node['factor'] = str(self.factor)
            node['arg'] = self.args[0].to_json()
        else:
            node['args'] = [a.to_json() for a in self.args]
        return node


def _expect(name: str, lhs: VectorField, rhs: VectorField) -> None:
    if lhs != rhs:
        raise IdentityViolation(name, lhs, rhs)


def self_ideal_chain(mu: FieldExpr, f, g) -> Dict[str, FieldExpr]:
    """Chains for mu(f) mu, 2 mu(f) mu(g) mu and f mu(mu(g)) mu inside the ideal of mu."""
    m = mu.value
    X = m.variety
    f = X.element(_lift(X, f))
    g = X.element(_lift(X, g))

    def first(func: QuotientElement) -> FieldExpr:
        # [func*mu, mu] = -mu(func) mu
        return FieldExpr.scaled(-1, FieldExpr.bracket(m.scale(func), mu))

    a = first(f)
    _expect('mu(f) mu', a.value, m.scale(m(f)))
    h = m(g)
    b = FieldExpr.sum([
        FieldExpr.scaled(-1, FieldExpr.bracket(m.scale(f * h), mu)),
        FieldExpr.scaled(-1, FieldExpr.bracket(m.scale(f), first(g))),
    ])
    _expect('2 mu(f) mu(g) mu', b.value, m.scale(m(f) * h * 2))
    c = FieldExpr.sum([first(f * h), FieldExpr.scaled(Fraction(-1, 2), b)])
    _expect('f mu(mu(g)) mu', c.value, m.scale(f * m(h)))
    return {'a': a, 'b': b, 'c': c}


# ---------------------------------------------------------------------------
# Bracket identities
# ---------------------------------------------------------------------------

def bracket_expansion_identity(eta: VectorField, mu: VectorField, f, g) -> bool:
    """[f eta, g mu] = fg [eta, mu] + f eta(g) mu - g mu(f) eta."""
    X = eta.variety
    f, g = X.element(_lift(X, f)), X.element(_lift(X, g))
    lhs = eta.scale(f).bracket(mu.scale(g))
    rhs = eta.bracket(mu).scale(f * g) + mu.scale(f * eta(g)) - eta.scale(g * mu(f))
    return lhs == rhs


def switch_identity(mu: VectorField, eta: VectorField, f) -> bool:
    """[mu, f eta] - [f mu, eta] = eta(f) mu + mu(f) eta."""
    X = mu.variety
    f = X.element(_lift(X, f))
    lhs = mu.bracket(eta.scale(f)) - mu.scale(f).bracket(eta)
    rhs = mu.scale(eta(f)) + eta.scale(mu(f))
    return lhs == rhs


def switch_identity_same(mu: VectorField, f, h) -> bool:
    """[mu, f h mu] - [f mu, h mu] = 2 h mu(f) mu."""
    X = mu.variety
    f, h = X.element(_lift(X, f)), X.element(_lift(X, h))
    lhs = mu.bracket(mu.scale(f * h)) - mu.scale(f).bracket(mu.scale(h))
    rhs = mu.scale(h * mu(f) * 2)
    return lhs == rhs


@dataclass
class BracketWitness:
    """[p m mu, f tau] - [f p m mu, tau] - tau(f) p m mu = q tau with m = mu(mu(g)), q = p mu(f) m."""
    mu: VectorField
    tau: VectorField
    f: QuotientElement
    g: QuotientElement
    p: QuotientElement
    q: QuotientElement
    terms: Tuple[VectorField, VectorField, VectorField]
    lhs: VectorField
    rhs: VectorField

    def to_json(self) -> Dict[str, Any]:
        return {
            'mu': str(self.mu), 'tau': str(self.tau), 'f': str(self.f), 'g': str(self.g),
            'p': str(self.p), 'q': str(self.q), 'lhs': str(self.lhs), 'rhs': str(self.rhs),
        }


def simplicity_witness(mu: VectorField, tau: VectorField, f, g, p) -> BracketWitness:
    X = mu.variety
    f, g, p = (X.element(_lift(X, v)) for v in (f, g, p))
    m = mu(mu(g))
    core = mu.scale(p * m)
    first = core.bracket(tau.scale(f))
    second = core.scale(f).bracket(tau)
    third = core.scale(tau(f))
    lhs = first - second - third
    q = p * mu(f) * m
    rhs = tau.scale(q)
    _expect('grab identity', lhs, rhs)
    return BracketWitness(mu, tau, f, g, p, q, (first, second, third), lhs, rhs)


def nonzero_second_derivative(mu: VectorField) -> Tuple[QuotientElement, QuotientElement]:
    """g with mu(mu(g)) != 0, returned with mu(mu(g))."""
    if mu.is_zero():
        raise ZeroFieldError("mu must be nonzero")
    X = mu.variety
    for j in range(X.n):
        f = X.element(X.coordinate(j))
        first = mu(f)
        if first.is_zero():
            continue
        second = mu(first)
        if not second.is_zero():
            return f, second
        g = f * f
        return g, mu(mu(g))
    raise ZeroFieldError("mu kills every coordinate")


# ---------------------------------------------------------------------------
# Ampleness
# ---------------------------------------------------------------------------

def _require_nonsingular(X: Variety, point) -> Tuple[Fraction, ...]:
    point = X.check_point(point)
    if is_singular_point(X, point):
        raise SingularPointError(point)
    return point


def ampleness_check(X: Variety, point: Sequence[Scalar], fields: Sequence[VectorField]) -> bool:
    """Values at P span the tangent space (of dimension s)."""
    point = _require_nonsingular(X, point)
    values = [f.evaluate(point) for f in fields]
    return linalg.rank(values, X.n) == dimension(X)


def chart_fields(chart: LocalChart) -> List[VectorField]:
    return [VectorField(chart.variety, comps, check=False) for comps in chart.tau]


@dataclass
class AmpleWitness:
    """mu in the ideal of the seed with mu(f)(P) != 0, f = t_j0 a local parameter."""
    point: Tuple[Fraction, ...]
    chart: LocalChart
    mu: VectorField
    f: QuotientElement
    parameter: int
    value: Fraction
    exponents: Tuple[int, ...]
    chain: FieldExpr
    jet_order: int

    def to_json(self) -> Dict[str, Any]:
        X = self.chart.variety
        return {
            'point': [str(v) for v in self.point],
            'parameter': X.variables[self.chart.free[self.parameter]],
            'f': str(self.f),
            'mu': str(self.mu),
            'value': str(self.value),
            'exponents': list(self.exponents),
            'jet_order': self.jet_order,
            'chain': self.chain.to_json(),
        }


def lowest_part(X: Variety, chart: LocalChart, eta: VectorField, order: int):
    """(degree, [u_1..u_s]) of the lowest homogeneous part of (eta(t_1), ..., eta(t_s))."""
    jets = [jet_expansion(X, chart, eta.components[i], order) for i in chart.free]
    degrees = [j.lowest_part()[0] for j in jets if not j.is_zero()]
    if not degrees:
        return None, []
    d = min(degrees)
    return d, [j.poly.homogeneous_part(d) for j in jets]


def ample_witness(X: Variety, point: Sequence[Scalar], eta, jet_order: int = DEFAULT_JET_ORDER,
                  jet_cap: int = DEFAULT_JET_CAP) -> AmpleWitness:
    """Bracket eta with the chart fields until it no longer vanishes on a parameter at P."""
    seed = eta if isinstance(eta, FieldExpr) else FieldExpr.seed(eta)
    if seed.value.is_zero():
        raise ZeroFieldError("The seed field is zero")
    point = _require_nonsingular(X, point)
    chart = local_chart(X, point)
    taus = chart_fields(chart)
    order = max(1, jet_order)
    while order <= jet_cap:
        d, parts = lowest_part(X, chart, seed.value, order)
        if d is None:
            logger.debug(f"Seed vanishes to order {order} at {format_point(point)}; doubling")
            order *= 2
            continue
        j0 = next(j for j, u in enumerate(parts) if not u.is_zero())
        exponents = min(parts[j0].terms)
        chain = seed
        for i in reversed(range(chart.s)):
            for _ in range(exponents[i]):
                chain = FieldExpr.bracket(taus[i], chain)
        f = X.element(chart.parameter(j0))
        value = chain.value(f).evaluate(point)
        if value:
            logger.debug(f"Ample witness at {format_point(point)}: exponents {exponents}, value {value}")
            return AmpleWitness(point, chart, chain.value, f, j0, value, tuple(exponents), chain, order)
        order *= 2
    raise WitnessNotFound(f"no ample witness at {format_point(point)}", jet_cap)


def ample_family(X: Variety, point: Sequence[Scalar], eta, jet_order: int = DEFAULT_JET_ORDER,
                 jet_cap: int = DEFAULT_JET_CAP) -> List[FieldExpr]:
    """Fields [t_j0 tau_i, mu], i = 1..s, in the ideal of eta and spanning T_P X."""
    witness = ample_witness(X, point, eta, jet_order, jet_cap)
    chart = witness.chart
    t = witness.f
    family = [FieldExpr.bracket(tau.scale(t), witness.chain) for tau in chart_fields(chart)]
    if not ampleness_check(X, witness.point, [e.value for e in family]):
        raise WitnessNotFound(f"ample family does not span at {format_point(witness.point)}")
    return family


# ---------------------------------------------------------------------------
# Global certificate
# ---------------------------------------------------------------------------

@dataclass
class LocalGenerator:
    """q = mu(f) * mu(mu(g)) with q(P) != 0; alternatives holds every other such pair found at P."""
    point: Tuple[Fraction, ...]
    f: QuotientElement
    g: QuotientElement
    function: QuotientElement
    witness: AmpleWitness
    alternatives: List[Tuple[QuotientElement, QuotientElement, QuotientElement]] = field(default_factory=list)

    def pairs(self, extended: bool = False) -> List[Tuple[QuotientElement, QuotientElement, QuotientElement]]:
        primary = [(self.f, self.g, self.function)]
        return primary + self.alternatives if extended else primary

    def to_json(self) -> Dict[str, Any]:
        return {
            'point': [str(v) for v in self.point],
            'f': str(self.f),
            'g': str(self.g),
            'function': str(self.function),
            'value_at_point': str(self.function.evaluate(self.point)),
            'alternatives': len(self.alternatives),
            'chain': self.witness.chain.to_json(),
        }


@dataclass
class GlobalCertificate:
    """1 = sum cofactors[k] * terms[k].q + sum ideal_cofactors[k] * f_k.

    Each term is (index into locals, f, g, q).
    """
    variety: Variety
    seed: VectorField
    locals: List[LocalGenerator]
    cofactors: List[Polynomial]
    ideal_cofactors: List[Polynomial]
    terms: List[Tuple[int, QuotientElement, QuotientElement, QuotientElement]] = field(default_factory=list)

    def __post_init__(self):
        if not self.terms:
            self.terms = [(i, loc.f, loc.g, loc.function) for i, loc in enumerate(self.locals)]

    def expand(self) -> Polynomial:
        X = self.variety
        total = Polynomial.zero(X.variables)
        for c, (_, _, _, q) in zip(self.cofactors, self.terms):
            total = total + c * q.rep
        for c, f in zip(self.ideal_cofactors, X.generators):
            total = total + c * f
        return total

    def to_json(self) -> Dict[str, Any]:
        return {
            'seed': str(self.seed),
            'points': [loc.to_json() for loc in self.locals],
            'terms': [{'point': i, 'f': str(f), 'g': str(g), 'function': str(q), 'cofactor': str(c)}
                      for c, (i, f, g, q) in zip(self.cofactors, self.terms)],
            'cofactors': [str(c) for c in self.cofactors],
            'ideal_cofactors': [str(c) for c in self.ideal_cofactors],
            'expands_to_one': self.expand() == 1,
        }


def candidate_functions(X: Variety) -> List[QuotientElement]:
    """The coordinates followed by their degree-2 products, in variable order."""
    coords = list(X.coordinates())
    products = [a * b for a, b in combinations_with_replacement(coords, 2)]
    seen, out = set(), []
    for p in coords + products:
        e = X.element(p)
        if not e.is_zero() and e not in seen:
            seen.add(e)
            out.append(e)
    return out


def local_generator(X: Variety, point, mu, jet_order: int = DEFAULT_JET_ORDER,
                    jet_cap: int = DEFAULT_JET_CAP) -> LocalGenerator:
    """A function q with q tau in the ideal of mu for every tau, and q(P) != 0.

    f runs over the witness parameter and the coordinates, g over the coordinates and their
    degree-2 products. The first pair with mu(f)(P) * mu(mu(g))(P) != 0 is the primary one.
    """
    witness = ample_witness(X, point, mu, jet_order, jet_cap)
    m = witness.mu
    P = witness.point
    candidates = candidate_functions(X)
    coords = [X.element(c) for c in X.coordinates()]
    firsts = [(f, m(f)) for f in [witness.f] + coords]
    seconds = [(g, m(m(g))) for g in candidates]
    fs = [(f, mf) for f, mf in firsts if mf.evaluate(P)]
    gs = [(g, mmg) for g, mmg in seconds if mmg.evaluate(P)]
    if not fs or not gs:
        raise WitnessNotFound(f"local function vanishes at {format_point(P)}")
    pairs, seen = [], set()
    for f, mf in fs:
        for g, mmg in gs:
            q = mf * mmg
            if q not in seen:
                seen.add(q)
                pairs.append((f, g, q))
    f, g, q = pairs[0]
    logger.debug(f"Local function at {format_point(P)}: {q} ({len(pairs) - 1} alternatives)")
    return LocalGenerator(P, f, g, q, witness, pairs[1:])


def _certificate(X: Variety, locals_: List[LocalGenerator], extended: bool = False):
    terms, seen = [], set()
    for i, loc in enumerate(locals_):
        for f, g, q in loc.pairs(extended):
            if q not in seen:
                seen.add(q)
                terms.append((i, f, g, q))
    if not terms:
        return None
    functions = [q.rep for _, _, _, q in terms]
    gens = functions + list(X.generators)
    if extended and not buchberger(gens, variables=X.variables).contains(Polynomial.constant(X.variables, 1)):
        return None
    cofactors = unit_certificate(gens)
    if cofactors is None:
        return None
    k = len(functions)
    return terms, cofactors[:k], cofactors[k:]


def _prune_terms(terms, cofactors):
    kept = [(t, c) for t, c in zip(terms, cofactors) if not c.is_zero()]
    return [t for t, _ in kept], [c for _, c in kept]


def global_one_certificate(X: Variety, mu, samples: Sequence[Sequence[Scalar]] = (),
                           jet_order: int = DEFAULT_JET_ORDER, jet_cap: int = DEFAULT_JET_CAP,
                           sweep_height: int = DEFAULT_SWEEP_HEIGHT, sweep_limit: int = 24,
                           batch: int = 4) -> GlobalCertificate:
    """Show 1 lies in the ideal of functions q with q*D inside the Lie ideal of mu.

    Each stage (the samples, then each sweep batch) first tries the primary function of every
    point, then every pair found at every point.
    """
    seed = mu if isinstance(mu, VectorField) else mu.value
    if seed.is_zero():
        raise ZeroFieldError("The seed field is zero")
    locals_: List[LocalGenerator] = []
    used: List[Tuple[Fraction, ...]] = []

    def add_point(point) -> None:
        point = X.check_point(point)
        if point in used:
            return
        used.append(point)
        if is_singular_point(X, point):
            logger.warning(f"Skipping singular sample point {format_point(point)}")
            return
        try:
            locals_.append(local_generator(X, point, mu, jet_order, jet_cap))
        except WitnessNotFound as e:
            logger.warning(f"Skipping {format_point(point)}: {e}")

    def attempt():
        if not locals_:
            return None
        return _certificate(X, locals_) or _certificate(X, locals_, extended=True)

    for p in samples:
        add_point(p)
    found = attempt()
    if found is None:
        sweep = [p for p in rational_points(X, sweep_height, sweep_limit + len(used)) if p not in used]
        for start in range(0, len(sweep), batch):
            for p in sweep[start:start + batch]:
                add_point(p)
            logger.info(f"Sweep added points; {len(locals_)} local functions")
            found = attempt()
            if found is not None:
                break
    if found is None:
        functions = [q.rep for loc in locals_ for _, _, q in loc.pairs(True)] + list(X.generators)
        uncovered = list(buchberger(functions, variables=X.variables).generators)
        vanishing = [name for j, name in enumerate(X.variables)
                     if radical_membership(X.coordinate(j), functions)]
        raise CertificateNotFound(uncovered, vanishing, used)
    terms, cofactors, ideal_cofactors = found
    terms, cofactors = _prune_terms(terms, cofactors)
    kept = sorted({i for i, _, _, _ in terms})
    index = {i: k for k, i in enumerate(kept)}
    terms = [(index[i], f, g, q) for i, f, g, q in terms]
    cert = GlobalCertificate(X, seed, [locals_[i] for i in kept], cofactors, ideal_cofactors, terms)
    if cert.expand() != 1:
        raise IdentityViolation('global certificate', cert.expand(), 1)
    return cert


# ---------------------------------------------------------------------------
# Singular varieties
# ---------------------------------------------------------------------------

def _sing_reps(X: Variety) -> List[Polynomial]:
    return [d.rep for d in singular_ideal(X)]


def singular_invariance_check(X: Variety, fields: Optional[Sequence[VectorField]] = None) -> bool:
    """eta(I_sing) is inside I_sing for every generator eta of D."""
    fields = list(fields) if fields is not None else derivation_module_generators(X).generators
    minors = _sing_reps(X)
    basis = buchberger(minors + list(X.generators), variables=X.variables)
    for eta in fields:
        for d in minors:
            if not basis.contains(eta(d).rep):
                logger.info(f"{eta} moves {d} out of the singular ideal")
                return False
    return True


def singular_power(X: Variety, i: int) -> List[Polynomial]:
    """Generators of I_sing^i (products of minors) together with I."""
    minors = _sing_reps(X)
    if i <= 0:
        return [Polynomial.constant(X.variables, 1)]
    products = []
    for combo in combinations_with_replacement(range(len(minors)), i):
        p = Polynomial.constant(X.variables, 1)
        for k in combo:
            p = p * minors[k]
        products.append(X.reduce(p))
    return [p for p in products if not p.is_zero()] + list(X.generators)


def filtration_membership(X: Variety, eta: VectorField, i: int) -> bool:
    """eta(A) lies in I_sing^i: checked on the coordinate functions."""
    basis = buchberger(singular_power(X, i), variables=X.variables)
    return all(basis.contains(eta(X.coordinate(j)).rep) for j in range(X.n))


def filtration_depth(X: Variety, eta: VectorField, max_power: int = 6) -> Optional[int]:
    """Smallest i with eta outside J_i, or None within the bound."""
    for i in range(max_power + 1):
        if not filtration_membership(X, eta, i):
            return i
    return None


# ---------------------------------------------------------------------------
# Function module witness
# ---------------------------------------------------------------------------

@dataclass
class FunctionWitness:
    f: QuotientElement
    word: List[str]
    value: Fraction

    def to_json(self) -> Dict[str, Any]:
        return {'f': str(self.f), 'word': self.word, 'value': str(self.value)}


def function_module_witness(X: Variety, g, point: Sequence[Scalar], word_bound: int = DEFAULT_WORD_BOUND,
                            fields: Optional[Sequence[VectorField]] = None,
                            max_workers: int = 4) -> FunctionWitness:
    """Breadth-first search over words in {eta_k, x_j eta_k} applied to g for a function nonzero at P."""
    point = X.check_point(point)
    g = X.element(_lift(X, g))
    fields = list(fields) if fields is not None else derivation_module_generators(X).generators
    operators: List[Tuple[str, VectorField]] = []
    for k, eta in enumerate(fields):
        operators.append((f"eta{k + 1}", eta))
    for j, name in enumerate(X.variables):
        for k, eta in enumerate(fields):
            operators.append((f"{name}*eta{k + 1}", eta.scale(X.coordinate(j))))

    if g.evaluate(point):
        return FunctionWitness(g, [], g.evaluate(point))
    frontier: List[Tuple[QuotientElement, List[str]]] = [(g, [])]
    seen = {g.rep}
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        for level in range(1, word_bound + 1):
            tasks = [(f, word, label, op) for f, word in frontier for label, op in operators]
            results = list(executor.map(lambda t: t[3](t[0]), tasks))
            next_frontier = []
            for (f, word, label, _), image in zip(tasks, results):
                if image.is_zero() or image.rep in seen:
                    continue
                seen.add(image.rep)
                new_word = [label] + word
                value = image.evaluate(point)
                if value:
                    logger.debug(f"Function witness at word length {level}")
                    return FunctionWitness(image, new_word, value)
                next_frontier.append((image, new_word))
            frontier = next_frontier
            if not frontier:
                break
    raise WitnessNotFound(f"no word of length <= {word_bound} reaches a function nonzero at {format_point(point)}")
