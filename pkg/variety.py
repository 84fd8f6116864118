"""
Affine varieties X = V(f_1, ..., f_m) over Q and their coordinate rings.

Variety caches its Gröbner basis, Jacobian rank and singular ideal lazily
(once-only, under a lock). The Jacobian criterion gives smoothness with a
cofactor certificate; at a nonsingular rational point a LocalChart picks
local parameters and the triangular basis fields, and jet_expansion
expands functions as truncated power series in those parameters.
"""

import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import sympy as sp

import linalg
from groebner import GroebnerBasis, buchberger, ideal_membership, normal_form
from poly import (
    GREVLEX, LEX, MINUS_INFINITY, Monomial, MonomialOrder, Polynomial, Scalar,
    determinant, mono_mul,
)
from polyparse import parse_polynomial, validate_variables

logger = logging.getLogger(__name__)

Point = Tuple[Fraction, ...]


class EmptyVarietyError(ValueError):
    """The ideal contains 1."""


class PointNotOnVarietyError(ValueError):
    def __init__(self, point: Sequence[Scalar]):
        self.point = tuple(Fraction(v) for v in point)
        super().__init__(f"Point {format_point(self.point)} does not lie on the variety")


class SingularPointError(ValueError):
    def __init__(self, point: Sequence[Scalar]):
        self.point = tuple(Fraction(v) for v in point)
        super().__init__(f"Point {format_point(self.point)} is singular")


class JetError(ArithmeticError):
    """Newton step without an invertible pivot."""


def format_point(point: Sequence[Fraction]) -> str:
    return '(' + ', '.join(str(v) for v in point) + ')'


# ---------------------------------------------------------------------------
# Variety and quotient ring
# ---------------------------------------------------------------------------

class Variety:
    """Affine variety given by generators of its ideal.

    Irreducibility is assumed, not checked; `assume_irreducible` records the
    caller's assertion. `order` is the monomial order used for normal forms.
    """

    def __init__(self, variables: Sequence[str], generators: Sequence[Polynomial],
                 assume_irreducible: bool = True, order: MonomialOrder = GREVLEX,
                 name: Optional[str] = None):
        self.variables = validate_variables(variables)
        self.generators: Tuple[Polynomial, ...] = tuple(g for g in generators if not g.is_zero())
        for g in self.generators:
            if g.variables != self.variables:
                raise ValueError(f"Generator {g} is not over {self.variables}")
        self.assume_irreducible = assume_irreducible
        self.order = order
        self.name = name or ('affine space' if not self.generators else
                             ', '.join(str(g) for g in self.generators))
        self._lock = threading.RLock()
        self._cache: Dict[str, object] = {}

    def _once(self, key: str, compute):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = compute()
            return self._cache[key]

    @classmethod
    def affine_space(cls, variables: Sequence[str]) -> 'Variety':
        return cls(variables, [])

    @property
    def n(self) -> int:
        return len(self.variables)

    @property
    def m(self) -> int:
        return len(self.generators)

    def coordinate(self, which) -> Polynomial:
        return Polynomial.variable(self.variables, which)

    def coordinates(self) -> Tuple[Polynomial, ...]:
        return tuple(self.coordinate(i) for i in range(self.n))

    def polynomial(self, text: str) -> Polynomial:
        return parse_polynomial(text, self.variables)

    @property
    def groebner(self) -> GroebnerBasis:
        def compute():
            G = buchberger(self.generators, self.order, variables=self.variables)
            if G.is_unit():
                raise EmptyVarietyError(f"1 lies in the ideal of {self.name}")
            logger.debug(f"Gröbner basis of {self.name}: {len(G)} elements")
            return G
        return self._once('groebner', compute)

    def reduce(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self.groebner)

    def element(self, p) -> 'QuotientElement':
        if isinstance(p, str):
            p = self.polynomial(p)
        elif isinstance(p, (int, Fraction)):
            p = Polynomial.constant(self.variables, p)
        return QuotientElement(self, self.reduce(p))

    def contains_polynomial(self, p: Polynomial) -> bool:
        """p lies in the ideal I."""
        return self.reduce(p).is_zero()

    def contains_point(self, point: Sequence[Scalar]) -> bool:
        if len(point) != self.n:
            raise ValueError(f"Point has {len(point)} coordinates, ambient has {self.n}")
        return all(g.evaluate(point) == 0 for g in self.generators)

    def check_point(self, point: Sequence[Scalar]) -> Point:
        point = tuple(Fraction(v) for v in point)
        if not self.contains_point(point):
            raise PointNotOnVarietyError(point)
        return point

    def __repr__(self):
        return f"Variety({list(self.variables)}, [{self.name}])"


class QuotientElement:
    """Element of A = Q[x]/I, stored as its normal form."""

    __slots__ = ('variety', 'rep')

    def __init__(self, variety: Variety, rep: Polynomial):
        self.variety = variety
        self.rep = rep

    def _lift(self, other) -> Polynomial:
        if isinstance(other, QuotientElement):
            if other.variety is not self.variety:
                raise ValueError("Elements of different coordinate rings")
            return other.rep
        if isinstance(other, Polynomial):
            return other
        return Polynomial.constant(self.variety.variables, other)

    def _wrap(self, p: Polynomial) -> 'QuotientElement':
        return QuotientElement(self.variety, self.variety.reduce(p))

    def __add__(self, other):
        return self._wrap(self.rep + self._lift(other))

    __radd__ = __add__

    def __sub__(self, other):
        return self._wrap(self.rep - self._lift(other))

    def __rsub__(self, other):
        return self._wrap(self._lift(other) - self.rep)

    def __mul__(self, other):
        return self._wrap(self.rep * self._lift(other))

    __rmul__ = __mul__

    def __neg__(self):
        return QuotientElement(self.variety, -self.rep)

    def __pow__(self, k: int):
        result = self.variety.element(1)
        for _ in range(k):
            result = result * self
        return result

    def __eq__(self, other):
        if isinstance(other, QuotientElement):
            return other.variety is self.variety and other.rep == self.rep
        if isinstance(other, (int, Fraction, Polynomial)):
            return self.rep == self.variety.reduce(self._lift(other))
        return NotImplemented

    def __hash__(self):
        return hash(self.rep)

    def is_zero(self) -> bool:
        return self.rep.is_zero()

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        return self.rep.evaluate(point)

    def __str__(self):
        return str(self.rep)

    def __repr__(self):
        return f"QuotientElement({self.rep})"


def quotient_normal_form(p: Polynomial, X: Variety) -> QuotientElement:
    return X.element(p)


# ---------------------------------------------------------------------------
# Jacobian criterion
# ---------------------------------------------------------------------------

def jacobian(X: Variety) -> List[List[Polynomial]]:
    """Entry (i, j) = d f_i / d x_j."""
    return X._once('jacobian', lambda: [[f.derivative(j) for j in range(X.n)] for f in X.generators])


def _minor(J: Sequence[Sequence[Polynomial]], rows: Sequence[int], cols: Sequence[int]) -> Polynomial:
    return determinant([[J[i][j] for j in cols] for i in rows])


def _elimination_rank(X: Variety, J: List[List[Polynomial]]) -> Tuple[int, List[int], List[int]]:
    """Fraction-free elimination over A; returns rank and pivot rows/columns."""
    M = [[X.reduce(e) for e in row] for row in J]
    rows = list(range(len(M)))
    cols = list(range(X.n))
    pivot_rows, pivot_cols = [], []
    k = 0
    while k < len(rows) and k < len(cols):
        found = None
        for i in range(k, len(rows)):
            for j in range(k, len(cols)):
                if not M[i][j].is_zero():
                    found = (i, j)
                    break
            if found:
                break
        if found is None:
            break
        i, j = found
        M[k], M[i] = M[i], M[k]
        rows[k], rows[i] = rows[i], rows[k]
        for row in M:
            row[k], row[j] = row[j], row[k]
        cols[k], cols[j] = cols[j], cols[k]
        pivot = M[k][k]
        for r in range(k + 1, len(M)):
            factor = M[r][k]
            M[r] = [X.reduce(pivot * M[r][c] - factor * M[k][c]) for c in range(len(cols))]
        pivot_rows.append(rows[k])
        pivot_cols.append(cols[k])
        k += 1
    return k, pivot_rows, pivot_cols


def _enumerated_rank(X: Variety, J: List[List[Polynomial]]) -> int:
    for r in range(min(X.m, X.n), 0, -1):
        for rows in combinations(range(X.m), r):
            for cols in combinations(range(X.n), r):
                if not X.reduce(_minor(J, rows, cols)).is_zero():
                    return r
    return 0


def jacobian_rank(X: Variety) -> int:
    """Rank of the Jacobian over the function field of X."""
    def compute():
        J = jacobian(X)
        if not J:
            return 0
        r, prow, pcol = _elimination_rank(X, J)
        if r and X.reduce(_minor(J, sorted(prow), sorted(pcol))).is_zero():
            logger.warning(f"Pivot minor vanishes on {X.name}; falling back to minor enumeration")
            r = _enumerated_rank(X, J)
        logger.debug(f"Jacobian rank of {X.name}: {r}")
        return r
    return X._once('rank', compute)


def dimension(X: Variety) -> int:
    return X.n - jacobian_rank(X)


def singular_ideal(X: Variety) -> List[QuotientElement]:
    """Nonzero r x r minors of the Jacobian modulo I, r the generic rank."""
    def compute():
        r = jacobian_rank(X)
        if r == 0:
            return [X.element(1)]
        J = jacobian(X)
        seen = []
        for rows in combinations(range(X.m), r):
            for cols in combinations(range(X.n), r):
                d = X.element(_minor(J, rows, cols))
                if not d.is_zero() and d not in seen:
                    seen.append(d)
        return seen
    return X._once('singular_ideal', compute)


@dataclass
class SmoothnessCertificate:
    """smooth is True iff 1 = sum cofactors[i] * generators[i]."""
    smooth: bool
    generators: List[Polynomial]
    cofactors: Optional[List[Polynomial]] = None

    def __bool__(self):
        return self.smooth

    def expand(self) -> Polynomial:
        total = Polynomial.zero(self.generators[0].variables)
        for q, g in zip(self.cofactors or [], self.generators):
            total = total + q * g
        return total


def is_smooth(X: Variety) -> SmoothnessCertificate:
    """Jacobian criterion: X is smooth iff 1 lies in I + I_sing."""
    def compute():
        gens = list(X.generators) + [d.rep for d in singular_ideal(X)]
        member, cofactors = ideal_membership(Polynomial.constant(X.variables, 1), gens, certificate=True)
        logger.info(f"{X.name}: smooth={member}")
        return SmoothnessCertificate(member, gens, cofactors)
    return X._once('smooth', compute)


def jacobian_at(X: Variety, point: Sequence[Scalar]) -> List[List[Fraction]]:
    return [[entry.evaluate(point) for entry in row] for row in jacobian(X)]


def is_singular_point(X: Variety, point: Sequence[Scalar]) -> bool:
    point = X.check_point(point)
    if not X.generators:
        return False
    return linalg.rank(jacobian_at(X, point), X.n) < jacobian_rank(X)


def tangent_space(X: Variety, point: Sequence[Scalar]) -> List[List[Fraction]]:
    """Basis of ker Jac(P)."""
    point = X.check_point(point)
    rows = jacobian_at(X, point)
    return linalg.nullspace(rows, X.n)


# ---------------------------------------------------------------------------
# Local charts
# ---------------------------------------------------------------------------

@dataclass
class LocalChart:
    """Local parameters t_j = x_free[j] - P[free[j]] and the fields tau_j.

    tau[j] lists the n components of tau_j: h on its own free coordinate,
    0 on the other free coordinates, Cramer cofactors on the leading ones.
    """
    variety: Variety
    point: Point
    leading: Tuple[int, ...]
    free: Tuple[int, ...]
    rows: Tuple[int, ...]
    h: Polynomial
    tau: List[List[Polynomial]]
    parameter_names: Tuple[str, ...] = field(default=())

    @property
    def s(self) -> int:
        return len(self.free)

    def parameter(self, j: int) -> Polynomial:
        """t_j as a polynomial on the ambient space."""
        i = self.free[j]
        return self.variety.coordinate(i) - self.point[i]


def local_chart(X: Variety, point: Sequence[Scalar]) -> LocalChart:
    point = X.check_point(point)
    if is_singular_point(X, point):
        raise SingularPointError(point)
    r = jacobian_rank(X)
    J = jacobian(X)
    Jp = jacobian_at(X, point)
    chosen = None
    for cols in combinations(range(X.n), r):
        for rows in combinations(range(X.m), r):
            if linalg.rank([[Jp[i][j] for j in cols] for i in rows], r) == r:
                chosen = (cols, rows)
                break
        if chosen:
            break
    if chosen is None:
        raise SingularPointError(point)
    leading, rows = chosen
    free = tuple(j for j in range(X.n) if j not in leading)
    block = [[J[i][j] for j in leading] for i in rows]
    one = Polynomial.constant(X.variables, 1)
    h = determinant(block) if r else one
    tau = []
    for fj in free:
        components = [Polynomial.zero(X.variables) for _ in range(X.n)]
        components[fj] = h
        for k, lead in enumerate(leading):
            replaced = [row[:k] + [J[i][fj]] + row[k + 1:] for row, i in zip(block, rows)]
            components[lead] = -determinant(replaced)
        components = [X.reduce(c) for c in components]
        for f in X.generators:
            image = sum((c * f.derivative(i) for i, c in enumerate(components)), Polynomial.zero(X.variables))
            if not X.contains_polynomial(image):
                raise ArithmeticError(f"Chart field for {X.variables[fj]} is not tangent")
        tau.append(components)
    names = tuple(f"t{j + 1}" for j in range(len(free)))
    logger.debug(f"Chart at {format_point(point)}: leading {[X.variables[i] for i in leading]}, "
                 f"parameters {[X.variables[i] for i in free]}, h = {h}")
    return LocalChart(X, point, tuple(leading), free, tuple(rows), h, tau, names)


# ---------------------------------------------------------------------------
# Jets
# ---------------------------------------------------------------------------

class JetSeries:
    """Power series in the chart parameters, truncated below total degree `order`."""

    __slots__ = ('order', 'poly')

    def __init__(self, poly: Polynomial, order: int):
        if order < 0:
            raise ValueError("Truncation order must be non-negative")
        self.order = order
        self.poly = Polynomial(poly.variables, {m: c for m, c in poly.terms.items() if sum(m) < order})

    @classmethod
    def constant(cls, params: Sequence[str], c: Scalar, order: int) -> 'JetSeries':
        return cls(Polynomial.constant(params, c), order)

    @property
    def params(self) -> Tuple[str, ...]:
        return self.poly.variables

    def _other(self, other) -> 'JetSeries':
        if isinstance(other, JetSeries):
            return other
        return JetSeries(Polynomial.constant(self.params, other), self.order)

    def __add__(self, other):
        other = self._other(other)
        return JetSeries(self.poly + other.poly, min(self.order, other.order))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        return JetSeries(self.poly - other.poly, min(self.order, other.order))

    def __neg__(self):
        return JetSeries(-self.poly, self.order)

    def __mul__(self, other):
        other = self._other(other)
        order = min(self.order, other.order)
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.poly.terms.items():
            d1 = sum(m1)
            for m2, c2 in other.poly.terms.items():
                if d1 + sum(m2) < order:
                    m = mono_mul(m1, m2)
                    terms[m] = terms.get(m, 0) + c1 * c2
        return JetSeries(Polynomial(self.params, terms), order)

    __rmul__ = __mul__

    def truncate(self, order: int) -> 'JetSeries':
        return JetSeries(self.poly, min(order, self.order))

    def constant_term(self) -> Fraction:
        return self.poly.constant_term()

    def inverse(self) -> 'JetSeries':
        c = self.constant_term()
        if not c:
            raise JetError("Series with zero constant term is not invertible")
        w = (self - c).poly.scale(1 / c)
        w = JetSeries(w, self.order)
        result = JetSeries.constant(self.params, 1, self.order)
        power = JetSeries.constant(self.params, 1, self.order)
        for _ in range(1, self.order):
            power = power * (-w)
            result = result + power
        return JetSeries(result.poly.scale(1 / c), self.order)

    def derivative(self, j: int) -> 'JetSeries':
        return JetSeries(self.poly.derivative(j), max(self.order - 1, 0))

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    def lowest_part(self) -> Tuple[object, Polynomial]:
        """(degree, homogeneous part) of the lowest nonzero degree."""
        if self.poly.is_zero():
            return MINUS_INFINITY, self.poly
        d = min(sum(m) for m in self.poly.terms)
        return d, self.poly.homogeneous_part(d)

    def __eq__(self, other):
        if not isinstance(other, JetSeries):
            return NotImplemented
        order = min(self.order, other.order)
        return self.truncate(order).poly == other.truncate(order).poly

    def __hash__(self):
        return hash((self.order, self.poly))

    def __str__(self):
        return f"{self.poly} + O({self.order})"

    def __repr__(self):
        return f"JetSeries({self.poly}, order={self.order})"


def _evaluate_series(p: Polynomial, values: Sequence[JetSeries], params: Tuple[str, ...], order: int) -> JetSeries:
    powers: List[Dict[int, JetSeries]] = [{0: JetSeries.constant(params, 1, order), 1: v} for v in values]

    def power(i: int, e: int) -> JetSeries:
        cache = powers[i]
        if e not in cache:
            cache[e] = power(i, e - 1) * values[i]
        return cache[e]

    total = JetSeries(Polynomial.zero(params), order)
    for mono, c in p.terms.items():
        term = JetSeries.constant(params, c, order)
        for i, e in enumerate(mono):
            if e:
                term = term * power(i, e)
        total = total + term
    return total


def _solve_series(A: List[List[JetSeries]], b: List[JetSeries]) -> List[JetSeries]:
    """Gaussian elimination over the series ring, pivoting on units."""
    size = len(A)
    A = [row[:] for row in A]
    b = b[:]
    for k in range(size):
        pivot = next((i for i in range(k, size) if A[i][k].constant_term()), None)
        if pivot is None:
            raise JetError("No invertible pivot in the leading Jacobian block")
        A[k], A[pivot] = A[pivot], A[k]
        b[k], b[pivot] = b[pivot], b[k]
        inv = A[k][k].inverse()
        A[k] = [e * inv for e in A[k]]
        b[k] = b[k] * inv
        for i in range(size):
            if i != k and not A[i][k].is_zero():
                factor = A[i][k]
                A[i] = [e - factor * ek for e, ek in zip(A[i], A[k])]
                b[i] = b[i] - factor * b[k]
    return b


def chart_coordinates(chart: LocalChart, order: int) -> List[JetSeries]:
    """x(t) to the given order: free coordinates are P + t_j, leading ones solve the chart equations."""
    X = chart.variety
    params = chart.parameter_names
    cached = X._cache.get(('coords', chart.point, order))
    if cached is not None:
        return cached
    values: List[JetSeries] = [JetSeries.constant(params, chart.point[i], order) for i in range(X.n)]
    for j, i in enumerate(chart.free):
        values[i] = JetSeries(Polynomial.variable(params, j) + chart.point[i], order)
    equations = [X.generators[i] for i in chart.rows]
    J = jacobian(X)
    block = [[J[i][j] for j in chart.leading] for i in chart.rows]
    precision = 1
    while precision < order:
        precision = min(2 * precision, order)
        current = [v.truncate(precision) for v in values]
        F = [_evaluate_series(f, current, params, precision) for f in equations]
        M = [[_evaluate_series(e, current, params, precision) for e in row] for row in block]
        delta = _solve_series(M, F) if F else []
        for k, lead in enumerate(chart.leading):
            values[lead] = JetSeries((current[lead] - delta[k]).poly, order)
        logger.debug(f"Newton step reached precision {precision}")
    values = [JetSeries(v.poly, order) for v in values]
    with X._lock:
        X._cache[('coords', chart.point, order)] = values
    return values


def jet_expansion(X: Variety, chart: LocalChart, f, order: int) -> JetSeries:
    """Truncation of the power-series expansion of f in the chart parameters."""
    if order < 1:
        raise ValueError("Jet order must be at least 1")
    rep = f.rep if isinstance(f, QuotientElement) else f
    values = chart_coordinates(chart, order)
    return _evaluate_series(rep, values, chart.parameter_names, order)


# ---------------------------------------------------------------------------
# Rational points
# ---------------------------------------------------------------------------

def small_rationals(height: int) -> List[Fraction]:
    """Rationals a/b with |a| <= height, 1 <= b <= height, by height then value."""
    seen = set()
    values = []
    for h in range(height + 1):
        layer = set()
        for b in range(1, h + 1 if h else 2):
            for a in range(-h, h + 1):
                if max(abs(a), b) == h or (h == 0 and a == 0):
                    v = Fraction(a, b)
                    if v not in seen:
                        layer.add(v)
        values.extend(sorted(layer, key=lambda v: (abs(v), v)))
        seen.update(layer)
    return values


def _rational_roots(p: Polynomial, var: int) -> List[Fraction]:
    """Rational roots of a polynomial in the single variable `var`."""
    t = sp.Symbol('t')
    degree = p.degree_in(var)
    coeffs = [Fraction(0)] * (degree + 1)
    for m, c in p.terms.items():
        coeffs[degree - m[var]] += c
    poly = sp.Poly([linalg.to_sympy(c) for c in coeffs], t, domain='QQ')
    return sorted(linalg.from_sympy(r) for r in sp.roots(poly, filter='Q'))


def rational_points(X: Variety, height: int = 3, limit: int = 50) -> List[Point]:
    """Rational points of X found by fixing all but the last coordinate on a small-height grid."""
    points: List[Point] = []
    if not X.generators:
        for values in product(small_rationals(height), repeat=X.n):
            points.append(tuple(values))
            if len(points) >= limit:
                break
        return points
    last = X.n - 1
    grid = small_rationals(height)
    for prefix in product(grid, repeat=last):
        images = [Polynomial.constant(X.variables, v) for v in prefix] + [X.coordinate(last)]
        restricted = [g.substitute(images) for g in X.generators]
        nonzero = [g for g in restricted if not g.is_zero()]
        if not nonzero:
            candidates = grid
        elif any(g.is_constant() for g in nonzero):
            continue
        else:
            candidates = _rational_roots(min(nonzero, key=lambda g: g.degree_in(last)), last)
        for v in candidates:
            point = tuple(prefix) + (v,)
            if X.contains_point(point) and point not in points:
                points.append(point)
                if len(points) >= limit:
                    return points
    return points


# ---------------------------------------------------------------------------
# Variety files
# ---------------------------------------------------------------------------

def parse_variety(text: str, name: Optional[str] = None) -> Variety:
    """Line format: 'vars: x1 x2 ...', optional 'order: lex|grevlex [vars by priority]',
    then one generator per line; '#' starts a comment line."""
    variables = None
    order = GREVLEX
    generators = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith('#'):
            continue
        if line.startswith('vars:'):
            variables = validate_variables(line[len('vars:'):].split())
            continue
        if variables is None:
            raise ValueError(f"line {lineno}: 'vars:' must come before any generator")
        if line.startswith('order:'):
            order = _parse_order(line[len('order:'):].split(), variables, lineno)
            continue
        generators.append(parse_polynomial(line, variables))
    if variables is None:
        raise ValueError("variety file declares no 'vars:' line")
    return Variety(variables, generators, order=order, name=name)


def _parse_order(words: List[str], variables: Tuple[str, ...], lineno: int) -> MonomialOrder:
    if not words or words[0] not in ('lex', 'grevlex'):
        raise ValueError(f"line {lineno}: order must be 'lex' or 'grevlex'")
    if len(words) == 1:
        return LEX if words[0] == 'lex' else GREVLEX
    priority = []
    for name in words[1:]:
        if name not in variables:
            raise ValueError(f"line {lineno}: unknown variable {name!r} in order")
        priority.append(variables.index(name))
    return MonomialOrder(words[0], tuple(priority))


def load_variety(path) -> Variety:
    path = Path(path)
    return parse_variety(path.read_text(encoding='utf-8'), name=path.stem)
