"""
Exact multivariate polynomial arithmetic over the rationals.

A Polynomial is an immutable sparse map from exponent tuples to nonzero
Fractions, tied to an ordered tuple of variable names (its ambient). All
symbolic data in polyvf (ideal generators, vector-field components, jets,
group coordinates) is carried by this type.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import total_ordering
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

logger = logging.getLogger(__name__)

Rational = Fraction
Monomial = Tuple[int, ...]
Scalar = Union[int, Fraction]


# ---------------------------------------------------------------------------
# Errors
# ---------------------------------------------------------------------------

class AmbientMismatchError(ValueError):
    """Raised when two polynomials over different variable tuples meet."""

    def __init__(self, left: Tuple[str, ...], right: Tuple[str, ...]):
        self.left = tuple(left)
        self.right = tuple(right)
        super().__init__(f"Ambient mismatch: {self.left} vs {self.right}")


class ZeroPolynomialError(ValueError):
    """Raised by operations undefined on the zero polynomial."""


class DivisionError(ArithmeticError):
    """Raised when an exact division leaves a remainder."""


# ---------------------------------------------------------------------------
# Degree sentinel
# ---------------------------------------------------------------------------

@total_ordering
class _MinusInfinity:
    """Degree of the zero polynomial. Orders below every integer, refuses arithmetic."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __eq__(self, other):
        return other is self

    def __lt__(self, other):
        return other is not self

    def __hash__(self):
        return hash('-inf-degree')

    def __repr__(self):
        return 'MINUS_INFINITY'

    def _refuse(self, *args):
        raise TypeError("The degree of the zero polynomial does not take part in arithmetic")

    __add__ = __radd__ = __sub__ = __rsub__ = __mul__ = __rmul__ = __neg__ = _refuse
    __int__ = __index__ = _refuse


MINUS_INFINITY = _MinusInfinity()


def is_minus_infinity(value) -> bool:
    return value is MINUS_INFINITY


# ---------------------------------------------------------------------------
# Monomials
# ---------------------------------------------------------------------------

def mono_mul(u: Monomial, v: Monomial) -> Monomial:
    return tuple(a + b for a, b in zip(u, v))


def mono_div(u: Monomial, v: Monomial) -> Monomial:
    """u / v, assuming v divides u."""
    return tuple(a - b for a, b in zip(u, v))


def mono_divides(v: Monomial, u: Monomial) -> bool:
    return all(b <= a for a, b in zip(u, v))


def mono_lcm(u: Monomial, v: Monomial) -> Monomial:
    return tuple(max(a, b) for a, b in zip(u, v))


def unit_monomial(n: int, i: int) -> Monomial:
    return tuple(1 if j == i else 0 for j in range(n))


@dataclass(frozen=True)
class MonomialOrder:
    """Term order on exponent tuples.

    kind is 'lex' or 'grevlex'. priority optionally permutes the variables
    before comparison: priority[0] is the index of the largest variable.
    """
    kind: str = 'grevlex'
    priority: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.kind not in ('lex', 'grevlex'):
            raise ValueError(f"Unknown monomial order kind: {self.kind}")
        if self.priority is not None:
            object.__setattr__(self, 'priority', tuple(self.priority))
            if sorted(self.priority) != list(range(len(self.priority))):
                raise ValueError(f"Order priority must be a permutation: {self.priority}")

    def key(self, m: Monomial) -> tuple:
        """Sort key; larger key means larger monomial."""
        if self.priority is not None:
            m = tuple(m[i] for i in self.priority)
        if self.kind == 'lex':
            return m
        return (sum(m), tuple(-m[i] for i in reversed(range(len(m)))))

    def __str__(self):
        if self.priority is None:
            return self.kind
        return f"{self.kind}{list(self.priority)}"


LEX = MonomialOrder('lex')
GREVLEX = MonomialOrder('grevlex')


# ---------------------------------------------------------------------------
# Polynomial
# ---------------------------------------------------------------------------

def _as_fraction(c: Scalar) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"Unsupported coefficient type: {type(c).__name__}")


class Polynomial:
    """Immutable polynomial over Q in a fixed tuple of variables."""

    __slots__ = ('variables', '_terms', '_sorted', '_hash')

    def __init__(self, variables: Sequence[str], terms: Optional[Mapping[Monomial, Scalar]] = None):
        self.variables = tuple(variables)
        n = len(self.variables)
        clean: Dict[Monomial, Fraction] = {}
        for mono, coeff in (terms or {}).items():
            mono = tuple(mono)
            if len(mono) != n:
                raise ValueError(f"Monomial {mono} has wrong length for {self.variables}")
            if any(e < 0 for e in mono):
                raise ValueError(f"Negative exponent in {mono}")
            c = _as_fraction(coeff)
            if c:
                clean[mono] = clean.get(mono, Fraction(0)) + c
                if not clean[mono]:
                    del clean[mono]
        self._terms = clean
        self._sorted: Dict[MonomialOrder, List[Tuple[Monomial, Fraction]]] = {}
        self._hash = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def _raw(cls, variables: Tuple[str, ...], terms: Dict[Monomial, Fraction]) -> 'Polynomial':
        p = cls.__new__(cls)
        p.variables = variables
        p._terms = terms
        p._sorted = {}
        p._hash = None
        return p

    @classmethod
    def zero(cls, variables: Sequence[str]) -> 'Polynomial':
        return cls._raw(tuple(variables), {})

    @classmethod
    def constant(cls, variables: Sequence[str], c: Scalar) -> 'Polynomial':
        variables = tuple(variables)
        c = _as_fraction(c)
        return cls._raw(variables, {(0,) * len(variables): c} if c else {})

    @classmethod
    def variable(cls, variables: Sequence[str], which: Union[int, str]) -> 'Polynomial':
        variables = tuple(variables)
        i = variables.index(which) if isinstance(which, str) else which
        if not 0 <= i < len(variables):
            raise IndexError(f"Variable index {i} out of range for {variables}")
        return cls._raw(variables, {unit_monomial(len(variables), i): Fraction(1)})

    @classmethod
    def monomial(cls, variables: Sequence[str], mono: Monomial, c: Scalar = 1) -> 'Polynomial':
        return cls(variables, {tuple(mono): c})

    # -- inspection ---------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    @property
    def nvars(self) -> int:
        return len(self.variables)

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not any(m) for m in self._terms)

    def coefficient(self, mono: Monomial) -> Fraction:
        return self._terms.get(tuple(mono), Fraction(0))

    def constant_term(self) -> Fraction:
        return self.coefficient((0,) * self.nvars)

    def __len__(self):
        return len(self._terms)

    def __bool__(self):
        return bool(self._terms)

    def degree(self):
        """Total degree, MINUS_INFINITY for zero."""
        if not self._terms:
            return MINUS_INFINITY
        return max(sum(m) for m in self._terms)

    def degree_in(self, i: int):
        if not self._terms:
            return MINUS_INFINITY
        return max(m[i] for m in self._terms)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self._terms}) <= 1

    def homogeneous_part(self, d: int) -> 'Polynomial':
        return Polynomial._raw(self.variables, {m: c for m, c in self._terms.items() if sum(m) == d})

    def sorted_terms(self, order: MonomialOrder = GREVLEX) -> List[Tuple[Monomial, Fraction]]:
        """Terms in descending order; cached per order."""
        cached = self._sorted.get(order)
        if cached is None:
            cached = sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)
            self._sorted[order] = cached
        return cached

    def leading_term(self, order: MonomialOrder = GREVLEX) -> Tuple[Monomial, Fraction]:
        if not self._terms:
            raise ZeroPolynomialError("Zero polynomial has no leading term")
        return max(self._terms.items(), key=lambda t: order.key(t[0]))

    def leading_monomial(self, order: MonomialOrder = GREVLEX) -> Monomial:
        return self.leading_term(order)[0]

    def leading_coefficient(self, order: MonomialOrder = GREVLEX) -> Fraction:
        return self.leading_term(order)[1]

    # -- arithmetic ---------------------------------------------------------

    def _coerce(self, other) -> 'Polynomial':
        if isinstance(other, Polynomial):
            if other.variables != self.variables:
                raise AmbientMismatchError(self.variables, other.variables)
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.variables, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self._terms)
        for m, c in other._terms.items():
            s = terms.get(m, 0) + c
            if s:
                terms[m] = s
            else:
                terms.pop(m, None)
        return Polynomial._raw(self.variables, terms)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial._raw(self.variables, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                terms[m] = terms.get(m, 0) + c1 * c2
        return Polynomial._raw(self.variables, {m: c for m, c in terms.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise ValueError(f"Exponent must be a non-negative integer, got {k!r}")
        result = Polynomial.constant(self.variables, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c: Scalar) -> 'Polynomial':
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.variables)
        return Polynomial._raw(self.variables, {m: c * v for m, v in self._terms.items()})

    def mul_term(self, mono: Monomial, c: Scalar) -> 'Polynomial':
        """Multiply by the single term c * x^mono."""
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.variables)
        return Polynomial._raw(self.variables, {mono_mul(m, mono): c * v for m, v in self._terms.items()})

    def monic(self, order: MonomialOrder = GREVLEX) -> 'Polynomial':
        return self.scale(1 / self.leading_coefficient(order))

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(self.variables, other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.variables == other.variables and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.variables, frozenset(self._terms.items())))
        return self._hash

    # -- calculus and evaluation -------------------------------------------

    def derivative(self, i: int) -> 'Polynomial':
        if not 0 <= i < self.nvars:
            raise IndexError(f"Variable index {i} out of range for {self.variables}")
        terms = {}
        for m, c in self._terms.items():
            if m[i]:
                terms[m[:i] + (m[i] - 1,) + m[i + 1:]] = c * m[i]
        return Polynomial._raw(self.variables, terms)

    def evaluate(self, point: Sequence[Scalar]) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"Point has {len(point)} coordinates, ambient has {self.nvars}")
        point = [_as_fraction(v) for v in point]
        total = Fraction(0)
        for m, c in self._terms.items():
            value = c
            for v, e in zip(point, m):
                if e:
                    value *= v ** e
            total += value
        return total

    def substitute(self, images: Sequence['Polynomial']) -> 'Polynomial':
        """Compose: replace variable i by images[i] (all in one target ambient)."""
        if len(images) != self.nvars:
            raise ValueError(f"Need {self.nvars} images, got {len(images)}")
        if not images:
            return self
        target = images[0].variables
        for img in images:
            if img.variables != target:
                raise AmbientMismatchError(target, img.variables)
        powers: List[Dict[int, Polynomial]] = [{0: Polynomial.constant(target, 1), 1: img} for img in images]

        def power(i: int, e: int) -> Polynomial:
            cache = powers[i]
            if e not in cache:
                cache[e] = power(i, e - 1) * images[i]
            return cache[e]

        result = Polynomial.zero(target)
        for m, c in self._terms.items():
            term = Polynomial.constant(target, c)
            for i, e in enumerate(m):
                if e:
                    term = term * power(i, e)
            result = result + term
        return result

    def translate(self, point: Sequence[Scalar]) -> 'Polynomial':
        """p(x + point), same ambient."""
        shifted = [Polynomial.variable(self.variables, i) + _as_fraction(v) for i, v in enumerate(point)]
        return self.substitute(shifted)

    def extend(self, variables: Sequence[str]) -> 'Polynomial':
        """Re-embed into an ambient containing all current variables."""
        variables = tuple(variables)
        try:
            index = [variables.index(v) for v in self.variables]
        except ValueError:
            raise AmbientMismatchError(self.variables, variables)
        terms = {}
        for m, c in self._terms.items():
            new = [0] * len(variables)
            for j, e in zip(index, m):
                new[j] = e
            terms[tuple(new)] = c
        return Polynomial._raw(variables, terms)

    def restrict(self, variables: Sequence[str]) -> 'Polynomial':
        """Inverse of extend; every dropped variable must be absent."""
        variables = tuple(variables)
        index = []
        for v in variables:
            if v not in self.variables:
                raise AmbientMismatchError(self.variables, variables)
            index.append(self.variables.index(v))
        dropped = [i for i in range(self.nvars) if i not in index]
        terms = {}
        for m, c in self._terms.items():
            if any(m[i] for i in dropped):
                raise ValueError(f"Polynomial involves variables outside {variables}")
            terms[tuple(m[i] for i in index)] = c
        return Polynomial._raw(variables, terms)

    def __str__(self):
        from polyparse import format_polynomial
        return format_polynomial(self)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, {list(self.variables)})"


# ---------------------------------------------------------------------------
# Public operations
# ---------------------------------------------------------------------------

def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    if p.variables != q.variables:
        raise AmbientMismatchError(p.variables, q.variables)
    return p * q


def partial_derivative(p: Polynomial, i: int) -> Polynomial:
    return p.derivative(i)


def evaluate(p: Polynomial, point: Sequence[Scalar]) -> Fraction:
    return p.evaluate(point)


def leading_term(p: Polynomial, order: MonomialOrder = GREVLEX) -> Tuple[Monomial, Fraction]:
    return p.leading_term(order)


def divide(p: Polynomial, q: Polynomial, order: MonomialOrder = GREVLEX) -> Tuple[Polynomial, Polynomial]:
    """Division by a single polynomial: p = quotient * q + remainder."""
    if q.is_zero():
        raise ZeroDivisionError("Division by the zero polynomial")
    if p.variables != q.variables:
        raise AmbientMismatchError(p.variables, q.variables)
    lm, lc = q.leading_term(order)
    quotient: Dict[Monomial, Fraction] = {}
    remainder: Dict[Monomial, Fraction] = {}
    current = p
    while not current.is_zero():
        m, c = current.leading_term(order)
        if mono_divides(lm, m):
            factor = mono_div(m, lm)
            coeff = c / lc
            quotient[factor] = quotient.get(factor, 0) + coeff
            current = current - q.mul_term(factor, coeff)
        else:
            remainder[m] = c
            current = current - Polynomial._raw(p.variables, {m: c})
    return Polynomial(p.variables, quotient), Polynomial(p.variables, remainder)


def exact_divide(p: Polynomial, q: Polynomial, order: MonomialOrder = GREVLEX) -> Polynomial:
    quotient, remainder = divide(p, q, order)
    if not remainder.is_zero():
        raise DivisionError(f"{q} does not divide {p}")
    return quotient


def polynomial_ring(names: Iterable[str]) -> Tuple[Polynomial, ...]:
    """Coordinate functions of k[names], in order."""
    names = tuple(names)
    return tuple(Polynomial.variable(names, i) for i in range(len(names)))


def determinant(matrix: Sequence[Sequence[Polynomial]]) -> Polynomial:
    """Laplace expansion along the first row; fine for the small minors used here."""
    size = len(matrix)
    if size == 0:
        raise ValueError("Determinant of an empty matrix needs an ambient")
    if size == 1:
        return matrix[0][0]
    if size == 2:
        return matrix[0][0] * matrix[1][1] - matrix[0][1] * matrix[1][0]
    total = Polynomial.zero(matrix[0][0].variables)
    for j in range(size):
        entry = matrix[0][j]
        if entry.is_zero():
            continue
        minor = [row[:j] + row[j + 1:] for row in matrix[1:]]
        term = entry * determinant(minor)
        total = total + term if j % 2 == 0 else total - term
    return total
