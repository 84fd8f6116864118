"""Exact linear algebra over Q, backed by sympy."""

import logging
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

import sympy as sp

from poly import GREVLEX, Monomial, Polynomial

logger = logging.getLogger(__name__)


def to_sympy(x) -> sp.Rational:
    if isinstance(x, Fraction):
        return sp.Rational(x.numerator, x.denominator)
    return sp.Rational(x)


def from_sympy(x) -> Fraction:
    x = sp.Rational(x)
    return Fraction(int(x.p), int(x.q))


def matrix(rows: Sequence[Sequence], ncols: Optional[int] = None) -> sp.Matrix:
    rows = [list(r) for r in rows]
    if not rows:
        return sp.zeros(0, ncols or 0)
    return sp.Matrix([[to_sympy(v) for v in r] for r in rows])


def rank(rows: Sequence[Sequence], ncols: Optional[int] = None) -> int:
    m = matrix(rows, ncols)
    if 0 in m.shape:
        return 0
    return m.rank()


def nullspace(rows: Sequence[Sequence], ncols: Optional[int] = None) -> List[List[Fraction]]:
    """Basis of {v : rows * v = 0}, as lists of Fractions."""
    m = matrix(rows, ncols)
    if m.shape[0] == 0:
        return [[Fraction(int(i == j)) for i in range(m.shape[1])] for j in range(m.shape[1])]
    return [[from_sympy(v) for v in vec] for vec in m.nullspace()]


def solve(rows: Sequence[Sequence], rhs: Sequence) -> Optional[List[Fraction]]:
    """One solution of rows * v = rhs (free parameters set to 0), or None."""
    m = matrix(rows)
    b = sp.Matrix([to_sympy(v) for v in rhs])
    try:
        solution, params = m.gauss_jordan_solve(b)
    except ValueError:
        return None
    if params.shape[0]:
        solution = solution.subs({p: 0 for p in params})
    return [from_sympy(v) for v in solution]


def coefficient_columns(polys: Sequence[Polynomial]) -> Tuple[List[List[Fraction]], List[Monomial]]:
    """Matrix whose column j holds the coefficients of polys[j]; rows follow the returned monomials."""
    monomials = sorted({m for p in polys for m in p.terms}, key=GREVLEX.key, reverse=True)
    rows = [[p.coefficient(m) for p in polys] for m in monomials]
    return rows, monomials


def polynomial_rank(polys: Sequence[Polynomial]) -> int:
    """Dimension of the Q-span of polys."""
    rows, _ = coefficient_columns(polys)
    return rank(rows, len(polys))


def in_span(p: Polynomial, polys: Sequence[Polynomial]) -> bool:
    return polynomial_rank(list(polys) + [p]) == polynomial_rank(polys)
