"""
SL_n as an affine group: Hopf structure and invariant vector fields.

Coordinates are the matrix entries (a, b, c, d for n = 2, x11..xnn
otherwise) modulo det - 1. Tensor powers of the coordinate ring are
polynomials in indexed copies (a_1, a_2, ...) of the coordinates, one copy per factor.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, List, Optional, Sequence, Tuple

import linalg
from poly import Monomial, Polynomial, determinant
from variety import QuotientElement, Variety, is_smooth
from vecfield import VectorField

logger = logging.getLogger(__name__)

Matrix = Tuple[Tuple[Fraction, ...], ...]


def _names(n: int) -> Tuple[str, ...]:
    if n == 2:
        return ('a', 'b', 'c', 'd')
    return tuple(f"x{i}{j}" for i in range(1, n + 1) for j in range(1, n + 1))


def _copy_names(names: Sequence[str], k: int) -> Tuple[str, ...]:
    return tuple(f"{v}_{k}" for v in names)


# ---------------------------------------------------------------------------
# Context
# ---------------------------------------------------------------------------

class GroupContext:
    """Coordinate ring of SL_n, n = 2 by default; n = 3 only with allow_slow."""

    def __init__(self, n: int = 2, allow_slow: bool = False):
        if n not in (2, 3):
            raise ValueError(f"Only SL_2 and SL_3 are supported, got n = {n}")
        if n == 3 and not allow_slow:
            raise ValueError("SL_3 checks are slow; pass allow_slow=True")
        self.n = n
        self.variables = _names(n)
        self.det = determinant(self.matrix())
        self.variety = Variety(self.variables, [self.det - 1], name=f"SL_{n}")
        self.identity = tuple(Fraction(int(i == j)) for i in range(n) for j in range(n))
        self._tensor_varieties: Dict[int, Variety] = {}

    def index(self, i: int, j: int) -> int:
        """Position of the entry (i, j), 0-based."""
        return i * self.n + j

    def x(self, i: int, j: int, variables: Optional[Sequence[str]] = None) -> Polynomial:
        if variables is None:
            return Polynomial.variable(self.variables, self.index(i, j))
        return Polynomial.variable(variables, self.index(i, j))

    def matrix(self, variables: Optional[Sequence[str]] = None, offset: int = 0) -> List[List[Polynomial]]:
        variables = tuple(variables or self.variables)
        return [[Polynomial.variable(variables, offset + self.index(i, j)) for j in range(self.n)]
                for i in range(self.n)]

    def lift(self, f) -> Polynomial:
        if isinstance(f, QuotientElement):
            return f.rep
        if isinstance(f, Polynomial):
            return f
        if isinstance(f, str):
            return self.variety.polynomial(f)
        return Polynomial.constant(self.variables, f)

    def tensor_variables(self, k: int) -> Tuple[str, ...]:
        return tuple(v for i in range(1, k + 1) for v in _copy_names(self.variables, i))

    def tensor_variety(self, k: int) -> Variety:
        """A^{(x) k}: one copy of det - 1 per factor."""
        if k not in self._tensor_varieties:
            variables = self.tensor_variables(k)
            N = len(self.variables)
            gens = [determinant(self.matrix(variables, offset=i * N)) - 1 for i in range(k)]
            self._tensor_varieties[k] = Variety(variables, gens, name=f"SL_{self.n}^{k}")
        return self._tensor_varieties[k]

    def tangent_basis(self) -> List['TangentVectorAtE']:
        """E_ij (i != j), then E_ii - E_nn (i < n)."""
        n = self.n
        basis = []
        for i in range(n):
            for j in range(n):
                if i != j:
                    basis.append(TangentVectorAtE.unit(n, [((i, j), 1)]))
        for i in range(n - 1):
            basis.append(TangentVectorAtE.unit(n, [((i, i), 1), ((n - 1, n - 1), -1)]))
        return basis

    def cotangent_basis(self) -> List[Polynomial]:
        """x_ij (i != j), then x_ii - 1 (i < n); dual to tangent_basis."""
        n = self.n
        basis = [self.x(i, j) for i in range(n) for j in range(n) if i != j]
        basis += [self.x(i, i) - 1 for i in range(n - 1)]
        return basis

    def check(self) -> bool:
        return self.det.evaluate(self.identity) == 1 and bool(is_smooth(self.variety))

    def __repr__(self):
        return f"GroupContext(n={self.n})"


@dataclass(frozen=True)
class TangentVectorAtE:
    """Trace-zero matrix, read as a derivation at the identity."""
    matrix: Matrix

    def __post_init__(self):
        if sum(self.matrix[i][i] for i in range(len(self.matrix))) != 0:
            raise ValueError("Tangent vectors to SL_n at e have trace zero")

    @classmethod
    def unit(cls, n: int, entries: Sequence[Tuple[Tuple[int, int], int]]) -> 'TangentVectorAtE':
        rows = [[Fraction(0)] * n for _ in range(n)]
        for (i, j), c in entries:
            rows[i][j] += Fraction(c)
        return cls(tuple(tuple(r) for r in rows))

    @classmethod
    def from_matrix(cls, rows: Sequence[Sequence]) -> 'TangentVectorAtE':
        return cls(tuple(tuple(Fraction(v) for v in r) for r in rows))

    @property
    def n(self) -> int:
        return len(self.matrix)

    def coefficients(self) -> Tuple[Fraction, ...]:
        """Coordinates over E_ij (i != j), E_ii - E_nn."""
        n = self.n
        off = [self.matrix[i][j] for i in range(n) for j in range(n) if i != j]
        return tuple(off + [self.matrix[i][i] for i in range(n - 1)])

    def __add__(self, other: 'TangentVectorAtE') -> 'TangentVectorAtE':
        return TangentVectorAtE(tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.matrix, other.matrix)))

    def scale(self, c) -> 'TangentVectorAtE':
        c = Fraction(c)
        return TangentVectorAtE(tuple(tuple(a * c for a in r) for r in self.matrix))

    def bracket(self, other: 'TangentVectorAtE') -> 'TangentVectorAtE':
        n = self.n
        M, K = self.matrix, other.matrix
        return TangentVectorAtE(tuple(
            tuple(sum((M[i][k] * K[k][j] - K[i][k] * M[k][j] for k in range(n)), Fraction(0)) for j in range(n))
            for i in range(n)))

    def is_zero(self) -> bool:
        return not any(v for r in self.matrix for v in r)

    def __str__(self):
        text = ""
        n = self.n
        for i in range(n):
            for j in range(n):
                c = self.matrix[i][j]
                if not c:
                    continue
                unit = f"E{i + 1}{j + 1}" if abs(c) == 1 else f"{abs(c)}*E{i + 1}{j + 1}"
                if not text:
                    text = unit if c > 0 else f"-{unit}"
                else:
                    text += f" + {unit}" if c > 0 else f" - {unit}"
        return text or "0"


# ---------------------------------------------------------------------------
# Hopf structure
# ---------------------------------------------------------------------------

class TensorSum:
    """Element of the k-fold tensor power, stored as one polynomial in k copies."""

    def __init__(self, ctx: GroupContext, poly: Polynomial, factors: int = 2):
        self.ctx = ctx
        self.factors = factors
        if poly.variables != ctx.tensor_variables(factors):
            raise ValueError("Tensor polynomial over the wrong copies")
        self.poly = poly

    def normalized(self) -> Polynomial:
        return self.ctx.tensor_variety(self.factors).reduce(self.poly)

    def split(self) -> List[Tuple[Polynomial, ...]]:
        """Sum of pure tensors: each term split into its factors (coefficient on the first)."""
        N = len(self.ctx.variables)
        names = self.ctx.variables
        result = []
        for mono, c in sorted(self.poly.terms.items(), reverse=True):
            parts = []
            for k in range(self.factors):
                piece = mono[k * N:(k + 1) * N]
                parts.append(Polynomial.monomial(names, piece, c if k == 0 else 1))
            result.append(tuple(parts))
        return result

    def pairs(self) -> List[Tuple[QuotientElement, QuotientElement]]:
        """Sum f1 (x) f2 grouped by the first factor, both reduced mod det - 1."""
        if self.factors != 2:
            raise ValueError("pairs() needs a two-fold tensor")
        X = self.ctx.variety
        grouped: Dict[Monomial, Polynomial] = {}
        N = len(self.ctx.variables)
        for mono, c in self.normalized().terms.items():
            left, right = mono[:N], mono[N:]
            term = Polynomial.monomial(self.ctx.variables, right, c)
            grouped[left] = grouped.get(left, Polynomial.zero(self.ctx.variables)) + term
        return [(X.element(Polynomial.monomial(self.ctx.variables, left)), X.element(right))
                for left, right in sorted(grouped.items(), reverse=True) if not right.is_zero()]

    def __eq__(self, other):
        if not isinstance(other, TensorSum):
            return NotImplemented
        return self.factors == other.factors and self.normalized() == other.normalized()

    def __hash__(self):
        return hash(self.normalized())

    def __str__(self):
        return " + ".join(f"({a}) (x) ({b})" for a, b in self.pairs()) or "0"


def _product_images(ctx: GroupContext, variables: Sequence[str], copies: Sequence[int]) -> List[Polynomial]:
    """x_ij -> entries of the matrix product of the given copies (0-based)."""
    N = len(ctx.variables)
    mats = [ctx.matrix(variables, offset=k * N) for k in copies]
    product = mats[0]
    for M in mats[1:]:
        product = [[sum((product[i][k] * M[k][j] for k in range(ctx.n)), Polynomial.zero(variables))
                    for j in range(ctx.n)] for i in range(ctx.n)]
    return [product[i][j] for i in range(ctx.n) for j in range(ctx.n)]


def coproduct(ctx: GroupContext, f) -> TensorSum:
    """Delta(x_ij) = sum_k x_ik (x) x_kj, extended multiplicatively."""
    variables = ctx.tensor_variables(2)
    return TensorSum(ctx, ctx.lift(f).substitute(_product_images(ctx, variables, [0, 1])), 2)


def triple_coproduct(ctx: GroupContext, f) -> TensorSum:
    variables = ctx.tensor_variables(3)
    return TensorSum(ctx, ctx.lift(f).substitute(_product_images(ctx, variables, [0, 1, 2])), 3)


def coassociativity_sides(ctx: GroupContext, f) -> Tuple[TensorSum, TensorSum]:
    """(Delta (x) id) Delta f and (id (x) Delta) Delta f, computed separately."""
    variables = ctx.tensor_variables(3)
    delta = coproduct(ctx, f).poly
    N = len(ctx.variables)

    def copy(k: int) -> List[Polynomial]:
        return [Polynomial.variable(variables, k * N + i) for i in range(N)]

    left_first = _product_images(ctx, variables, [0, 1]) + copy(2)
    right_first = copy(0) + _product_images(ctx, variables, [1, 2])
    return (TensorSum(ctx, delta.substitute(left_first), 3),
            TensorSum(ctx, delta.substitute(right_first), 3))


def counit(ctx: GroupContext, f) -> Fraction:
    return ctx.lift(f).evaluate(ctx.identity)


def antipode_images(ctx: GroupContext) -> List[Polynomial]:
    """S(x_ij) = adj(X)_ij, the inverse on det = 1."""
    n = ctx.n
    M = ctx.matrix()
    images = []
    for i in range(n):
        for j in range(n):
            minor = [[M[r][c] for c in range(n) if c != i] for r in range(n) if r != j]
            sign = -1 if (i + j) % 2 else 1
            images.append(determinant(minor) * sign)
    return images


def antipode(ctx: GroupContext, f) -> QuotientElement:
    return ctx.variety.element(ctx.lift(f).substitute(antipode_images(ctx)))


# ---------------------------------------------------------------------------
# Directional derivatives and invariant fields
# ---------------------------------------------------------------------------

def directional_derivative(phi: TangentVectorAtE, f, ctx: Optional[GroupContext] = None) -> Fraction:
    """phi^(f) = phi(f - f(e)), i.e. sum_ij M_ij df/dx_ij at e."""
    ctx = ctx or GroupContext(phi.n, allow_slow=True)
    p = ctx.lift(f)
    total = Fraction(0)
    for i in range(ctx.n):
        for j in range(ctx.n):
            c = phi.matrix[i][j]
            if c:
                total += c * p.derivative(ctx.index(i, j)).evaluate(ctx.identity)
    return total


def _apply_to_factor(ctx: GroupContext, f, functional, keep: int) -> Polynomial:
    """Apply `functional` to every factor but `keep` of the coproduct of f, for 2 factors."""
    total = Polynomial.zero(ctx.variables)
    for first, second in coproduct(ctx, f).split():
        if keep == 0:
            total = total + first * functional(second)
        else:
            total = total + second * functional(first)
    return total


def act_left(ctx: GroupContext, phi: TangentVectorAtE, f) -> QuotientElement:
    """theta_L(phi) f = sum phi^(f2) f1."""
    return ctx.variety.element(_apply_to_factor(ctx, f, lambda g: directional_derivative(phi, g, ctx), keep=0))


def act_right(ctx: GroupContext, phi: TangentVectorAtE, f) -> QuotientElement:
    """theta_R(phi) f = sum phi^(f1) f2."""
    return ctx.variety.element(_apply_to_factor(ctx, f, lambda g: directional_derivative(phi, g, ctx), keep=1))


def _check_size(ctx: GroupContext, phi: TangentVectorAtE) -> None:
    if phi.n != ctx.n:
        raise ValueError(f"Tangent vector of size {phi.n} for SL_{ctx.n}")


def left_invariant_field(ctx: GroupContext, phi: TangentVectorAtE) -> VectorField:
    """Components theta_L(phi)(x_ij) = (x M)_ij, computed through the coproduct."""
    _check_size(ctx, phi)
    comps = [act_left(ctx, phi, ctx.x(i, j)) for i in range(ctx.n) for j in range(ctx.n)]
    return VectorField(ctx.variety, comps)


def right_invariant_field(ctx: GroupContext, phi: TangentVectorAtE) -> VectorField:
    """Components theta_R(phi)(x_ij) = (M x)_ij."""
    _check_size(ctx, phi)
    comps = [act_right(ctx, phi, ctx.x(i, j)) for i in range(ctx.n) for j in range(ctx.n)]
    return VectorField(ctx.variety, comps)


def mixed_action(ctx: GroupContext, phi: TangentVectorAtE, psi: TangentVectorAtE, f) -> QuotientElement:
    """sum psi^(f[1]) phi^(f[3]) f[2], which equals theta_L(phi) theta_R(psi) f."""
    total = Polynomial.zero(ctx.variables)
    for first, second, third in triple_coproduct(ctx, f).split():
        weight = directional_derivative(psi, first, ctx) * directional_derivative(phi, third, ctx)
        if weight:
            total = total + second * weight
    return ctx.variety.element(total)


# ---------------------------------------------------------------------------
# Gamma and the trivialization of D
# ---------------------------------------------------------------------------

def gamma(ctx: GroupContext, eta: VectorField, f, side: str = 'left') -> QuotientElement:
    """Gamma(eta (x) f) = sum S(f1) eta(f2) (left) or sum eta(f1) S(f2) (right).

    At x this is eta applied to z -> f(x^-1 z) (resp. f(z x^-1)), evaluated at z = x.
    """
    if side not in ('left', 'right'):
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    p = ctx.lift(f)
    if p.evaluate(ctx.identity) != 0:
        raise ValueError(f"{p} does not vanish at the identity")
    S = antipode_images(ctx)
    total = Polynomial.zero(ctx.variables)
    for first, second in coproduct(ctx, p).split():
        if side == 'left':
            total = total + first.substitute(S) * eta.apply(second).rep
        else:
            total = total + eta.apply(first).rep * second.substitute(S)
    return ctx.variety.element(total)


def _invariant_field(ctx: GroupContext, side: str):
    return left_invariant_field if side == 'left' else right_invariant_field


def trivialize(ctx: GroupContext, eta: VectorField, side: str = 'left') -> List[Tuple[QuotientElement, TangentVectorAtE]]:
    """delta(eta) = sum_i Gamma(eta (x) f_i) (x) phi_i over the dual bases."""
    return [(gamma(ctx, eta, f_i, side), phi_i)
            for f_i, phi_i in zip(ctx.cotangent_basis(), ctx.tangent_basis())]


def untrivialize(ctx: GroupContext, pairs: Sequence[Tuple[Any, TangentVectorAtE]], side: str = 'left') -> VectorField:
    """epsilon: sum a_i theta(phi_i)."""
    field_of = _invariant_field(ctx, side)
    total = VectorField.zero(ctx.variety)
    for a, phi in pairs:
        total = total + field_of(ctx, phi).scale(a)
    return total


# ---------------------------------------------------------------------------
# Checks
# ---------------------------------------------------------------------------

def commutation_check(ctx: GroupContext, max_workers: int = 4) -> bool:
    """[theta_L(phi), theta_R(psi)] = 0 for all basis pairs."""
    basis = ctx.tangent_basis()
    lefts = [left_invariant_field(ctx, phi) for phi in basis]
    rights = [right_invariant_field(ctx, psi) for psi in basis]
    pairs = [(L, R) for L in lefts for R in rights]
    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        results = list(executor.map(lambda pair: pair[0].bracket(pair[1]).is_zero(), pairs))
    logger.info(f"Commutation on SL_{ctx.n}: {sum(results)} of {len(results)} pairs commute")
    return all(results)


@dataclass
class StructureReport:
    pairs: int
    mismatches: List[str]
    nonabelian: bool

    @property
    def ok(self) -> bool:
        return not self.mismatches and self.nonabelian

    def to_json(self) -> Dict[str, Any]:
        return {'pairs': self.pairs, 'mismatches': self.mismatches, 'nonabelian': self.nonabelian, 'ok': self.ok}


def structure_check(ctx: GroupContext) -> StructureReport:
    """[theta_L(phi), theta_L(psi)] = theta_L([phi, psi]) over the basis."""
    basis = ctx.tangent_basis()
    fields = [left_invariant_field(ctx, phi) for phi in basis]
    mismatches = []
    nonabelian = False
    for phi, F in zip(basis, fields):
        for psi, G in zip(basis, fields):
            lhs = F.bracket(G)
            if not lhs.is_zero():
                nonabelian = True
            if lhs != left_invariant_field(ctx, phi.bracket(psi)):
                mismatches.append(f"[{phi}, {psi}]")
    return StructureReport(len(basis) ** 2, mismatches, nonabelian)


def gamma_kronecker_check(ctx: GroupContext, side: str = 'left') -> bool:
    field_of = _invariant_field(ctx, side)
    fields = [field_of(ctx, phi) for phi in ctx.tangent_basis()]
    for i, f_i in enumerate(ctx.cotangent_basis()):
        for j, eta in enumerate(fields):
            if gamma(ctx, eta, f_i, side) != int(i == j):
                return False
    return True


def independent_at_identity(ctx: GroupContext) -> bool:
    """The n^2 - 1 left-invariant fields have independent values at e."""
    values = [left_invariant_field(ctx, phi).evaluate(ctx.identity) for phi in ctx.tangent_basis()]
    return linalg.rank(values) == ctx.n ** 2 - 1


def roundtrip_check(ctx: GroupContext, fields: Sequence[VectorField], side: str = 'left') -> bool:
    """epsilon(delta(eta)) = eta for every given field."""
    for eta in fields:
        if untrivialize(ctx, trivialize(ctx, eta, side), side) != eta:
            logger.warning(f"Trivialization round trip failed for {eta}")
            return False
    return True
