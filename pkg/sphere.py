"""
The sphere S^{N-1} = V(x_1^2 + ... + x_N^2 - 1).

Rotation fields Delta_ab, the sl_N action by vector fields, the Laplacian,
harmonic projection and decomposition of forms, and bounded-degree checks
that sl_N moves harmonics of degree l onto degrees l + 2 and l - 2.
Indices a, b are 1-based throughout, matching the usual matrix-unit
notation E_ab.
"""

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial
from typing import Any, Dict, List, Optional, Tuple

import linalg
from poly import Polynomial, exact_divide
from variety import Variety, dimension, is_smooth
from vecfield import VectorField

logger = logging.getLogger(__name__)

Matrix = List[List[Fraction]]


# ---------------------------------------------------------------------------
# Context and rotation fields
# ---------------------------------------------------------------------------

class SphereContext:
    """Coordinate ring of S^{N-1} with variables x1..xN."""

    def __init__(self, N: int):
        if N < 2:
            raise ValueError(f"The sphere needs N >= 2, got {N}")
        self.N = N
        self.variables = tuple(f"x{i}" for i in range(1, N + 1))
        coords = [Polynomial.variable(self.variables, i) for i in range(N)]
        self.r2 = sum((x * x for x in coords), Polynomial.zero(self.variables))
        self.variety = Variety(self.variables, [self.r2 - 1], name=f"S^{N - 1}")

    def x(self, a: int) -> Polynomial:
        return Polynomial.variable(self.variables, a - 1)

    def check(self) -> bool:
        """Smooth of dimension N - 1."""
        return bool(is_smooth(self.variety)) and dimension(self.variety) == self.N - 1

    def __repr__(self):
        return f"SphereContext(N={self.N})"


def delta_field(ctx: SphereContext, a: int, b: int) -> VectorField:
    """Delta_ab = x_b d/dx_a - x_a d/dx_b."""
    if a == b:
        raise ValueError("Delta_ab needs a != b")
    comps = [Polynomial.zero(ctx.variables) for _ in range(ctx.N)]
    comps[a - 1] = ctx.x(b)
    comps[b - 1] = -ctx.x(a)
    return VectorField(ctx.variety, comps)


def delta_relation(ctx: SphereContext, a: int, b: int, c: int) -> VectorField:
    """x_c Delta_ab + x_a Delta_bc + x_b Delta_ca, which vanishes."""
    return (delta_field(ctx, a, b).scale(ctx.x(c)) + delta_field(ctx, b, c).scale(ctx.x(a))
            + delta_field(ctx, c, a).scale(ctx.x(b)))


def rotation_fields(ctx: SphereContext) -> List[VectorField]:
    return [delta_field(ctx, a, b) for a in range(1, ctx.N + 1) for b in range(a + 1, ctx.N + 1)]


# ---------------------------------------------------------------------------
# sl_N
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SlElement:
    """E_ab (kind 'offdiag') or E_aa - E_bb (kind 'diag')."""
    kind: str
    a: int
    b: int

    def __post_init__(self):
        if self.kind not in ('offdiag', 'diag'):
            raise ValueError(f"Unknown sl element kind: {self.kind}")
        if self.a == self.b:
            raise ValueError("sl element indices must differ")

    def matrix(self, N: int) -> Matrix:
        if not (1 <= self.a <= N and 1 <= self.b <= N):
            raise ValueError(f"Indices ({self.a}, {self.b}) out of range for N = {N}")
        M = zero_matrix(N)
        if self.kind == 'offdiag':
            M[self.a - 1][self.b - 1] = Fraction(1)
        else:
            M[self.a - 1][self.a - 1] = Fraction(1)
            M[self.b - 1][self.b - 1] = Fraction(-1)
        return M

    def __str__(self):
        if self.kind == 'offdiag':
            return f"E{self.a}{self.b}"
        return f"E{self.a}{self.a}-E{self.b}{self.b}"


def zero_matrix(N: int) -> Matrix:
    return [[Fraction(0)] * N for _ in range(N)]


def commutator(X: Matrix, Y: Matrix) -> Matrix:
    N = len(X)
    return [[sum((X[i][k] * Y[k][j] - Y[i][k] * X[k][j] for k in range(N)), Fraction(0))
             for j in range(N)] for i in range(N)]


def sl_basis(N: int) -> List[SlElement]:
    basis = [SlElement('offdiag', a, b) for a in range(1, N + 1) for b in range(1, N + 1) if a != b]
    basis += [SlElement('diag', a, a + 1) for a in range(1, N)]
    return basis


def _as_matrix(ctx: SphereContext, X) -> Matrix:
    return X.matrix(ctx.N) if isinstance(X, SlElement) else [[Fraction(v) for v in row] for row in X]


def sl_field_components(ctx: SphereContext, X) -> List[Polynomial]:
    """Raw components of sum_ab M_ab sum_p x_b x_p Delta_ap, before reduction."""
    M = _as_matrix(ctx, X)
    N = ctx.N
    comps = [Polynomial.zero(ctx.variables) for _ in range(N)]
    for a in range(N):
        for b in range(N):
            if not M[a][b]:
                continue
            xb = ctx.x(b + 1)
            for p in range(N):
                if p == a:
                    continue
                weight = xb * ctx.x(p + 1) * M[a][b]
                # Delta_ap = x_p d/dx_a - x_a d/dx_p
                comps[a] = comps[a] + weight * ctx.x(p + 1)
                comps[p] = comps[p] - weight * ctx.x(a + 1)
    return comps


def sl_embedding(ctx: SphereContext, X) -> VectorField:
    """E_ab -> sum_p x_b x_p Delta_ap, extended linearly to any N x N matrix.

    This reverses brackets: [tau(X), tau(Y)] = tau([Y, X]) modulo the ideal.
    """
    return VectorField(ctx.variety, sl_field_components(ctx, X))


def sl_bracket_check(ctx: SphereContext) -> Dict[str, Any]:
    """[tau X, tau Y] + tau([X, Y]) = 0 for every basis pair, and tau(E_ab) - tau(E_ba) = Delta_ab."""
    basis = sl_basis(ctx.N)
    images = {str(X): sl_embedding(ctx, X) for X in basis}
    failures = []
    for X in basis:
        for Y in basis:
            lhs = images[str(X)].bracket(images[str(Y)])
            rhs = sl_embedding(ctx, commutator(X.matrix(ctx.N), Y.matrix(ctx.N)))
            if not (lhs + rhs).is_zero():
                failures.append(f"[{X}, {Y}]")
    so_failures = []
    for a in range(1, ctx.N + 1):
        for b in range(1, ctx.N + 1):
            if a == b:
                continue
            diff = images[f"E{a}{b}"] - images[f"E{b}{a}"]
            if diff != delta_field(ctx, a, b):
                so_failures.append(f"E{a}{b}-E{b}{a}")
    return {'pairs': len(basis) ** 2, 'failures': failures, 'so_failures': so_failures,
            'ok': not failures and not so_failures}


# ---------------------------------------------------------------------------
# Harmonics
# ---------------------------------------------------------------------------

def laplacian(f: Polynomial) -> Polynomial:
    total = Polynomial.zero(f.variables)
    for i in range(f.nvars):
        total = total + f.derivative(i).derivative(i)
    return total


def double_factorial(n: int) -> int:
    """n!! with (-1)!! = 0!! = 1."""
    if n < -1:
        raise ValueError(f"Double factorial undefined for {n}")
    result = 1
    while n > 1:
        result *= n
        n -= 2
    return result


def _form_degree(f: Polynomial, degree: Optional[int]) -> int:
    if degree is not None:
        if not f.is_zero() and (not f.is_homogeneous() or f.degree() != degree):
            raise ValueError(f"{f} is not a form of degree {degree}")
        return degree
    if f.is_zero():
        raise ValueError("The degree of the zero form must be given explicitly")
    if not f.is_homogeneous():
        raise ValueError(f"{f} is not homogeneous")
    return f.degree()


def _r2(variables: Tuple[str, ...]) -> Polynomial:
    return sum((Polynomial.variable(variables, i) ** 2 for i in range(len(variables))),
               Polynomial.zero(variables))


def _check_dimension(N: int) -> None:
    if N < 3:
        raise ValueError("Harmonic analysis here needs N >= 3")


def harmonic_project(f: Polynomial, N: Optional[int] = None, degree: Optional[int] = None) -> Polynomial:
    """Projection of a degree-l form onto the harmonic forms H_l."""
    N = N or f.nvars
    _check_dimension(N)
    l = _form_degree(f, degree)
    r2 = _r2(f.variables)
    result = Polynomial.zero(f.variables)
    power = f
    r_power = Polynomial.constant(f.variables, 1)
    denominator = double_factorial(N + 2 * l - 4)
    for k in range(l // 2 + 1):
        if power.is_zero():
            break
        c = Fraction((-1) ** k * double_factorial(N + 2 * l - 2 * k - 4),
                     2 ** k * factorial(k) * denominator)
        result = result + r_power * power * c
        power = laplacian(power)
        r_power = r_power * r2
    return result


@dataclass
class HarmonicDecomposition:
    """f = sum over components of r^(degree - level) * h_level."""
    degree: int
    components: List[Tuple[int, Polynomial]]

    def component(self, level: int) -> Polynomial:
        for lvl, h in self.components:
            if lvl == level:
                return h
        variables = self.components[0][1].variables
        return Polynomial.zero(variables)

    def reassemble(self) -> Polynomial:
        variables = self.components[0][1].variables
        r2 = _r2(variables)
        total = Polynomial.zero(variables)
        for level, h in self.components:
            total = total + h * r2 ** ((self.degree - level) // 2)
        return total

    def to_json(self) -> Dict[str, Any]:
        return {'degree': self.degree,
                'components': [{'level': level, 'polynomial': str(h)} for level, h in self.components]}


def harmonic_decompose(f: Polynomial, N: Optional[int] = None, degree: Optional[int] = None) -> HarmonicDecomposition:
    """Peel harmonic components off a degree-l form, dividing the rest by r^2."""
    N = N or f.nvars
    _check_dimension(N)
    l = _form_degree(f, degree)
    r2 = _r2(f.variables)
    components = []
    current = f
    level = l
    while level >= 0:
        h = harmonic_project(current, N, level)
        components.append((level, h))
        rest = current - h
        if level < 2:
            if not rest.is_zero():
                raise ArithmeticError(f"Nonzero remainder {rest} after the last harmonic component")
            break
        current = exact_divide(rest, r2)
        level -= 2
    return HarmonicDecomposition(l, components)


def monomials_of_degree(n: int, d: int) -> List[Tuple[int, ...]]:
    result = []
    for combo in combinations_with_replacement(range(n), d):
        exps = [0] * n
        for i in combo:
            exps[i] += 1
        result.append(tuple(exps))
    return sorted(result, reverse=True)


def forms_of_degree(variables: Tuple[str, ...], d: int) -> List[Polynomial]:
    return [Polynomial.monomial(variables, m) for m in monomials_of_degree(len(variables), d)]


def harmonic_dimension(N: int, l: int) -> int:
    """dim H_l as the kernel dimension of the Laplacian on degree-l forms."""
    variables = tuple(f"x{i}" for i in range(1, N + 1))
    forms = forms_of_degree(variables, l)
    images = [laplacian(f) for f in forms]
    return len(forms) - linalg.polynomial_rank(images)


def harmonic_dimension_formula(N: int, l: int) -> int:
    """(N + 2l - 2)(N + l - 3)! / (l! (N - 2)!)."""
    if N < 3:
        raise ValueError("Closed form needs N >= 3")
    return (N + 2 * l - 2) * factorial(N + l - 3) // (factorial(l) * factorial(N - 2))


def harmonic_spanning_set(ctx: SphereContext, l: int) -> List[Polynomial]:
    projections = [harmonic_project(f, ctx.N, l) for f in forms_of_degree(ctx.variables, l)]
    return [p for p in projections if not p.is_zero()]


def homogenize(g: Polynomial, degree: int, N: Optional[int] = None) -> Polynomial:
    """The degree-`degree` form equal to g on the sphere: multiply each part by a power of r^2."""
    r2 = _r2(g.variables)
    total = Polynomial.zero(g.variables)
    if g.is_zero():
        return total
    for d in sorted({sum(m) for m in g.terms}):
        if d > degree or (degree - d) % 2:
            raise ValueError(f"Part of degree {d} cannot be lifted to degree {degree}")
        total = total + g.homogeneous_part(d) * r2 ** ((degree - d) // 2)
    return total


def parity_preserved(ctx: SphereContext, f: Polynomial) -> bool:
    """sl_N maps f to functions whose parts all have the parity of deg f."""
    if f.is_zero():
        return True
    parities = {sum(m) % 2 for m in f.terms}
    if len(parities) != 1:
        raise ValueError("f mixes even and odd parts")
    parity = parities.pop()
    for X in sl_basis(ctx.N):
        image = sl_embedding(ctx, X).apply(f).rep
        if any(sum(m) % 2 != parity for m in image.terms):
            return False
    return True


# ---------------------------------------------------------------------------
# Spread and generation
# ---------------------------------------------------------------------------

@dataclass
class SpreadReport:
    level: int
    element: str
    g: Polynomial
    components: Dict[int, Polynomial]
    lower_vanish: bool
    laplacian_cubed_zero: bool
    decomposition: Optional[HarmonicDecomposition] = None

    @property
    def ok(self) -> bool:
        return self.lower_vanish and self.laplacian_cubed_zero

    def to_json(self) -> Dict[str, Any]:
        return {
            'level': self.level, 'element': self.element, 'g': str(self.g),
            'components': {str(k): str(v) for k, v in sorted(self.components.items())},
            'lower_vanish': self.lower_vanish, 'laplacian_cubed_zero': self.laplacian_cubed_zero,
        }


def sl_image_form(ctx: SphereContext, X, h: Polynomial, l: int) -> Polynomial:
    """tau(X) h lifted to a form of degree l + 2."""
    value = sl_embedding(ctx, X).apply(h).rep
    return homogenize(value, l + 2)


def spread_check(h: Polynomial, X, ctx: SphereContext, degree: Optional[int] = None) -> SpreadReport:
    """tau(X) h only has harmonic components in degrees l + 2, l, l - 2."""
    _check_dimension(ctx.N)
    l = _form_degree(h, degree)
    if not laplacian(h).is_zero():
        raise ValueError(f"{h} is not harmonic")
    g = sl_image_form(ctx, X, h, l)
    name = str(X) if isinstance(X, SlElement) else 'matrix'
    if g.is_zero():
        zero = Polynomial.zero(ctx.variables)
        return SpreadReport(l, name, g, {l + 2: zero, l: zero, l - 2: zero}, True, True)
    decomposition = harmonic_decompose(g, ctx.N, l + 2)
    comps = {level: decomposition.component(level) for level in (l + 2, l, l - 2)}
    lower_vanish = all(hc.is_zero() for level, hc in decomposition.components if level < l - 2)
    cubed = laplacian(laplacian(laplacian(g)))
    return SpreadReport(l, name, g, comps, lower_vanish, cubed.is_zero(), decomposition)


@dataclass
class GenerationReport:
    N: int
    level: int
    direction: str
    target_level: int
    target_dimension: int
    rank: int

    @property
    def ok(self) -> bool:
        return self.target_dimension > 0 and self.rank == self.target_dimension

    def to_json(self) -> Dict[str, Any]:
        return {'N': self.N, 'level': self.level, 'direction': self.direction,
                'target_level': self.target_level, 'target_dimension': self.target_dimension,
                'rank': self.rank, 'ok': self.ok}


def generation_check(ctx: SphereContext, l: int, direction: str = 'up',
                     max_workers: int = 4) -> GenerationReport:
    """Do sl_N-images of H_l project onto all of H_{l+2} (up) or H_{l-2} (down)?"""
    _check_dimension(ctx.N)
    if direction not in ('up', 'down'):
        raise ValueError(f"direction must be 'up' or 'down', got {direction!r}")
    if l < 0 or (direction == 'down' and l < 2):
        raise ValueError(f"No {direction} step from level {l}")
    target = l + 2 if direction == 'up' else l - 2
    spanning = harmonic_spanning_set(ctx, l)
    pairs = [(X, h) for X in sl_basis(ctx.N) for h in spanning]

    def project(pair) -> Polynomial:
        X, h = pair
        g = sl_image_form(ctx, X, h, l)
        if g.is_zero():
            return g
        return harmonic_decompose(g, ctx.N, l + 2).component(target)

    with ThreadPoolExecutor(max_workers=max_workers) as executor:
        projections = list(executor.map(project, pairs))
    rank = linalg.polynomial_rank([p for p in projections if not p.is_zero()])
    report = GenerationReport(ctx.N, l, direction, target, harmonic_dimension(ctx.N, target), rank)
    logger.info(f"Generation N={ctx.N} l={l} {direction}: rank {rank} of {report.target_dimension}")
    return report
