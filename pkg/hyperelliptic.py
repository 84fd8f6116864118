"""
Hyperelliptic curves y^2 = 2h(x), h monic of odd degree 2m + 1.

A = k[x] + y k[x] is handled through pairs (p, q) standing for p + y q. The
degree filtration gives deg x^k = 2k and deg x^k y = 2k + 2m + 1, and the
leading-term map sends A into the semigroup algebra on t^2, t^(2m+1).
On a smooth curve every field is f * tau; the bounded checks below look at
brackets of such fields in a finite degree window.
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple, Union

import linalg
from poly import MINUS_INFINITY, MonomialOrder, Polynomial, divide, is_minus_infinity
from polyparse import parse_polynomial
from variety import Variety
from vecfield import VectorField, ZeroFieldError

logger = logging.getLogger(__name__)

CURVE_VARIABLES = ('x', 'y')
UNIVARIATE = ('x',)

# y > x lexicographically, so normal forms have y-degree at most one
CURVE_ORDER = MonomialOrder('lex', (1, 0))

DEFAULT_DEGREE_BOUND = 12


# ---------------------------------------------------------------------------
# Univariate helpers
# ---------------------------------------------------------------------------

def _univariate(p: Union[str, Polynomial, int, Fraction]) -> Polynomial:
    if isinstance(p, str):
        return parse_polynomial(p, UNIVARIATE)
    if isinstance(p, Polynomial):
        if p.variables != UNIVARIATE:
            raise ValueError(f"{p} is not a polynomial in x alone")
        return p
    return Polynomial.constant(UNIVARIATE, p)


def univariate_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic gcd by the Euclidean algorithm; gcd(0, 0) = 0."""
    while not b.is_zero():
        _, r = divide(a, b)
        a, b = b, r
    if a.is_zero():
        return a
    return a.monic()


def _lift_x(p: Polynomial) -> Polynomial:
    return p.extend(CURVE_VARIABLES)


# ---------------------------------------------------------------------------
# Curve
# ---------------------------------------------------------------------------

class HyperellipticCurve:
    """The curve y^2 = 2h(x) and its coordinate ring."""

    def __init__(self, h: Union[str, Polynomial]):
        h = _univariate(h)
        d = h.degree()
        if is_minus_infinity(d) or d < 3 or d % 2 == 0:
            raise ValueError(f"h must have odd degree >= 3, got {h}")
        if h.leading_coefficient() != 1:
            raise ValueError(f"h must be monic, got {h}")
        self.h = h
        self.m = (d - 1) // 2
        self.dh = h.derivative(0)
        y = Polynomial.variable(CURVE_VARIABLES, 'y')
        self.equation = y * y - _lift_x(h) * 2
        self.variety = Variety(CURVE_VARIABLES, [self.equation], order=CURVE_ORDER,
                               name=f"y^2 = 2*({h})")

    @classmethod
    def from_line(cls, line: str) -> 'HyperellipticCurve':
        """Parse the 'h: <polynomial in x>' input form."""
        line = line.strip()
        if line.startswith('h:'):
            line = line[2:]
        return cls(line.strip())

    def element(self, p=0, q=0) -> 'HEElement':
        return HEElement(_univariate(p), _univariate(q), self)

    def zero(self) -> 'HEElement':
        return self.element()

    def one(self) -> 'HEElement':
        return self.element(1)

    def x(self) -> 'HEElement':
        return self.element(Polynomial.variable(UNIVARIATE, 0))

    def y(self) -> 'HEElement':
        return self.element(0, 1)

    def is_smooth(self) -> bool:
        return smoothness_gcd(self) == 1

    def __repr__(self):
        return f"HyperellipticCurve(h={self.h})"


@dataclass(frozen=True)
class HEElement:
    """p(x) + y q(x) in A."""
    p: Polynomial
    q: Polynomial
    curve: HyperellipticCurve = field(compare=False, repr=False)

    @classmethod
    def from_polynomial(cls, C: HyperellipticCurve, poly: Polynomial) -> 'HEElement':
        reduced = C.variety.reduce(poly)
        p, q = {}, {}
        for (i, j), c in reduced.terms.items():
            (p if j == 0 else q)[(i,)] = c
        return cls(Polynomial(UNIVARIATE, p), Polynomial(UNIVARIATE, q), C)

    def to_polynomial(self) -> Polynomial:
        y = Polynomial.variable(CURVE_VARIABLES, 'y')
        return _lift_x(self.p) + y * _lift_x(self.q)

    def _other(self, other) -> 'HEElement':
        if isinstance(other, HEElement):
            return other
        return self.curve.element(other)

    def __add__(self, other):
        other = self._other(other)
        return HEElement(self.p + other.p, self.q + other.q, self.curve)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._other(other)
        return HEElement(self.p - other.p, self.q - other.q, self.curve)

    def __neg__(self):
        return HEElement(-self.p, -self.q, self.curve)

    def __mul__(self, other):
        return he_multiply(self, self._other(other), self.curve)

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return self.p.is_zero() and self.q.is_zero()

    def __str__(self):
        return str(self.to_polynomial())


def he_multiply(u: HEElement, v: HEElement, C: HyperellipticCurve) -> HEElement:
    """(p1 + y q1)(p2 + y q2) with y^2 replaced by 2h."""
    p = u.p * v.p + C.h * u.q * v.q * 2
    q = u.p * v.q + u.q * v.p
    return HEElement(p, q, C)


def smoothness_gcd(C: HyperellipticCurve) -> Polynomial:
    """gcd(h, h'); the curve is smooth iff this is 1."""
    return univariate_gcd(C.h, C.dh)


# ---------------------------------------------------------------------------
# Module of derivations
# ---------------------------------------------------------------------------

@dataclass
class CurveGenerators:
    """tau always; mu only on singular curves, with y tau = d mu."""
    tau: VectorField
    d: Polynomial
    mu: Optional[VectorField] = None

    @property
    def fields(self) -> List[VectorField]:
        return [self.tau] if self.mu is None else [self.tau, self.mu]

    def to_json(self) -> Dict[str, Any]:
        return {'d': str(self.d), 'generators': [str(f) for f in self.fields]}


def module_generators(C: HyperellipticCurve) -> CurveGenerators:
    X = C.variety
    y = Polynomial.variable(CURVE_VARIABLES, 'y')
    tau = VectorField(X, [y, _lift_x(C.dh)])
    d = smoothness_gcd(C)
    if d == 1:
        return CurveGenerators(tau, d)
    h_d = divide(C.h, d)[0]
    dh_d = divide(C.dh, d)[0]
    mu = VectorField(X, [_lift_x(h_d) * 2, y * _lift_x(dh_d)])
    if tau.scale(y) != mu.scale(_lift_x(d)):
        raise ArithmeticError(f"y*tau != d*mu on {C}")
    logger.debug(f"Singular curve {C}: d = {d}, mu = {mu}")
    return CurveGenerators(tau, d, mu)


# ---------------------------------------------------------------------------
# Degree filtration and leading terms
# ---------------------------------------------------------------------------

def _monomial_degree(C: HyperellipticCurve, k: int, with_y: bool) -> int:
    return 2 * k + (2 * C.m + 1 if with_y else 0)


def he_degree(u: HEElement):
    """Filtration degree; MINUS_INFINITY for zero."""
    C = u.curve
    degrees = [_monomial_degree(C, m[0], False) for m in u.p.terms]
    degrees += [_monomial_degree(C, m[0], True) for m in u.q.terms]
    return max(degrees) if degrees else MINUS_INFINITY


def tau_apply(u: HEElement) -> HEElement:
    """tau(p + y q) = (h' q + 2h q') + y p'."""
    C = u.curve
    p = C.dh * u.q + C.h * u.q.derivative(0) * 2
    return HEElement(p, u.p.derivative(0), C)


def field_degree(f: HEElement):
    """deg(f tau) = deg f + 2m - 1."""
    d = he_degree(f)
    if is_minus_infinity(d):
        return d
    return d + 2 * f.curve.m - 1


def field_bracket(f: HEElement, g: HEElement) -> HEElement:
    """[f tau, g tau] = (f tau(g) - g tau(f)) tau, returned as its coefficient."""
    return f * tau_apply(g) - g * tau_apply(f)


def in_semigroup(d: int, m: int) -> bool:
    """d lies in the numerical semigroup generated by 2 and 2m + 1."""
    return d >= 0 and (d % 2 == 0 or d >= 2 * m + 1)


@dataclass(frozen=True)
class GradedSeriesElement:
    """Polynomial in t supported on the semigroup <2, 2m + 1>."""
    m: int
    coefficients: Tuple[Tuple[int, Fraction], ...]

    def __post_init__(self):
        for d, c in self.coefficients:
            if not in_semigroup(d, self.m):
                raise ValueError(f"t^{d} is outside the semigroup <2, {2 * self.m + 1}>")

    @classmethod
    def monomial(cls, m: int, d: int, c) -> 'GradedSeriesElement':
        c = Fraction(c)
        return cls(m, ((d, c),) if c else ())

    def __mul__(self, other: 'GradedSeriesElement') -> 'GradedSeriesElement':
        if other.m != self.m:
            raise ValueError("Graded elements of different curves")
        product: Dict[int, Fraction] = {}
        for d1, c1 in self.coefficients:
            for d2, c2 in other.coefficients:
                product[d1 + d2] = product.get(d1 + d2, Fraction(0)) + c1 * c2
        return GradedSeriesElement(self.m, tuple(sorted((d, c) for d, c in product.items() if c)))

    def __pow__(self, k: int) -> 'GradedSeriesElement':
        result = GradedSeriesElement.monomial(self.m, 0, 1)
        for _ in range(k):
            result = result * self
        return result

    def scale(self, c) -> 'GradedSeriesElement':
        c = Fraction(c)
        return GradedSeriesElement(self.m, tuple((d, a * c) for d, a in self.coefficients if a * c))

    def __str__(self):
        if not self.coefficients:
            return "0"
        parts = []
        for d, c in reversed(self.coefficients):
            body = f"t^{d}" if d > 1 else ("t" if d == 1 else "")
            coeff = "" if (c == 1 and body) else f"{c}*" if body else f"{c}"
            parts.append(f"{coeff}{body}")
        return " + ".join(parts)


def leading_term_map(u: HEElement) -> GradedSeriesElement:
    """psi of the leading monomial, with psi(x) = 2t^2 and psi(y) = 2^(m+1) t^(2m+1)."""
    if u.is_zero():
        raise ValueError("The zero element has no leading term")
    C = u.curve
    d = he_degree(u)
    if d % 2 == 0:
        k = d // 2
        c = u.p.coefficient((k,)) * 2 ** k
    else:
        k = (d - 2 * C.m - 1) // 2
        c = u.q.coefficient((k,)) * 2 ** (k + C.m + 1)
    return GradedSeriesElement.monomial(C.m, d, c)


def graded_bracket(a: int, b: int) -> Tuple[int, int]:
    """[t^a d/dt, t^b d/dt] = (b - a) t^(a+b-1) d/dt, as (coefficient, exponent)."""
    return b - a, a + b - 1


def graded_fields_commute(a: int, b: int) -> bool:
    coefficient, _ = graded_bracket(a, b)
    return coefficient == 0


# ---------------------------------------------------------------------------
# Bounded-window checks
# ---------------------------------------------------------------------------

def monomial_basis(C: HyperellipticCurve, max_degree: int) -> List[HEElement]:
    """x^k and x^k y of filtration degree at most max_degree, by increasing degree."""
    basis = []
    for d in range(max(max_degree, -1) + 1):
        if d % 2 == 0:
            basis.append(C.element(Polynomial.monomial(UNIVARIATE, (d // 2,))))
        elif d >= 2 * C.m + 1:
            basis.append(C.element(0, Polynomial.monomial(UNIVARIATE, ((d - 2 * C.m - 1) // 2,))))
    return basis


def field_basis(C: HyperellipticCurve, bound: int) -> List[HEElement]:
    """Coefficients g with deg(g tau) <= bound."""
    return monomial_basis(C, bound - (2 * C.m - 1))


def _require_field(C: HyperellipticCurve, f: HEElement) -> None:
    if not C.is_smooth():
        raise ValueError(f"{C} is singular; its fields are not multiples of tau")
    if f.is_zero():
        raise ZeroFieldError("eta = f * tau must be nonzero")


def _proportional(u: HEElement, v: HEElement) -> bool:
    """u is a rational multiple of the nonzero v."""
    return linalg.polynomial_rank([u.to_polynomial(), v.to_polynomial()]) <= 1


def kernel_ad_bounded(C: HyperellipticCurve, f: HEElement, bound: int = DEFAULT_DEGREE_BOUND) -> List[HEElement]:
    """Basis of {g tau : deg(g tau) <= bound, [f tau, g tau] = 0}, as coefficients g."""
    _require_field(C, f)
    basis = field_basis(C, bound)
    images = [field_bracket(f, g).to_polynomial() for g in basis]
    rows, _ = linalg.coefficient_columns(images)
    kernel = []
    for vector in linalg.nullspace(rows, len(basis)):
        g = C.zero()
        for coeff, b in zip(vector, basis):
            if coeff:
                g = g + b * coeff
        kernel.append(g)
    logger.debug(f"Kernel of ad({f} tau) up to degree {bound}: {len(kernel)} dimensional")
    return kernel


@dataclass
class ImageReport:
    eta: str
    eta_degree: int
    bound: int
    checked: int
    degree_increase: bool
    not_in_image: bool
    no_eigen_solution: bool
    nilpotency_fails: bool

    @property
    def ok(self) -> bool:
        return self.degree_increase and self.not_in_image and self.no_eigen_solution and self.nilpotency_fails

    def to_json(self) -> Dict[str, Any]:
        return {'eta': self.eta, 'eta_degree': self.eta_degree, 'bound': self.bound, 'checked': self.checked,
                'degree_increase': self.degree_increase, 'not_in_image': self.not_in_image,
                'no_eigen_solution': self.no_eigen_solution, 'nilpotency_fails': self.nilpotency_fails,
                'ok': self.ok}


def not_in_image_check(C: HyperellipticCurve, f: HEElement, bound: int = DEFAULT_DEGREE_BOUND,
                       iterations: int = 3) -> ImageReport:
    """eta = f tau is not in ad(eta) of the window, is no eigenvector of any ad(nu), and ad(eta) is not nilpotent."""
    _require_field(C, f)
    eta_degree = field_degree(f)
    basis = field_basis(C, bound)
    images = [field_bracket(f, g) for g in basis]

    degree_increase = all(img.is_zero() or field_degree(img) > eta_degree for img in images)

    polys = [img.to_polynomial() for img in images]
    not_in_image = not linalg.in_span(f.to_polynomial(), polys)

    # [nu, eta] = lambda eta, i.e. -sum c_i [eta, g_i] - lambda f = 0 with lambda != 0
    rows, _ = linalg.coefficient_columns([-p for p in polys] + [-f.to_polynomial()])
    no_eigen_solution = all(v[-1] == 0 for v in linalg.nullspace(rows, len(polys) + 1))

    nilpotency_fails = True
    for g in basis:
        if _proportional(g, f):
            continue
        current = g
        for _ in range(iterations):
            current = field_bracket(f, current)
            if current.is_zero() or _proportional(current, f):
                nilpotency_fails = False
                break
        if not nilpotency_fails:
            break

    report = ImageReport(str(f), eta_degree, bound, len(basis), degree_increase, not_in_image,
                         no_eigen_solution, nilpotency_fails)
    logger.info(f"Image check for ({f}) tau up to degree {bound}: ok={report.ok}")
    return report
