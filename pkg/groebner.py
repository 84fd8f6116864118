"""
Gröbner bases for ideals and for submodules of free modules R^l.

One engine serves both: an ideal is a submodule of R^1. Module elements
are sparse maps (component, monomial) -> Fraction compared position over
term (lower component index ranks higher, then the monomial order).
Pairs are chosen by the normal strategy (smallest lcm degree) and pruned
with Buchberger's chain criterion, plus the product criterion for ideals.
Cofactor tracking is opt-in and expresses every basis element in the
original inputs.
"""

import heapq
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from poly import (
    GREVLEX, Monomial, MonomialOrder, Polynomial,
    mono_div, mono_divides, mono_lcm, mono_mul,
)

logger = logging.getLogger(__name__)

_Term = Tuple[int, Monomial]
_Vec = Dict[_Term, Fraction]


class CertificateError(ArithmeticError):
    """A produced certificate failed its own expansion check."""


class RankMismatchError(ValueError):
    """Module vectors with different component counts."""

    def __init__(self, expected: int, got: int):
        self.expected = expected
        self.got = got
        super().__init__(f"Expected vectors with {expected} components, got {got}")


# ---------------------------------------------------------------------------
# Free module vectors
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FreeModuleVector:
    """Element of R^l, R = Q[variables]."""
    components: Tuple[Polynomial, ...]

    def __post_init__(self):
        object.__setattr__(self, 'components', tuple(self.components))
        if not self.components:
            raise ValueError("A free module vector needs at least one component")
        variables = self.components[0].variables
        for c in self.components:
            if c.variables != variables:
                raise ValueError("Components live in different ambients")

    @classmethod
    def zero(cls, variables: Sequence[str], rank: int) -> 'FreeModuleVector':
        return cls(tuple(Polynomial.zero(variables) for _ in range(rank)))

    @classmethod
    def unit(cls, variables: Sequence[str], rank: int, i: int) -> 'FreeModuleVector':
        return cls(tuple(Polynomial.constant(variables, 1 if j == i else 0) for j in range(rank)))

    @property
    def variables(self) -> Tuple[str, ...]:
        return self.components[0].variables

    @property
    def rank(self) -> int:
        return len(self.components)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def __add__(self, other: 'FreeModuleVector') -> 'FreeModuleVector':
        return FreeModuleVector(tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other: 'FreeModuleVector') -> 'FreeModuleVector':
        return FreeModuleVector(tuple(a - b for a, b in zip(self.components, other.components)))

    def __neg__(self):
        return FreeModuleVector(tuple(-c for c in self.components))

    def times(self, p) -> 'FreeModuleVector':
        return FreeModuleVector(tuple(p * c for c in self.components))

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __str__(self):
        return '(' + ', '.join(str(c) for c in self.components) + ')'


def _to_vec(v: FreeModuleVector) -> _Vec:
    return {(i, m): c for i, comp in enumerate(v.components) for m, c in comp.terms.items()}


def _poly_to_vec(p: Polynomial) -> _Vec:
    return {(0, m): c for m, c in p.terms.items()}


def _from_vec(vec: _Vec, variables: Tuple[str, ...], rank: int) -> FreeModuleVector:
    parts: List[Dict[Monomial, Fraction]] = [{} for _ in range(rank)]
    for (i, m), c in vec.items():
        parts[i][m] = c
    return FreeModuleVector(tuple(Polynomial(variables, part) for part in parts))


def _dict_poly(d: Dict[Monomial, Fraction], variables: Tuple[str, ...]) -> Polynomial:
    return Polynomial(variables, d)


# ---------------------------------------------------------------------------
# Engine internals
# ---------------------------------------------------------------------------

class _Desc:
    """Heap entry giving max-heap behavior on order keys."""
    __slots__ = ('key', 'term')

    def __init__(self, key, term):
        self.key = key
        self.term = term

    def __lt__(self, other):
        return other.key < self.key


def _term_key(order: MonomialOrder, term: _Term):
    return (-term[0], order.key(term[1]))


def _leading(vec: _Vec, order: MonomialOrder) -> Tuple[_Term, Fraction]:
    return max(vec.items(), key=lambda t: _term_key(order, t[0]))


def _axpy(target: _Vec, source: _Vec, mono: Monomial, coeff: Fraction) -> None:
    """target += coeff * x^mono * source, in place."""
    for (i, m), c in source.items():
        t = (i, mono_mul(m, mono))
        s = target.get(t, 0) + coeff * c
        if s:
            target[t] = s
        else:
            target.pop(t, None)


def _shift(source: _Vec, mono: Monomial, coeff: Fraction) -> _Vec:
    return {(i, mono_mul(m, mono)): coeff * c for (i, m), c in source.items()}


class _Element:
    __slots__ = ('vec', 'lead', 'lc', 'cof')

    def __init__(self, vec: _Vec, order: MonomialOrder, cof: Optional[_Vec]):
        self.vec = vec
        self.lead, self.lc = _leading(vec, order)
        self.cof = cof

    def make_monic(self):
        if self.lc != 1:
            inv = 1 / self.lc
            self.vec = {t: c * inv for t, c in self.vec.items()}
            if self.cof is not None:
                self.cof = {t: c * inv for t, c in self.cof.items()}
            self.lc = Fraction(1)


def _reduce(vec: _Vec, elements: Sequence[_Element], order: MonomialOrder,
            quotients: Optional[List[Dict[Monomial, Fraction]]] = None) -> _Vec:
    """Full reduction; quotients[k] accumulates the multiplier of elements[k]."""
    p = dict(vec)
    by_component: Dict[int, List[int]] = {}
    for k, e in enumerate(elements):
        by_component.setdefault(e.lead[0], []).append(k)
    heap = [_Desc(_term_key(order, t), t) for t in p]
    heapq.heapify(heap)
    remainder: _Vec = {}
    while heap:
        term = heapq.heappop(heap).term
        c = p.get(term)
        if c is None:
            continue
        comp, mono = term
        divisor = None
        for k in by_component.get(comp, ()):
            if mono_divides(elements[k].lead[1], mono):
                divisor = k
                break
        if divisor is None:
            remainder[term] = c
            del p[term]
            continue
        g = elements[divisor]
        factor = mono_div(mono, g.lead[1])
        coeff = c / g.lc
        for (i, m), gc in g.vec.items():
            t = (i, mono_mul(m, factor))
            old = p.get(t)
            s = (old or 0) - coeff * gc
            if s:
                p[t] = s
                if old is None:
                    heapq.heappush(heap, _Desc(_term_key(order, t), t))
            elif old is not None:
                del p[t]
        if quotients is not None:
            q = quotients[divisor]
            q[factor] = q.get(factor, 0) + coeff
            if not q[factor]:
                del q[factor]
    return remainder


def _combine_cofactors(base: Optional[_Vec], quotients: List[Dict[Monomial, Fraction]],
                       elements: Sequence[_Element]) -> Optional[_Vec]:
    """base - sum_k quotients[k] * elements[k].cof"""
    if base is None:
        return None
    result = dict(base)
    for q, e in zip(quotients, elements):
        for mono, coeff in q.items():
            _axpy(result, e.cof, mono, -coeff)
    return result


def _is_unit(e: _Element) -> bool:
    return not any(e.lead[1])


def _run_buchberger(inputs: Sequence[_Vec], order: MonomialOrder, track: bool,
                    ideal: bool) -> List[_Element]:
    elements: List[_Element] = []
    for i, vec in enumerate(inputs):
        if not vec:
            continue
        cof = {(i, (0,) * len(next(iter(vec))[1])): Fraction(1)} if track else None
        e = _Element(dict(vec), order, cof)
        e.make_monic()
        elements.append(e)

    if ideal:
        for e in elements:
            if _is_unit(e):
                return [e]

    pending: set = set()
    heap: List[Tuple[int, int, int]] = []

    def add_pairs(j: int):
        ej = elements[j]
        for i in range(j):
            ei = elements[i]
            if ei.lead[0] != ej.lead[0]:
                continue
            lcm = mono_lcm(ei.lead[1], ej.lead[1])
            if ideal and lcm == mono_mul(ei.lead[1], ej.lead[1]):
                continue
            pending.add((i, j))
            heapq.heappush(heap, (sum(lcm), j, i))

    for j in range(len(elements)):
        add_pairs(j)

    reductions = 0
    while heap:
        _, j, i = heapq.heappop(heap)
        if (i, j) not in pending:
            continue
        pending.discard((i, j))
        ei, ej = elements[i], elements[j]
        lcm = mono_lcm(ei.lead[1], ej.lead[1])
        if _chain_criterion(elements, pending, i, j, lcm):
            continue
        fi = mono_div(lcm, ei.lead[1])
        fj = mono_div(lcm, ej.lead[1])
        s = _shift(ei.vec, fi, 1 / ei.lc)
        _axpy(s, ej.vec, fj, -1 / ej.lc)
        s_cof = None
        if track:
            s_cof = _shift(ei.cof, fi, 1 / ei.lc)
            _axpy(s_cof, ej.cof, fj, -1 / ej.lc)
        if not s:
            continue
        quotients = [{} for _ in elements] if track else None
        r = _reduce(s, elements, order, quotients)
        reductions += 1
        if not r:
            continue
        e = _Element(r, order, _combine_cofactors(s_cof, quotients, elements) if track else None)
        e.make_monic()
        elements.append(e)
        if ideal and _is_unit(e):
            logger.debug(f"Unit ideal detected after {reductions} reductions")
            return [e]
        add_pairs(len(elements) - 1)

    logger.debug(f"Buchberger finished: {reductions} reductions, {len(elements)} elements before reduction")
    return _reduce_basis(elements, order)


def _chain_criterion(elements: Sequence[_Element], pending: set, i: int, j: int, lcm: Monomial) -> bool:
    comp = elements[i].lead[0]
    for k, ek in enumerate(elements):
        if k == i or k == j or ek.lead[0] != comp:
            continue
        if not mono_divides(ek.lead[1], lcm):
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        return True
    return False


def _reduce_basis(elements: List[_Element], order: MonomialOrder) -> List[_Element]:
    minimal: List[_Element] = []
    for idx, e in enumerate(elements):
        redundant = False
        for jdx, other in enumerate(elements):
            if jdx == idx or other.lead[0] != e.lead[0]:
                continue
            if mono_divides(other.lead[1], e.lead[1]):
                if other.lead[1] != e.lead[1] or jdx < idx:
                    redundant = True
                    break
        if not redundant:
            minimal.append(e)
    for idx in range(len(minimal)):
        e = minimal[idx]
        others = minimal[:idx] + minimal[idx + 1:]
        track = e.cof is not None
        quotients = [{} for _ in others] if track else None
        vec = _reduce(e.vec, others, order, quotients)
        cof = _combine_cofactors(e.cof, quotients, others) if track else None
        reduced = _Element(vec, order, cof)
        reduced.make_monic()
        minimal[idx] = reduced
    minimal.sort(key=lambda e: _term_key(order, e.lead))
    return minimal


# ---------------------------------------------------------------------------
# Public types
# ---------------------------------------------------------------------------

class GroebnerBasis:
    """Reduced, monic Gröbner basis of a submodule of R^rank.

    For ideals (rank 1) `generators` lists the basis polynomials. When built
    with cofactors, `cofactors[k][i]` is the coefficient of input i in basis
    element k.
    """

    def __init__(self, variables: Tuple[str, ...], rank: int, order: MonomialOrder,
                 elements: List[_Element], ninputs: int, tracked: bool):
        self.variables = variables
        self.rank = rank
        self.order = order
        self.ninputs = ninputs
        self._elements = elements
        self.vectors: Tuple[FreeModuleVector, ...] = tuple(
            _from_vec(e.vec, variables, rank) for e in elements)
        self.cofactors: Optional[Tuple[Tuple[Polynomial, ...], ...]] = None
        if tracked:
            self.cofactors = tuple(
                _from_vec(e.cof, variables, ninputs).components if ninputs else ()
                for e in elements)

    @property
    def generators(self) -> Tuple[Polynomial, ...]:
        if self.rank != 1:
            raise ValueError("generators is only defined for ideals; use vectors")
        return tuple(v.components[0] for v in self.vectors)

    def __len__(self):
        return len(self._elements)

    def is_unit(self) -> bool:
        """True iff the basis generates the whole free module."""
        units = {e.lead[0] for e in self._elements if not any(e.lead[1])}
        return len(units) == self.rank

    def leading_terms(self) -> List[Tuple[int, Monomial]]:
        return [e.lead for e in self._elements]

    def reduce(self, p: Polynomial) -> Polynomial:
        return normal_form(p, self)

    def contains(self, p: Polynomial) -> bool:
        return normal_form(p, self).is_zero()

    def reduce_vector(self, v: FreeModuleVector) -> FreeModuleVector:
        return module_normal_form(v, self)

    def divide_vector(self, v: FreeModuleVector) -> Tuple[List[Polynomial], FreeModuleVector]:
        """v = sum_k q_k * vectors[k] + remainder."""
        self._check(v.variables, v.rank)
        quotients = [{} for _ in self._elements]
        r = _reduce(_to_vec(v), self._elements, self.order, quotients)
        return ([_dict_poly(q, self.variables) for q in quotients],
                _from_vec(r, self.variables, self.rank))

    def _check(self, variables, rank):
        if variables != self.variables:
            raise ValueError(f"Ambient mismatch: {variables} vs {self.variables}")
        if rank != self.rank:
            raise RankMismatchError(self.rank, rank)

    def __repr__(self):
        body = ', '.join(str(v.components[0]) if self.rank == 1 else str(v) for v in self.vectors)
        return f"GroebnerBasis([{body}], order={self.order})"


@dataclass(frozen=True)
class SyzygyBasis:
    """Generators of the relation module of `inputs`."""
    inputs: Tuple[FreeModuleVector, ...]
    relations: Tuple[FreeModuleVector, ...]

    def __len__(self):
        return len(self.relations)


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def _common_variables(polys: Sequence[Polynomial], fallback: Optional[Sequence[str]] = None) -> Tuple[str, ...]:
    if polys:
        variables = polys[0].variables
        for p in polys:
            if p.variables != variables:
                raise ValueError(f"Ambient mismatch: {p.variables} vs {variables}")
        return variables
    if fallback is None:
        raise ValueError("Cannot infer the ambient from an empty generator list")
    return tuple(fallback)


def buchberger(gens: Sequence[Polynomial], order: MonomialOrder = GREVLEX,
               cofactors: bool = False, variables: Optional[Sequence[str]] = None) -> GroebnerBasis:
    """Reduced Gröbner basis of the ideal generated by gens."""
    gens = list(gens)
    variables = _common_variables(gens, variables)
    elements = _run_buchberger([_poly_to_vec(g) for g in gens], order, cofactors, ideal=True)
    return GroebnerBasis(variables, 1, order, elements, len(gens), cofactors)


def module_groebner(vs: Sequence[FreeModuleVector], order: MonomialOrder = GREVLEX,
                    cofactors: bool = False, variables: Optional[Sequence[str]] = None,
                    rank: Optional[int] = None) -> GroebnerBasis:
    """Reduced Gröbner basis of a submodule, position over term."""
    vs = list(vs)
    if vs:
        rank = vs[0].rank
        for v in vs:
            if v.rank != rank:
                raise RankMismatchError(rank, v.rank)
        variables = _common_variables([v.components[0] for v in vs])
    elif variables is None or rank is None:
        raise ValueError("Empty input needs explicit variables and rank")
    elements = _run_buchberger([_to_vec(v) for v in vs], order, cofactors, ideal=(rank == 1))
    return GroebnerBasis(tuple(variables), rank, order, elements, len(vs), cofactors)


def normal_form(p: Polynomial, G: GroebnerBasis) -> Polynomial:
    G._check(p.variables, 1)
    r = _reduce(_poly_to_vec(p), G._elements, G.order)
    return Polynomial(p.variables, {m: c for (_, m), c in r.items()})


def module_normal_form(v: FreeModuleVector, G: GroebnerBasis) -> FreeModuleVector:
    G._check(v.variables, v.rank)
    return _from_vec(_reduce(_to_vec(v), G._elements, G.order), G.variables, G.rank)


def _expand_certificate(coefficients: Sequence[Polynomial], gens: Sequence[Polynomial],
                        target: Polynomial) -> None:
    total = Polynomial.zero(target.variables)
    for q, g in zip(coefficients, gens):
        total = total + q * g
    if total != target:
        raise CertificateError(f"Certificate expands to {total}, expected {target}")


def ideal_membership(p: Polynomial, gens: Sequence[Polynomial], certificate: bool = False,
                     order: MonomialOrder = GREVLEX) -> Tuple[bool, Optional[List[Polynomial]]]:
    """Decide p in <gens>; with certificate=True return q with p = sum q_i gens_i."""
    gens = list(gens)
    if gens:
        _common_variables(gens + [p])
    G = buchberger(gens, order, cofactors=certificate, variables=p.variables)
    quotients = [{} for _ in G._elements]
    r = _reduce(_poly_to_vec(p), G._elements, order, quotients)
    if r:
        return False, None
    if not certificate:
        return True, None
    coefficients = [Polynomial.zero(p.variables) for _ in gens]
    for q, cof in zip(quotients, G.cofactors):
        qp = _dict_poly(q, p.variables)
        if qp.is_zero():
            continue
        for i, c in enumerate(cof):
            if not c.is_zero():
                coefficients[i] = coefficients[i] + qp * c
    _expand_certificate(coefficients, gens, p)
    return True, coefficients


def unit_certificate(gens: Sequence[Polynomial]) -> Optional[List[Polynomial]]:
    """Cofactors expressing 1 in <gens>, or None when the ideal is proper."""
    if not gens:
        return None
    one = Polynomial.constant(gens[0].variables, 1)
    member, coefficients = ideal_membership(one, gens, certificate=True)
    return coefficients if member else None


def _fresh_name(variables: Tuple[str, ...], stem: str = 'z') -> str:
    name = stem
    suffix = 0
    while name in variables:
        suffix += 1
        name = f"{stem}{suffix}"
    return name


def radical_membership(p: Polynomial, gens: Sequence[Polynomial]) -> bool:
    """p vanishes on V(gens) over the algebraic closure (Rabinowitsch)."""
    gens = list(gens)
    if gens:
        _common_variables(gens + [p])
    variables = p.variables
    extended = variables + (_fresh_name(variables),)
    z = Polynomial.variable(extended, len(variables))
    lifted = [g.extend(extended) for g in gens]
    lifted.append(1 - z * p.extend(extended))
    # membership of 1 does not depend on the term order
    return buchberger(lifted, GREVLEX).is_unit()


def module_membership(v: FreeModuleVector, vs: Sequence[FreeModuleVector],
                      order: MonomialOrder = GREVLEX) -> Tuple[bool, Optional[List[Polynomial]]]:
    """Decide v in the span of vs; when it is, return coefficients a with v = sum a_i vs_i."""
    G = module_groebner(vs, order, cofactors=True, variables=v.variables, rank=v.rank)
    quotients, remainder = G.divide_vector(v)
    if not remainder.is_zero():
        return False, None
    coefficients = [Polynomial.zero(v.variables) for _ in vs]
    for q, cof in zip(quotients, G.cofactors):
        if q.is_zero():
            continue
        for i, c in enumerate(cof):
            if not c.is_zero():
                coefficients[i] = coefficients[i] + q * c
    total = FreeModuleVector.zero(v.variables, v.rank)
    for a, w in zip(coefficients, vs):
        total = total + w.times(a)
    if total != v:
        raise CertificateError(f"Module certificate expands to {total}, expected {v}")
    return True, coefficients


def syzygies(vs: Sequence[FreeModuleVector], order: MonomialOrder = GREVLEX) -> SyzygyBasis:
    """Generators of {r : sum r_i vs_i = 0}, read off a position-over-term basis of (vs_i, e_i)."""
    vs = list(vs)
    if not vs:
        return SyzygyBasis((), ())
    rank = vs[0].rank
    for v in vs:
        if v.rank != rank:
            raise RankMismatchError(rank, v.rank)
    variables = vs[0].variables
    k = len(vs)
    one = Polynomial.constant(variables, 1)
    zero = Polynomial.zero(variables)
    augmented = [
        FreeModuleVector(v.components + tuple(one if j == i else zero for j in range(k)))
        for i, v in enumerate(vs)
    ]
    G = module_groebner(augmented, order)
    relations = []
    for w in G.vectors:
        if all(c.is_zero() for c in w.components[:rank]):
            relations.append(FreeModuleVector(w.components[rank:]))
    for r in relations:
        total = FreeModuleVector.zero(variables, rank)
        for a, v in zip(r.components, vs):
            total = total + v.times(a)
        if not total.is_zero():
            raise CertificateError(f"Relation {r} does not annihilate the inputs")
    logger.debug(f"Syzygies of {k} vectors in rank {rank}: {len(relations)} relations")
    return SyzygyBasis(tuple(vs), tuple(relations))


def s_vector_remainders(G: GroebnerBasis) -> List[FreeModuleVector]:
    """Remainders of every S-vector of G, without any pair criteria."""
    elements = G._elements
    remainders = []
    for j in range(len(elements)):
        for i in range(j):
            ei, ej = elements[i], elements[j]
            if ei.lead[0] != ej.lead[0]:
                continue
            lcm = mono_lcm(ei.lead[1], ej.lead[1])
            s = _shift(ei.vec, mono_div(lcm, ei.lead[1]), 1 / ei.lc)
            _axpy(s, ej.vec, mono_div(lcm, ej.lead[1]), -1 / ej.lc)
            r = _reduce(s, elements, G.order)
            remainders.append(_from_vec(r, G.variables, G.rank))
    return remainders


def verify_groebner(G: GroebnerBasis) -> bool:
    """All S-polynomials (S-vectors) reduce to zero."""
    return all(r.is_zero() for r in s_vector_remainders(G))


def is_reduced(G: GroebnerBasis) -> bool:
    """Monic, and no term of any element is divisible by another element's leading term."""
    for idx, e in enumerate(G._elements):
        if e.lc != 1:
            return False
        for jdx, other in enumerate(G._elements):
            if jdx == idx:
                continue
            for comp, mono in e.vec:
                if comp == other.lead[0] and mono_divides(other.lead[1], mono):
                    return False
    return True
