"""
Text grammar for polynomials and vector fields.

Grammar (whitespace-insensitive, explicit '*' required):

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' INT)*          right-associative, 0 <= INT, result <= MAX_EXPONENT
    atom   := INT | NAME | '(' expr ')'

'/' only divides by nonzero constants, which is how rational literals
such as 1/3 are written. format_polynomial emits the canonical text that
parse_polynomial reads back to the same Polynomial.
"""

import re
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from poly import GREVLEX, Monomial, MonomialOrder, Polynomial

logger = logging.getLogger(__name__)

NAME_RE = re.compile(r'[a-zA-Z][a-zA-Z0-9_]*')
_TOKEN_RE = re.compile(r'\s*(?:(?P<int>[0-9]+)|(?P<name>[a-zA-Z][a-zA-Z0-9_]*)|(?P<op>[-+*/^(),]))')

MAX_EXPONENT = 1000

ERROR_KINDS = ('unexpected-token', 'unknown-variable', 'bad-exponent', 'empty-input')


@dataclass(frozen=True)
class SourceSpan:
    """Byte offsets [start, end) into the UTF-8 encoded input."""
    start: int
    end: int

    def shifted(self, offset: int) -> 'SourceSpan':
        return SourceSpan(self.start + offset, self.end + offset)


class ParseError(ValueError):
    """Grammar violation with the span of the offending input."""

    def __init__(self, kind: str, span: SourceSpan, message: str):
        if kind not in ERROR_KINDS:
            raise ValueError(f"Unknown parse error kind: {kind}")
        self.kind = kind
        self.span = span
        self.message = message
        super().__init__(f"{kind} at bytes {span.start}-{span.end}: {message}")


@dataclass(frozen=True)
class _Token:
    kind: str       # 'int', 'name', 'op', 'end'
    text: str
    start: int      # character offsets
    end: int


def _byte_offset(text: str, index: int) -> int:
    return len(text[:index].encode('utf-8'))


def validate_variables(variables: Sequence[str]) -> Tuple[str, ...]:
    variables = tuple(variables)
    if not variables:
        raise ValueError("At least one variable must be declared")
    for name in variables:
        if not NAME_RE.fullmatch(name):
            raise ValueError(f"Invalid variable name: {name!r}")
    if len(set(variables)) != len(variables):
        raise ValueError(f"Duplicate variable names in {variables}")
    return variables


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------

class _Parser:
    def __init__(self, text: str, variables: Tuple[str, ...]):
        self.text = text
        self.variables = variables
        self.tokens = self._tokenize()
        self.pos = 0

    def _error(self, kind: str, start: int, end: int, message: str) -> ParseError:
        return ParseError(kind, SourceSpan(_byte_offset(self.text, start), _byte_offset(self.text, end)), message)

    def _tokenize(self) -> List[_Token]:
        tokens = []
        i = 0
        while i < len(self.text):
            if self.text[i].isspace():
                i += 1
                continue
            match = _TOKEN_RE.match(self.text, i)
            if not match:
                raise self._error('unexpected-token', i, i + 1, f"unexpected character {self.text[i]!r}")
            kind = match.lastgroup
            tokens.append(_Token(kind, match.group(kind), match.start(kind), match.end(kind)))
            i = match.end()
        tokens.append(_Token('end', '', len(self.text), len(self.text)))
        return tokens

    @property
    def current(self) -> _Token:
        return self.tokens[self.pos]

    def _advance(self) -> _Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _at(self, op: str) -> bool:
        return self.current.kind == 'op' and self.current.text == op

    def parse(self) -> Polynomial:
        if self.current.kind == 'end':
            raise self._error('empty-input', 0, len(self.text), "no expression")
        result = self._expr()
        if self.current.kind != 'end':
            token = self.current
            raise self._error('unexpected-token', token.start, token.end,
                              f"unexpected {token.text!r} (multiplication must be explicit)")
        return result

    def _expr(self) -> Polynomial:
        result = self._term()
        while self._at('+') or self._at('-'):
            op = self._advance().text
            rhs = self._term()
            result = result + rhs if op == '+' else result - rhs
        return result

    def _term(self) -> Polynomial:
        result = self._unary()
        while self._at('*') or self._at('/'):
            op_token = self._advance()
            start = self.current.start
            rhs = self._unary()
            if op_token.text == '*':
                result = result * rhs
                continue
            end = self.tokens[self.pos - 1].end
            if not rhs.is_constant():
                raise self._error('unexpected-token', start, end, "division by a non-constant expression")
            divisor = rhs.constant_term()
            if not divisor:
                raise self._error('unexpected-token', start, end, "division by zero")
            result = result.scale(1 / divisor)
        return result

    def _unary(self) -> Polynomial:
        if self._at('-'):
            self._advance()
            return -self._unary()
        return self._power()

    def _power(self) -> Polynomial:
        base = self._atom()
        if not self._at('^'):
            return base
        return base ** self._exponent()

    def _exponent(self) -> int:
        """Consume '^' INT ('^' INT)* and fold right-associatively, capped at MAX_EXPONENT."""
        start = self.current.start
        exponents = []
        while self._at('^'):
            self._advance()
            token = self.current
            if token.kind != 'int':
                raise self._error('bad-exponent', token.start, max(token.end, token.start + 1),
                                  "exponent must be a non-negative integer literal")
            self._advance()
            exponents.append(int(token.text))
            end = token.end
        value = exponents[-1]
        for e in reversed(exponents[:-1]):
            if value > MAX_EXPONENT or (e > 1 and value >= MAX_EXPONENT.bit_length()):
                value = MAX_EXPONENT + 1
                break
            value = e ** value
        if value > MAX_EXPONENT:
            raise self._error('bad-exponent', start, end, f"exponent exceeds {MAX_EXPONENT}")
        return value

    def _atom(self) -> Polynomial:
        token = self.current
        if token.kind == 'int':
            self._advance()
            return Polynomial.constant(self.variables, int(token.text))
        if token.kind == 'name':
            if token.text not in self.variables:
                raise self._error('unknown-variable', token.start, token.end,
                                  f"unknown variable {token.text!r}; declared: {' '.join(self.variables)}")
            self._advance()
            return Polynomial.variable(self.variables, token.text)
        if self._at('('):
            self._advance()
            inner = self._expr()
            if not self._at(')'):
                closing = self.current
                raise self._error('unexpected-token', closing.start, max(closing.end, closing.start),
                                  "expected ')'")
            self._advance()
            return inner
        if token.kind == 'end':
            raise self._error('unexpected-token', token.start, token.end, "unexpected end of input")
        raise self._error('unexpected-token', token.start, token.end, f"unexpected {token.text!r}")


def parse_polynomial(text: str, variables: Sequence[str]) -> Polynomial:
    """Parse text into a Polynomial over the declared variables."""
    variables = validate_variables(variables)
    return _Parser(text, variables).parse()


def _split_top_level(text: str) -> List[Tuple[int, str]]:
    """Split at commas outside parentheses; returns (char offset, piece)."""
    pieces = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == '(':
            depth += 1
        elif ch == ')':
            depth -= 1
        elif ch == ',' and depth == 0:
            pieces.append((start, text[start:i]))
            start = i + 1
    pieces.append((start, text[start:]))
    return pieces


def parse_vector_field(text: str, variables: Sequence[str]) -> List[Polynomial]:
    """Parse 'g1, g2, ..., gn' into one polynomial per variable."""
    variables = validate_variables(variables)
    pieces = _split_top_level(text)
    if len(pieces) != len(variables):
        raise ParseError('unexpected-token', SourceSpan(0, _byte_offset(text, len(text))),
                         f"expected {len(variables)} components, got {len(pieces)}")
    components = []
    for offset, piece in pieces:
        try:
            components.append(_Parser(piece, variables).parse())
        except ParseError as e:
            raise ParseError(e.kind, e.span.shifted(_byte_offset(text, offset)), e.message) from None
    return components


def parse_polynomial_lines(text: str, variables: Sequence[str]) -> List[Polynomial]:
    """One polynomial per line; blank lines and '#' comment lines are skipped."""
    result = []
    offset = 0
    for line in text.splitlines(keepends=True):
        stripped = line.strip()
        if stripped and not stripped.startswith('#'):
            try:
                result.append(parse_polynomial(line.rstrip('\r\n'), variables))
            except ParseError as e:
                raise ParseError(e.kind, e.span.shifted(offset), e.message) from None
        offset += len(line.encode('utf-8'))
    return result


# ---------------------------------------------------------------------------
# Formatter
# ---------------------------------------------------------------------------

def _format_monomial(variables: Tuple[str, ...], mono: Monomial) -> str:
    factors = []
    for name, e in zip(variables, mono):
        if e == 1:
            factors.append(name)
        elif e > 1:
            factors.append(f"{name}^{e}")
    return '*'.join(factors)


def format_polynomial(p: Polynomial, order: MonomialOrder = GREVLEX) -> str:
    """Canonical text: terms in descending order, explicit '*' and '^'."""
    if p.is_zero():
        return '0'
    parts = []
    for index, (mono, coeff) in enumerate(p.sorted_terms(order)):
        negative = coeff < 0
        magnitude = -coeff if negative else coeff
        mono_text = _format_monomial(p.variables, mono)
        if not mono_text:
            body = str(magnitude)
        elif magnitude == 1:
            body = mono_text
        else:
            body = f"{magnitude}*{mono_text}"
        if index == 0:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return ''.join(parts)


def format_vector_field(components: Sequence[Polynomial]) -> str:
    return ', '.join(format_polynomial(c) for c in components)


def parse_rational(text: str) -> Fraction:
    """A point coordinate: integer or a/b, optionally signed."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise ValueError(f"Invalid rational coordinate: {text!r}")


def parse_point(text: str, dimension: Optional[int] = None) -> Tuple[Fraction, ...]:
    """'0,1' or '(3/5, 4/5)' into a tuple of Fractions."""
    body = text.strip().strip('()')
    point = tuple(parse_rational(part) for part in body.split(','))
    if dimension is not None and len(point) != dimension:
        raise ValueError(f"Point {text!r} has {len(point)} coordinates, expected {dimension}")
    return point
