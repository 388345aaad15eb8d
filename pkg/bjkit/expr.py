"""Holomorphic expression trees: parsing, evaluation and symbolic differentiation.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := '-' unary | factor
    factor := base ('^' uint)?
    base   := 'z' | complex-literal | '(' expr ')' | 'blaschke' '(' complex ',' real ')'

Complex literals: ``1.5``, ``2i``, ``i``, and inside ``blaschke(...)`` also
``1+2i`` / ``0-0.3i``.  Expressions evaluate on Python complex scalars as well as
numpy arrays of sample points.
"""

import math
import re
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import polynomial as npoly

from .errors import ExponentError, ExprSyntaxError, PoleProximityError, PreconditionError

Value = Union[complex, np.ndarray]

# |den| < POLE_THRESHOLD * (1 + |num|) is treated as a pole
POLE_THRESHOLD = 1e-12


def _const_like(c: complex, z: Value) -> Value:
    if isinstance(z, np.ndarray):
        return np.full(z.shape, c, dtype=complex)
    return complex(c)


def _ipow(x: Value, k: int) -> Value:
    """Integer power by repeated squaring."""
    result = _const_like(1.0, x)
    base = x
    while k:
        if k & 1:
            result = result * base
        k >>= 1
        if k:
            base = base * base
    return result


def _checked_quotient(num: Value, den: Value, z: Value, what: str) -> Value:
    bad = np.abs(den) < POLE_THRESHOLD * (1.0 + np.abs(num))
    if np.any(bad):
        point = complex(np.asarray(z)[bad][0]) if isinstance(z, np.ndarray) else complex(z)
        raise PoleProximityError(f"{what} denominator vanishes near z = {point:.6g}", point=point)
    return num / den


class HoloExpr:
    """A holomorphic function as an immutable expression tree."""

    def evaluate(self, z: Value) -> Value:
        raise NotImplementedError

    def derivative(self) -> "HoloExpr":
        raise NotImplementedError

    def __call__(self, z: Value) -> Value:
        return self.evaluate(z)

    # arithmetic builds simplified trees
    def __add__(self, other: "HoloExpr") -> "HoloExpr":
        return add(self, _lift(other))

    def __radd__(self, other) -> "HoloExpr":
        return add(_lift(other), self)

    def __sub__(self, other: "HoloExpr") -> "HoloExpr":
        return add(self, neg(_lift(other)))

    def __rsub__(self, other) -> "HoloExpr":
        return add(_lift(other), neg(self))

    def __mul__(self, other: "HoloExpr") -> "HoloExpr":
        return mul(self, _lift(other))

    def __rmul__(self, other) -> "HoloExpr":
        return mul(_lift(other), self)

    def __truediv__(self, other: "HoloExpr") -> "HoloExpr":
        return div(self, _lift(other))

    def __neg__(self) -> "HoloExpr":
        return neg(self)

    def __pow__(self, k: int) -> "HoloExpr":
        return power(self, k)

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Const(HoloExpr):
    c: complex

    def evaluate(self, z: Value) -> Value:
        return _const_like(self.c, z)

    def derivative(self) -> HoloExpr:
        return Const(0j)


@dataclass(frozen=True)
class Z(HoloExpr):

    def evaluate(self, z: Value) -> Value:
        return np.asarray(z, dtype=complex) if isinstance(z, np.ndarray) else complex(z)

    def derivative(self) -> HoloExpr:
        return Const(1 + 0j)


@dataclass(frozen=True)
class Add(HoloExpr):
    l: HoloExpr
    r: HoloExpr

    def evaluate(self, z: Value) -> Value:
        return self.l.evaluate(z) + self.r.evaluate(z)

    def derivative(self) -> HoloExpr:
        return add(self.l.derivative(), self.r.derivative())


@dataclass(frozen=True)
class Mul(HoloExpr):
    l: HoloExpr
    r: HoloExpr

    def evaluate(self, z: Value) -> Value:
        return self.l.evaluate(z) * self.r.evaluate(z)

    def derivative(self) -> HoloExpr:
        return add(mul(self.l.derivative(), self.r), mul(self.l, self.r.derivative()))


@dataclass(frozen=True)
class Neg(HoloExpr):
    e: HoloExpr

    def evaluate(self, z: Value) -> Value:
        return -self.e.evaluate(z)

    def derivative(self) -> HoloExpr:
        return neg(self.e.derivative())


@dataclass(frozen=True)
class Div(HoloExpr):
    num: HoloExpr
    den: HoloExpr

    def evaluate(self, z: Value) -> Value:
        return _checked_quotient(self.num.evaluate(z), self.den.evaluate(z), z, "quotient")

    def derivative(self) -> HoloExpr:
        top = add(mul(self.num.derivative(), self.den), neg(mul(self.num, self.den.derivative())))
        return div(top, power(self.den, 2))


@dataclass(frozen=True)
class IntPow(HoloExpr):
    e: HoloExpr
    k: int

    def __post_init__(self):
        if not isinstance(self.k, (int, np.integer)) or isinstance(self.k, bool) or self.k < 0:
            raise ExponentError(f"exponent must be a nonnegative integer, got {self.k!r}")

    def evaluate(self, z: Value) -> Value:
        return _ipow(self.e.evaluate(z), int(self.k))

    def derivative(self) -> HoloExpr:
        if self.k == 0:
            return Const(0j)
        return mul(Const(complex(self.k)), mul(power(self.e, self.k - 1), self.e.derivative()))


@dataclass(frozen=True)
class BlaschkeFactor(HoloExpr):
    """(z - r a) / (r - conj(a) z): unimodular on |z| = r, zero at r a."""
    a: complex
    r: float

    def __post_init__(self):
        if not self.r > 0:
            raise PreconditionError(f"Blaschke radius must be positive, got {self.r}")
        if not abs(self.a) < 1:
            raise PreconditionError(f"Blaschke parameter must satisfy |a| < 1, got {self.a}")

    def evaluate(self, z: Value) -> Value:
        num = z - self.r * self.a
        den = self.r - np.conj(self.a) * z
        return _checked_quotient(num, den, z, "Blaschke factor")

    def derivative(self) -> HoloExpr:
        # quotient rule collapses to r(1 - |a|^2) / (r - conj(a) z)^2
        top = Const(complex(self.r * (1.0 - abs(self.a) ** 2)))
        den = add(Const(complex(self.r)), mul(Const(-np.conj(complex(self.a))), Z()))
        return div(top, power(den, 2))


# ---------------------------------------------------------------------------
# simplifying constructors

def _lift(value) -> HoloExpr:
    if isinstance(value, HoloExpr):
        return value
    if isinstance(value, (int, float, complex, np.number)):
        return Const(complex(value))
    raise TypeError(f"cannot use {value!r} in an expression")


def _is_const(e: HoloExpr, value: Optional[complex] = None) -> bool:
    return isinstance(e, Const) and (value is None or e.c == value)


def add(l: HoloExpr, r: HoloExpr) -> HoloExpr:
    if _is_const(l) and _is_const(r):
        return Const(l.c + r.c)
    if _is_const(l, 0):
        return r
    if _is_const(r, 0):
        return l
    return Add(l, r)


def neg(e: HoloExpr) -> HoloExpr:
    if isinstance(e, Const):
        return Const(-e.c)
    if isinstance(e, Neg):
        return e.e
    return Neg(e)


def mul(l: HoloExpr, r: HoloExpr) -> HoloExpr:
    if _is_const(l) and _is_const(r):
        return Const(l.c * r.c)
    if _is_const(l, 0) or _is_const(r, 0):
        return Const(0j)
    if _is_const(l, 1):
        return r
    if _is_const(r, 1):
        return l
    if _is_const(r):
        return Mul(r, l)
    return Mul(l, r)


def div(num: HoloExpr, den: HoloExpr) -> HoloExpr:
    if _is_const(den, 1):
        return num
    if _is_const(num, 0):
        return Const(0j)
    if _is_const(num) and _is_const(den):
        if den.c == 0:
            raise PoleProximityError("division by the constant zero")
        return Const(num.c / den.c)
    return Div(num, den)


def power(e: HoloExpr, k: int) -> HoloExpr:
    if k == 0:
        return Const(1 + 0j)
    if k == 1:
        return e
    if isinstance(e, Const):
        return Const(e.c ** k)
    return IntPow(e, k)


# ---------------------------------------------------------------------------
# operations

def evaluate(f: HoloExpr, z: Value) -> Value:
    """Value of f at z (scalar or array)."""
    return f.evaluate(z)


def differentiate(f: HoloExpr) -> HoloExpr:
    """Symbolic derivative of f."""
    return f.derivative()


def nth_derivative(f: HoloExpr, n: int) -> HoloExpr:
    """n-fold derivative; n = 0 is the identity."""
    if n < 0:
        raise PreconditionError(f"derivative order must be nonnegative, got {n}")
    for _ in range(n):
        f = f.derivative()
    return f


def is_constant(f: HoloExpr) -> bool:
    """True when the tree contains no z (so f is constant)."""
    if isinstance(f, Const):
        return True
    if isinstance(f, (Z, BlaschkeFactor)):
        return False
    if isinstance(f, (Add, Mul)):
        return is_constant(f.l) and is_constant(f.r)
    if isinstance(f, Div):
        return is_constant(f.num) and is_constant(f.den)
    if isinstance(f, (Neg, IntPow)):
        return is_constant(f.e)
    return False


# ---------------------------------------------------------------------------
# pretty printing

def _fmt_real(x: float) -> str:
    return repr(float(x))


def format_complex(c: complex, bare: bool = False) -> str:
    """Complex literal in grammar syntax; parenthesized unless ``bare``."""
    c = complex(c)
    if c.imag == 0:
        text = _fmt_real(c.real)
        simple = c.real >= 0 and not math.copysign(1.0, c.real) < 0
    elif c.real == 0:
        text = _fmt_real(c.imag) + "i"
        simple = c.imag > 0
    else:
        sign = "+" if c.imag >= 0 else "-"
        text = f"{_fmt_real(c.real)}{sign}{_fmt_real(abs(c.imag))}i"
        simple = False
    return text if (simple or bare) else f"({text})"


_PREC = {Add: 1, Neg: 2, Mul: 3, Div: 3, IntPow: 4}


def _prec(e: HoloExpr) -> int:
    return _PREC.get(type(e), 5)


def _wrap(e: HoloExpr, min_prec: int) -> str:
    text = pretty(e)
    return f"({text})" if _prec(e) < min_prec else text


def pretty(f: HoloExpr) -> str:
    """Render f in the expression grammar."""
    if isinstance(f, Const):
        return format_complex(f.c)
    if isinstance(f, Z):
        return "z"
    if isinstance(f, BlaschkeFactor):
        return f"blaschke({format_complex(f.a, bare=True)}, {_fmt_real(f.r)})"
    if isinstance(f, Add):
        if isinstance(f.r, Neg):
            return f"{pretty(f.l)} - {_wrap(f.r.e, 2)}"
        return f"{pretty(f.l)} + {_wrap(f.r, 2)}"
    if isinstance(f, Neg):
        return f"-{_wrap(f.e, 3)}"
    if isinstance(f, Mul):
        return f"{_wrap(f.l, 3)}*{_wrap(f.r, 4)}"
    if isinstance(f, Div):
        return f"{_wrap(f.num, 3)}/{_wrap(f.den, 4)}"
    if isinstance(f, IntPow):
        return f"{_wrap(f.e, 5)}^{f.k}"
    raise TypeError(f"unknown expression node {f!r}")


# ---------------------------------------------------------------------------
# parsing

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)(?P<imag>i)?"
    r"|(?P<ident>[A-Za-z_]+)|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # num, imag, ident, op, end
    text: str
    pos: int


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            offset = len(text[pos:]) - len(text[pos:].lstrip())
            raise ExprSyntaxError(f"unexpected character {text[pos + offset]!r}", position=pos + offset)
        if m.group("num") is not None:
            kind = "imag" if m.group("imag") else "num"
            tokens.append(_Token(kind, m.group("num"), m.start("num")))
        elif m.group("ident") is not None:
            tokens.append(_Token("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(_Token("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser over the token list."""

    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def _advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def _accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == op:
            self.i += 1
            return True
        return False

    def _expect(self, op: str) -> None:
        if not self._accept(op):
            raise ExprSyntaxError(f"expected {op!r}, found {self.tok.text or 'end of input'!r}", position=self.tok.pos)

    def parse(self) -> HoloExpr:
        node = self.expr()
        if self.tok.kind != "end":
            raise ExprSyntaxError(f"unexpected {self.tok.text!r}", position=self.tok.pos)
        return node

    def expr(self) -> HoloExpr:
        node = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self._advance().text
            rhs = self.term()
            node = Add(node, rhs if op == "+" else Neg(rhs))
        return node

    def term(self) -> HoloExpr:
        node = self.unary()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self._advance().text
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self) -> HoloExpr:
        if self._accept("-"):
            return Neg(self.unary())
        return self.factor()

    def factor(self) -> HoloExpr:
        node = self.base()
        if self._accept("^"):
            tok = self.tok
            if tok.kind != "num" or not tok.text.isdigit():
                raise ExponentError("exponent must be a nonnegative integer", position=tok.pos)
            self._advance()
            node = IntPow(node, int(tok.text))
        return node

    def base(self) -> HoloExpr:
        tok = self.tok
        if tok.kind == "num":
            self._advance()
            return Const(complex(float(tok.text)))
        if tok.kind == "imag":
            self._advance()
            return Const(complex(0.0, float(tok.text)))
        if tok.kind == "ident":
            self._advance()
            if tok.text == "z":
                return Z()
            if tok.text == "i":
                return Const(1j)
            if tok.text == "blaschke":
                return self.blaschke(tok)
            raise ExprSyntaxError(f"unknown identifier {tok.text!r}", position=tok.pos)
        if self._accept("("):
            node = self.expr()
            self._expect(")")
            return node
        raise ExprSyntaxError(f"unexpected {tok.text or 'end of input'!r}", position=tok.pos)

    def blaschke(self, tok: _Token) -> HoloExpr:
        self._expect("(")
        a = self.complex_literal()
        self._expect(",")
        r = self.complex_literal()
        self._expect(")")
        if r.imag != 0:
            raise ExprSyntaxError("Blaschke radius must be real", position=tok.pos)
        try:
            return BlaschkeFactor(a, r.real)
        except PreconditionError as e:
            raise ExprSyntaxError(str(e), position=tok.pos) from e

    def _signed_number(self) -> Tuple[complex, bool]:
        sign = -1.0 if self._accept("-") else 1.0
        if sign > 0:
            self._accept("+")
        tok = self.tok
        if tok.kind == "num":
            self._advance()
            return complex(sign * float(tok.text)), False
        if tok.kind == "imag":
            self._advance()
            return complex(0.0, sign * float(tok.text)), True
        if tok.kind == "ident" and tok.text == "i":
            self._advance()
            return complex(0.0, sign), True
        raise ExprSyntaxError("expected a number", position=tok.pos)

    def complex_literal(self) -> complex:
        value, imaginary = self._signed_number()
        if not imaginary and self.tok.kind == "op" and self.tok.text in "+-":
            part, imaginary = self._signed_number()
            if not imaginary:
                raise ExprSyntaxError("expected an imaginary part", position=self.tok.pos)
            value += part
        return value


def parse(text: str) -> HoloExpr:
    """Parse expression text into a HoloExpr."""
    return _Parser(text).parse()


def parse_complex(text: str) -> complex:
    """Parse a standalone complex literal such as ``1+2i`` or ``0-0.3i``."""
    parser = _Parser(text)
    value = parser.complex_literal()
    if parser.tok.kind != "end":
        raise ExprSyntaxError(f"unexpected {parser.tok.text!r} in complex literal", position=parser.tok.pos)
    return value


# ---------------------------------------------------------------------------
# polynomials

@dataclass(frozen=True)
class Polynomial:
    """a_0 + a_1 z + ... + a_n z^n with a_n != 0 (or the zero polynomial)."""
    coeffs: Tuple[complex, ...]

    def __post_init__(self):
        trimmed = [complex(c) for c in self.coeffs]
        while len(trimmed) > 1 and trimmed[-1] == 0:
            trimmed.pop()
        object.__setattr__(self, "coeffs", tuple(trimmed) if trimmed else (0j,))

    @classmethod
    def from_coeffs(cls, coeffs: Sequence[complex]) -> "Polynomial":
        return cls(tuple(coeffs))

    @classmethod
    def from_expr(cls, f: HoloExpr) -> "Polynomial":
        """Expand a polynomial expression tree into coefficients."""
        return cls(tuple(_poly_coeffs(f)))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0j,)

    @property
    def leading(self) -> complex:
        return self.coeffs[-1]

    def evaluate(self, z: Value) -> Value:
        return npoly.polyval(z, np.array(self.coeffs))

    def to_expr(self) -> HoloExpr:
        """Lossless conversion to a HoloExpr (left-fold sum of monomials)."""
        node: Optional[HoloExpr] = None
        for k, c in enumerate(self.coeffs):
            if c == 0:
                continue
            if k == 0:
                term: HoloExpr = Const(c)
            elif k == 1:
                term = Mul(Const(c), Z())
            else:
                term = Mul(Const(c), IntPow(Z(), k))
            node = term if node is None else Add(node, term)
        return node if node is not None else Const(0j)


def _poly_coeffs(f: HoloExpr) -> np.ndarray:
    if isinstance(f, Const):
        return np.array([f.c], dtype=complex)
    if isinstance(f, Z):
        return np.array([0, 1], dtype=complex)
    if isinstance(f, Add):
        return npoly.polyadd(_poly_coeffs(f.l), _poly_coeffs(f.r))
    if isinstance(f, Neg):
        return -_poly_coeffs(f.e)
    if isinstance(f, Mul):
        return npoly.polymul(_poly_coeffs(f.l), _poly_coeffs(f.r))
    if isinstance(f, IntPow):
        return npoly.polypow(_poly_coeffs(f.e), f.k)
    if isinstance(f, Div) and is_constant(f.den):
        den = complex(f.den.evaluate(0j))
        if den == 0:
            raise PoleProximityError("division by the constant zero")
        return _poly_coeffs(f.num) / den
    raise PreconditionError(f"not a polynomial expression: {pretty(f)}")
