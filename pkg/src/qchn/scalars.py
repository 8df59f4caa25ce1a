"""Exact arithmetic in the field Q(q) of rational functions of one parameter.

A :class:`ScalarQ` is stored as ``q**shift * num(q) / den(q)`` where ``num``
and ``den`` are integer coefficient tuples (lowest degree first) and

* ``num[0] != 0`` (all powers of q live in ``shift``), or ``num == ()`` for zero;
* ``den[0] != 0`` and the leading coefficient of ``den`` is positive;
* ``num`` and ``den`` are coprime as polynomials over Q;
* the integer coefficients of ``num`` and ``den`` have no common factor.

Those rules make the representation unique, so equality is a tuple compare
and "the residual is zero" is a structural test.

The module also provides the q-integers, specialization at a rational point,
a small expression parser and the pool of admissible sample points.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from typing import Iterable, Union

Rational = Fraction
Number = Union[int, Fraction]

__all__ = [
    "Rational",
    "ScalarQ",
    "LaurentPoly",
    "Q",
    "PoleError",
    "ScalarSyntaxError",
    "qnum",
    "scalar_arith",
    "eval_at",
    "parse_scalar",
    "format_scalar",
    "specialize",
    "sample_points",
    "is_admissible",
]


class PoleError(ZeroDivisionError):
    """A denominator vanishes at the requested specialization point."""


class ScalarSyntaxError(ValueError):
    def __init__(self, message: str, pos: int):
        super().__init__(f"{message} at position {pos}")
        self.pos = pos


# --------------------------------------------------------------------------
# dense integer polynomials, tuples lowest degree first, no trailing zeros


def _trim(a: list) -> tuple:
    while a and a[-1] == 0:
        a.pop()
    return tuple(a)


def _padd(a: tuple, b: tuple) -> tuple:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] += c
    return _trim(out)


def _psub(a: tuple, b: tuple) -> tuple:
    out = list(a) + [0] * (len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return _trim(out)


def _pmul(a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ()
    if len(a) == 1:
        c = a[0]
        return tuple(c * x for x in b)
    if len(b) == 1:
        c = b[0]
        return tuple(c * x for x in a)
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return tuple(out)


def _shift_up(a: tuple, s: int) -> tuple:
    return (0,) * s + a if s and a else a


def _content(a: tuple) -> int:
    g = 0
    for c in a:
        g = math.gcd(g, c)
        if g == 1:
            break
    return g


def _primitive(a: tuple) -> tuple:
    g = _content(a)
    if g > 1:
        a = tuple(c // g for c in a)
    if a and a[-1] < 0:
        a = tuple(-c for c in a)
    return a


def _prem(a: tuple, b: tuple) -> tuple:
    """Pseudo-remainder of a by b (b nonzero)."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(r) - 1 >= db and r:
        lr = r[-1]
        shift = len(r) - 1 - db
        r = [c * lb for c in r]
        for i, c in enumerate(b):
            r[shift + i] -= lr * c
        r = list(_trim(r))
    return tuple(r)


def _pgcd(a: tuple, b: tuple) -> tuple:
    """Primitive gcd over Z[q] with positive leading coefficient."""
    if not a:
        return _primitive(b)
    if not b:
        return _primitive(a)
    if len(a) == 1 or len(b) == 1:
        return (1,)
    a = _primitive(a)
    b = _primitive(b)
    if len(a) < len(b):
        a, b = b, a
    while b:
        r = _prem(a, b)
        a, b = b, (_primitive(r) if r else ())
        if len(a) == 1:
            return (1,)
    return _primitive(a)


def _pdiv_exact(a: tuple, b: tuple) -> tuple:
    """Quotient a / b over Z[q], assuming b is primitive and divides a over Q."""
    if len(b) == 1:
        c = b[0]
        return tuple(x // c for x in a)
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    quo = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = r[k + db]
        if c:
            qk, rem = divmod(c, lb)
            if rem:
                raise ArithmeticError("inexact polynomial division")
            quo[k] = qk
            for i, bc in enumerate(b):
                r[k + i] -= qk * bc
    if any(r[:db]):
        raise ArithmeticError("inexact polynomial division")
    return tuple(quo)


def _horner(a: tuple, x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(a):
        acc = acc * x + c
    return acc


# --------------------------------------------------------------------------


def _canonical(shift: int, num: tuple, den: tuple, reduce: bool = True) -> "ScalarQ":
    if not num:
        return ScalarQ._zero
    k = 0
    while num[k] == 0:
        k += 1
    if k:
        num = num[k:]
        shift += k
    if reduce and len(den) > 1 and len(num) > 1:
        g = _pgcd(num, den)
        if len(g) > 1:
            num = _pdiv_exact(num, g)
            den = _pdiv_exact(den, g)
    g = math.gcd(_content(num), _content(den))
    if den[-1] < 0:
        g = -g
    if g != 1:
        num = tuple(c // g for c in num)
        den = tuple(c // g for c in den)
    return ScalarQ._make(shift, num, den)


class ScalarQ:
    """An element of Q(q) in unique canonical form.  Instances are immutable."""

    __slots__ = ("shift", "num", "den", "_hash")

    _zero: "ScalarQ"

    def __init__(self, value: Union[Number, "ScalarQ", str] = 0):
        if isinstance(value, str):
            value = parse_scalar(value)
        if isinstance(value, ScalarQ):
            self.shift, self.num, self.den = value.shift, value.num, value.den
        else:
            value = Fraction(value)
            c = _canonical(0, (value.numerator,) if value else (), (value.denominator,), reduce=False)
            self.shift, self.num, self.den = c.shift, c.num, c.den
        self._hash = None

    @classmethod
    def _make(cls, shift: int, num: tuple, den: tuple) -> "ScalarQ":
        obj = object.__new__(cls)
        obj.shift = shift
        obj.num = num
        obj.den = den
        obj._hash = None
        return obj

    @classmethod
    def q(cls, power: int = 1) -> "ScalarQ":
        return cls._make(power, (1,), (1,))

    @classmethod
    def from_laurent(cls, terms: dict) -> "ScalarQ":
        """Build from ``{exponent: rational coefficient}``."""
        terms = {e: Fraction(c) for e, c in terms.items() if c}
        if not terms:
            return cls._zero
        lo = min(terms)
        hi = max(terms)
        d = 1
        for c in terms.values():
            d = d * c.denominator // math.gcd(d, c.denominator)
        num = tuple(int(terms.get(e, 0) * d) for e in range(lo, hi + 1))
        return _canonical(lo, num, (d,), reduce=False)

    # -- inspection ------------------------------------------------------

    def is_laurent(self) -> bool:
        return len(self.den) == 1

    @property
    def numerator(self) -> "LaurentPoly":
        return LaurentPoly({self.shift + i: Fraction(c) for i, c in enumerate(self.num) if c})

    @property
    def denominator(self) -> "LaurentPoly":
        return LaurentPoly({i: Fraction(c) for i, c in enumerate(self.den) if c})

    def laurent_terms(self) -> dict:
        """``{exponent: coefficient}`` for a Laurent polynomial; raises otherwise."""
        if len(self.den) != 1:
            raise ValueError(f"{self} is not a Laurent polynomial")
        d = self.den[0]
        return {self.shift + i: Fraction(c, d) for i, c in enumerate(self.num) if c}

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other) -> bool:
        if isinstance(other, ScalarQ):
            return self.shift == other.shift and self.num == other.num and self.den == other.den
        if isinstance(other, (int, Fraction)):
            return self == ScalarQ(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            if len(self.den) == 1 and len(self.num) == 1 and self.shift == 0:
                self._hash = hash(Fraction(self.num[0], self.den[0]))
            else:
                self._hash = hash((self.shift, self.num, self.den))
        return self._hash

    # -- arithmetic ------------------------------------------------------

    @staticmethod
    def _coerce(x):
        if isinstance(x, ScalarQ):
            return x
        if isinstance(x, (int, Fraction)):
            return ScalarQ(x)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.num:
            return self
        if not self.num:
            return other
        s = min(self.shift, other.shift)
        a = _shift_up(self.num, self.shift - s)
        b = _shift_up(other.num, other.shift - s)
        d1, d2 = self.den, other.den
        if d1 == d2:
            if len(d1) == 1:
                return _canonical(s, _padd(a, b), d1, reduce=False)
            return _canonical(s, _padd(a, b), d1)
        if len(d1) == 1 and len(d2) == 1:
            return _canonical(s, _padd(_pmul(a, d2), _pmul(b, d1)), _pmul(d1, d2), reduce=False)
        g = _pgcd(d1, d2)
        d1g = _pdiv_exact(d1, g) if len(g) > 1 else d1
        d2g = _pdiv_exact(d2, g) if len(g) > 1 else d2
        num = _padd(_pmul(a, d2g), _pmul(b, d1g))
        den = _pmul(d1, d2g)
        if len(g) == 1 and (len(d1) == 1 or len(d2) == 1):
            # no common factor can appear when one side is a Laurent polynomial
            return _canonical(s, num, den, reduce=False)
        return _canonical(s, num, den)

    __radd__ = __add__

    def __neg__(self) -> "ScalarQ":
        if not self.num:
            return self
        return ScalarQ._make(self.shift, tuple(-c for c in self.num), self.den)

    def __pos__(self) -> "ScalarQ":
        return self

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
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.num or not other.num:
            return ScalarQ._zero
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if len(d2) > 1 and len(n1) > 1:
            g = _pgcd(n1, d2)
            if len(g) > 1:
                n1, d2 = _pdiv_exact(n1, g), _pdiv_exact(d2, g)
        if len(d1) > 1 and len(n2) > 1:
            g = _pgcd(n2, d1)
            if len(g) > 1:
                n2, d1 = _pdiv_exact(n2, g), _pdiv_exact(d1, g)
        return _canonical(self.shift + other.shift, _pmul(n1, n2), _pmul(d1, d2), reduce=False)

    __rmul__ = __mul__

    def inverse(self) -> "ScalarQ":
        if not self.num:
            raise ZeroDivisionError("division by the zero element of Q(q)")
        return _canonical(-self.shift, self.den, self.num, reduce=False)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, k: int) -> "ScalarQ":
        if not isinstance(k, int):
            return NotImplemented
        if len(self.num) == 1 and len(self.den) == 1 and abs(self.num[0]) == 1 == self.den[0]:
            sign = self.num[0] ** k if k >= 0 else self.num[0] ** (-k)
            return ScalarQ._make(self.shift * k, (sign,), (1,))
        base = self if k >= 0 else self.inverse()
        out = ScalarQ(1)
        for _ in range(abs(k)):
            out = out * base
        return out

    # -- specialization ----------------------------------------------------

    def eval_at(self, q0: Number) -> Fraction:
        q0 = Fraction(q0)
        if q0 == 0:
            raise PoleError("q0 = 0 is not admissible")
        d = _horner(self.den, q0)
        if d == 0:
            raise PoleError(f"denominator {LaurentPoly.from_dense(self.den)} vanishes at q = {q0}")
        return q0 ** self.shift * _horner(self.num, q0) / d

    # -- printing ---------------------------------------------------------

    def __str__(self) -> str:
        return format_scalar(self)

    def __repr__(self) -> str:
        return f"ScalarQ('{format_scalar(self)}')"


ScalarQ._zero = ScalarQ._make(0, (), (1,))

Q = ScalarQ.q()


class LaurentPoly(dict):
    """Exponent to rational coefficient mapping with zero terms removed."""

    def __init__(self, terms=()):
        super().__init__((e, Fraction(c)) for e, c in dict(terms).items() if c)

    @classmethod
    def from_dense(cls, coeffs: Iterable, shift: int = 0) -> "LaurentPoly":
        return cls({shift + i: c for i, c in enumerate(coeffs)})

    def __str__(self) -> str:
        return _format_laurent(self) or "0"


def _format_coeff_term(c: Fraction, e: int, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if e == 0:
        body = str(a)
    else:
        mono = "q" if e == 1 else f"q^{e}"
        body = mono if a == 1 else f"{a}*{mono}"
    if first:
        return body if sign == "+" else f"-{body}"
    return f" {sign} {body}"


def _format_laurent(terms: dict) -> str:
    return "".join(
        _format_coeff_term(terms[e], e, i == 0) for i, e in enumerate(sorted(terms, reverse=True))
    )


def format_scalar(a: ScalarQ) -> str:
    """Print in the grammar accepted by :func:`parse_scalar`."""
    if not a.num:
        return "0"
    if len(a.den) == 1:
        return _format_laurent(a.laurent_terms())
    num = _format_laurent({a.shift + i: Fraction(c) for i, c in enumerate(a.num) if c})
    den = _format_laurent({i: Fraction(c) for i, c in enumerate(a.den) if c})
    return f"({num})/({den})"


# --------------------------------------------------------------------------
# public operation wrappers


def qnum(k: int, q=None):
    """The q-integer ``k_q = q^(k-1) + q^(k-3) + ... + q^(1-k)``.

    With ``q`` omitted the result is a symbolic :class:`ScalarQ`; otherwise
    the same sum is evaluated in whatever field ``q`` belongs to.
    """
    if k < 0:
        raise ValueError("qnum expects a non-negative integer")
    if q is None:
        if k == 0:
            return ScalarQ._zero
        return ScalarQ._make(1 - k, tuple(1 if i % 2 == 0 else 0 for i in range(2 * k - 1)), (1,))
    total = q * 0
    for m in range(k):
        total = total + q ** (k - 1 - 2 * m)
    return total


def scalar_arith(a: ScalarQ, b: ScalarQ, op: str) -> ScalarQ:
    a, b = ScalarQ(a), ScalarQ(b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def eval_at(a, q0: Number) -> Fraction:
    if isinstance(a, ScalarQ):
        return a.eval_at(q0)
    return Fraction(a)


def specialize(q0: Number):
    """Return the coefficient map ``ScalarQ -> Fraction`` for ``q = q0``."""
    q0 = Fraction(q0)

    def f(c):
        return c.eval_at(q0) if isinstance(c, ScalarQ) else Fraction(c)

    return f


# --------------------------------------------------------------------------
# parser


def _tokenize(text: str):
    toks = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            toks.append(("int", int(text[i:j]), i))
            i = j
        elif ch == "q":
            toks.append(("q", None, i))
            i += 1
        elif ch in "+-*/^()":
            toks.append((ch, None, i))
            i += 1
        else:
            raise ScalarSyntaxError(f"unexpected character {ch!r}", i)
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            raise ScalarSyntaxError(f"expected {want}", tok[2])
        self.i += 1
        return tok

    def expr(self) -> ScalarQ:
        val = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            val = val + rhs if op == "+" else val - rhs
        return val

    def term(self) -> ScalarQ:
        val = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.unary()
            if op == "*":
                val = val * rhs
            else:
                if not rhs:
                    raise ScalarSyntaxError("division by zero", pos)
                val = val / rhs
        return val

    def unary(self) -> ScalarQ:
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self) -> ScalarQ:
        base = self.atom()
        if self.peek()[0] == "^":
            _, _, pos = self.take()
            k = self.exponent()
            if k < 0 and not base:
                raise ScalarSyntaxError("zero raised to a negative power", pos)
            base = base ** k
            if self.peek()[0] == "^":
                raise ScalarSyntaxError("chained exponent needs parentheses", self.peek()[2])
        return base

    def exponent(self) -> int:
        tok = self.peek()
        paren = tok[0] == "("
        if paren:
            self.take()
        sign = 1
        if self.peek()[0] in ("-", "+"):
            sign = -1 if self.take()[0] == "-" else 1
        tok = self.peek()
        if tok[0] != "int":
            raise ScalarSyntaxError("exponent must be an integer literal", tok[2])
        self.take()
        if paren:
            close = self.peek()
            if close[0] != ")":
                raise ScalarSyntaxError("exponent must be an integer literal", close[2])
            self.take()
        return sign * tok[1]

    def atom(self) -> ScalarQ:
        kind, val, pos = self.take()
        if kind == "int":
            return ScalarQ(val)
        if kind == "q":
            return Q
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return inner
        what = "end of input" if kind == "end" else repr(kind)
        raise ScalarSyntaxError(f"unexpected {what}", pos)


def parse_scalar(text: str) -> ScalarQ:
    """Parse ``q``-expressions such as ``"(q - q^-1)/(q + q^-1)"``."""
    p = _Parser(text)
    val = p.expr()
    p.take("end")
    return val


# --------------------------------------------------------------------------
# sample points


def is_admissible(q0: Number, max_degree: int = 12) -> bool:
    """True when q0 is nonzero, not +-1, and no k_q with k <= max_degree vanishes."""
    q0 = Fraction(q0)
    if q0 == 0 or abs(q0) == 1:
        return False
    return all(qnum(k, q0) != 0 for k in range(2, max_degree + 1))


def sample_points(count: int, seed: int = 0, lo: int = 2, hi: int = 50, max_degree: int = 12) -> list:
    """Deterministic distinct admissible rationals a/b with lo <= a, b <= hi."""
    rng = random.Random(seed)
    out: list = []
    seen = set()
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 100 * (count + 10):
            raise RuntimeError("could not draw enough admissible sample points")
        x = Fraction(rng.randint(lo, hi), rng.randint(lo, hi))
        if x in seen or not is_admissible(x, max_degree):
            continue
        seen.add(x)
        out.append(x)
    return out
