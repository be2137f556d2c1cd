"""Laurent rational functions of the contraction parameter ``t``.

A :class:`ParamScalar` is stored as ``t**shift * P(t) / D(t)`` where ``P`` and
``D`` are ordinary polynomials with rational coefficients, ``P(0) != 0``,
``D(0) == 1`` and ``gcd(P, D) == 1``.  That form is unique, so equality is
structural and the valuation is simply ``shift``.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational

__all__ = [
    "ParamScalar",
    "parse_param",
    "valuation",
    "limit_at_zero_plus",
    "T",
]


# -- dense polynomial helpers; index = degree, no trailing zeros -------------

def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return tuple(p)


def _padd(p, q):
    if len(p) < len(q):
        p, q = q, p
    out = list(p)
    for i, c in enumerate(q):
        out[i] += c
    return _trim(out)


def _pscale(p, c):
    if c == 0:
        return ()
    return tuple(a * c for a in p)


def _pmul(p, q):
    if not p or not q:
        return ()
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            out[i + j] += a * b
    return _trim(out)


def _pdivmod(p, q):
    p = list(p)
    lead = q[-1]
    dq = len(q) - 1
    quot = [Fraction(0)] * max(len(p) - dq, 0)
    while len(p) > dq and p:
        c = p[-1] / lead
        shift = len(p) - 1 - dq
        quot[shift] = c
        for i, b in enumerate(q):
            p[shift + i] -= c * b
        p.pop()
        p = list(_trim(p))
    return _trim(quot), _trim(p)


def _pgcd(p, q):
    while q:
        p, q = q, _pdivmod(p, q)[1]
    return p


def _low_shift(p):
    """Split off the power of t: returns (k, p / t**k) with p(0) != 0."""
    k = 0
    while k < len(p) and p[k] == 0:
        k += 1
    return k, tuple(p[k:])


def _peval(p, x):
    acc = 0
    for c in reversed(p):
        acc = acc * x + c
    return acc


def _as_fraction(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    raise TypeError(f"cannot use {type(x).__name__} as an exact scalar")


class ParamScalar:
    """Exact Laurent rational function in ``t`` with rational coefficients."""

    __slots__ = ("shift", "num", "den", "_hash")

    def __init__(self, num=(), den=(Fraction(1),), shift=0, _canonical=False):
        if _canonical:
            self.shift, self.num, self.den = shift, num, den
            self._hash = None
            return
        num = _trim(Fraction(c) for c in num)
        den = _trim(Fraction(c) for c in den)
        if not den:
            raise ZeroDivisionError("ParamScalar with zero denominator")
        if not num:
            self.shift, self.num, self.den = 0, (), (Fraction(1),)
            self._hash = None
            return
        k, num = _low_shift(num)
        j, den = _low_shift(den)
        shift += k - j
        if len(den) > 1 and len(num) > 1:
            g = _pgcd(num, den)
            if len(g) > 1:
                num = _pdivmod(num, g)[0]
                den = _pdivmod(den, g)[0]
        c0 = den[0]
        if c0 != 1:
            num = _pscale(num, 1 / c0)
            den = _pscale(den, 1 / c0)
        self.shift, self.num, self.den = shift, num, den
        self._hash = None

    # -- construction -------------------------------------------------------

    @classmethod
    def const(cls, c) -> "ParamScalar":
        c = _as_fraction(c)
        if c == 0:
            return cls((), (Fraction(1),), 0, _canonical=True)
        return cls((c,), (Fraction(1),), 0, _canonical=True)

    @classmethod
    def monomial(cls, c, k: int) -> "ParamScalar":
        """``c * t**k`` for an integer ``k`` of either sign."""
        c = _as_fraction(c)
        if c == 0:
            return cls.const(0)
        return cls((c,), (Fraction(1),), int(k), _canonical=True)

    @classmethod
    def coerce(cls, x) -> "ParamScalar":
        if isinstance(x, ParamScalar):
            return x
        if isinstance(x, str):
            return parse_param(x)
        return cls.const(x)

    # -- queries ------------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.num

    def is_constant(self) -> bool:
        return self.is_zero() or (self.shift == 0 and len(self.num) == 1 and len(self.den) == 1)

    def is_laurent(self) -> bool:
        """True when the denominator is 1, i.e. a plain Laurent polynomial."""
        return len(self.den) == 1

    def constant_value(self) -> Fraction:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0] if self.num else Fraction(0)

    def valuation(self):
        return math.inf if self.is_zero() else self.shift

    def limit(self):
        """One-sided limit at ``t -> 0+``; ``None`` when it diverges."""
        if self.is_zero() or self.shift > 0:
            return Fraction(0)
        if self.shift < 0:
            return None
        return self.num[0]  # den[0] == 1

    def __call__(self, t):
        """Evaluate at ``t`` (a Fraction gives an exact result, a float a float)."""
        if self.is_zero():
            return 0 * t
        d = _peval(self.den, t)
        if d == 0 or (t == 0 and self.shift < 0):
            raise ZeroDivisionError(f"{self} has a pole at t={t}")
        return t ** self.shift * _peval(self.num, t) / d

    # -- arithmetic ---------------------------------------------------------

    def _parts(self):
        return self.shift, self.num, self.den

    def __add__(self, other):
        try:
            other = ParamScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        s1, p1, d1 = self._parts()
        s2, p2, d2 = other._parts()
        s = min(s1, s2)
        p1 = (Fraction(0),) * (s1 - s) + p1
        p2 = (Fraction(0),) * (s2 - s) + p2
        if d1 == d2:
            return ParamScalar(_padd(p1, p2), d1, s)
        return ParamScalar(_padd(_pmul(p1, d2), _pmul(p2, d1)), _pmul(d1, d2), s)

    __radd__ = __add__

    def __neg__(self):
        return ParamScalar(tuple(-c for c in self.num), self.den, self.shift, _canonical=True)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            other = ParamScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        try:
            other = ParamScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        try:
            other = ParamScalar.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return ParamScalar.const(0)
        s1, p1, d1 = self._parts()
        s2, p2, d2 = other._parts()
        if len(d1) == 1 and len(d2) == 1:
            return ParamScalar(_pmul(p1, p2), (Fraction(1),), s1 + s2, _canonical=True)
        return ParamScalar(_pmul(p1, p2), _pmul(d1, d2), s1 + s2)

    __rmul__ = __mul__

    def inverse(self) -> "ParamScalar":
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero ParamScalar")
        return ParamScalar(self.den, self.num, -self.shift)

    def __truediv__(self, other):
        try:
            other = ParamScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        try:
            other = ParamScalar.coerce(other)
        except TypeError:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = ParamScalar.const(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # -- comparison / hashing ----------------------------------------------

    def __eq__(self, other):
        if isinstance(other, ParamScalar):
            return self._parts() == other._parts()
        if isinstance(other, (int, Rational)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            if self.is_constant():
                self._hash = hash(self.constant_value())
            else:
                self._hash = hash(self._parts())
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    def __float__(self):
        return float(self.constant_value())

    # -- text ---------------------------------------------------------------

    def __str__(self):
        num = _format_poly(self.num, self.shift)
        if len(self.den) == 1:
            return num
        return f"({num})/({_format_poly(self.den, 0)})"

    def __repr__(self):
        return f"ParamScalar('{self}')"


def _format_coeff(c: Fraction) -> str:
    return str(c.numerator) if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _format_poly(p, shift) -> str:
    if not p:
        return "0"
    parts = []
    for i in range(len(p) - 1, -1, -1):
        c = p[i]
        if c == 0:
            continue
        k = i + shift
        sign = "-" if c < 0 else "+"
        a = abs(c)
        if k == 0:
            body = _format_coeff(a)
        else:
            tk = "t" if k == 1 else f"t^{k}"
            body = tk if a == 1 else f"{_format_coeff(a)}*{tk}"
        parts.append((sign, body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


T = ParamScalar.monomial(1, 1)


def valuation(f) -> float:
    """Lowest power of ``t`` in ``f``; ``math.inf`` for zero."""
    return ParamScalar.coerce(f).valuation()


def limit_at_zero_plus(f):
    """Return the limit of ``f`` as ``t -> 0+`` as a Fraction, or ``None`` if it diverges."""
    return ParamScalar.coerce(f).limit()


# -- parser -----------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(t)|([-+*/^()]))")


def _tokenize(text):
    pos = 0
    out = []
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValueError(f"unexpected character {text[pos]!r} in {text!r}")
        num, t, op = m.groups()
        out.append(("num", int(num)) if num else ("t", None) if t else ("op", op))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = _tokenize(text)
        self.i = 0

    def peek(self, kind=None, value=None):
        if self.i >= len(self.toks):
            return False
        k, v = self.toks[self.i]
        return (kind is None or k == kind) and (value is None or v == value)

    def take(self, kind, value=None):
        if not self.peek(kind, value):
            want = value if value is not None else kind
            raise ValueError(f"expected {want!r} at token {self.i} in {self.text!r}")
        tok = self.toks[self.i]
        self.i += 1
        return tok[1]

    def parse(self):
        if not self.toks:
            raise ValueError("empty ParamScalar string")
        out = self.ratio()
        if self.i != len(self.toks):
            raise ValueError(f"trailing input in {self.text!r}")
        return out

    def ratio(self):
        if self.peek("op", "("):
            self.take("op", "(")
            num = self.poly()
            self.take("op", ")")
            if self.peek("op", "/"):
                self.take("op", "/")
                self.take("op", "(")
                den = self.poly()
                self.take("op", ")")
                if den.is_zero():
                    raise ValueError(f"zero denominator in {self.text!r}")
                return num / den
            return num
        return self.poly()

    def poly(self):
        total = ParamScalar.const(0)
        sign = 1
        if self.peek("op", "+") or self.peek("op", "-"):
            sign = -1 if self.take("op") == "-" else 1
        total = total + sign * self.term()
        while self.peek("op", "+") or self.peek("op", "-"):
            sign = -1 if self.take("op") == "-" else 1
            total = total + sign * self.term()
        return total

    def term(self):
        if self.peek("t"):
            return ParamScalar.monomial(1, self.tpow())
        coeff = Fraction(self.take("num"))
        if self.peek("op", "/") and self.i + 1 < len(self.toks) and self.toks[self.i + 1][0] == "num":
            self.take("op", "/")
            den = self.take("num")
            if den == 0:
                raise ValueError(f"zero denominator in {self.text!r}")
            coeff /= den
        if self.peek("op", "*"):
            self.take("op", "*")
            return ParamScalar.monomial(coeff, self.tpow())
        return ParamScalar.const(coeff)

    def tpow(self):
        self.take("t")
        if not self.peek("op", "^"):
            return 1
        self.take("op", "^")
        sign = 1
        if self.peek("op", "-") or self.peek("op", "+"):
            sign = -1 if self.take("op") == "-" else 1
        return sign * self.take("num")


def parse_param(text: str) -> ParamScalar:
    """Parse ``'2/3*t^2 - 1'``, ``'t^-1'``, ``'(1+t)/(2-t)'`` and similar."""
    return _Parser(text).parse()
