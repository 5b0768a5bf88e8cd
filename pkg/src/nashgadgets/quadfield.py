"""Exact arithmetic in a single quadratic field Q(sqrt(d)).

Rationals are plain :class:`fractions.Fraction` values.  Elements of the form
``a + b*sqrt(d)`` are :class:`QuadAlgebraic`.  Any operation mixing two
elements with different nonzero radical parts raises :class:`MixedRadicands`.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

__all__ = [
    "QuadAlgebraic",
    "MixedRadicands",
    "squarefree_part",
    "qsqrt",
    "to_fraction",
    "is_rational",
    "to_float",
    "compare",
    "parse_number",
    "format_number",
]


class MixedRadicands(ArithmeticError):
    """Raised when two operands live in different quadratic fields."""


_TRIAL_LIMIT = 10_000


def squarefree_part(n: int) -> tuple[int, int]:
    """Return ``(s, d)`` with ``n == s*s*d`` and ``d`` square-free."""
    if n < 0:
        raise ValueError("radicand must be non-negative")
    if n in (0, 1):
        return 1, n
    s, d = 1, 1
    m = n
    p = 2
    while p * p <= m and p <= _TRIAL_LIMIT:
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            s *= p ** (e // 2)
            if e % 2:
                d *= p
        p += 1 if p == 2 else 2
    if m > 1:
        r = math.isqrt(m)
        if r * r == m:
            s *= r
        elif p * p <= m:
            # remaining cofactor too large for trial division
            from sympy import factorint

            for q, e in factorint(m).items():
                s *= q ** (e // 2)
                if e % 2:
                    d *= q
        else:
            d *= m
    return s, d


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, QuadAlgebraic):
        if x.b != 0:
            raise ValueError(f"{x} is irrational")
        return x.a
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to Fraction")


class QuadAlgebraic:
    """The number ``a + b*sqrt(d)`` with rational ``a, b`` and square-free ``d``.

    Instances are immutable and canonical: a rational value always has
    ``b == 0`` and ``d == 0``, so equality and hashing agree with
    :class:`Fraction` for rational values.
    """

    __slots__ = ("a", "b", "d")

    def __init__(self, a=0, b=0, d=0):
        a = to_fraction(a)
        b = to_fraction(b)
        d = int(d)
        if d < 0:
            raise ValueError("radicand must be non-negative")
        if b != 0 and d > 1:
            s, d = squarefree_part(d)
            b *= s
        if d == 1:
            a, b = a + b, Fraction(0)
        if b == 0 or d == 0:
            b, d = Fraction(0), 0
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "d", d)

    def __setattr__(self, name, value):
        raise AttributeError("QuadAlgebraic is immutable")

    @classmethod
    def coerce(cls, x) -> "QuadAlgebraic":
        if isinstance(x, QuadAlgebraic):
            return x
        return cls(to_fraction(x))

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def conjugate(self) -> "QuadAlgebraic":
        return QuadAlgebraic(self.a, -self.b, self.d)

    def norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.d

    def _common(self, other):
        other = QuadAlgebraic.coerce(other)
        if self.d and other.d and self.d != other.d:
            raise MixedRadicands(f"sqrt({self.d}) and sqrt({other.d})")
        return other, self.d or other.d

    def _simplify(self):
        return self.a if self.b == 0 else self

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        try:
            o, d = self._common(other)
        except TypeError:
            return NotImplemented
        return QuadAlgebraic(self.a + o.a, self.b + o.b, d)

    __radd__ = __add__

    def __neg__(self):
        return QuadAlgebraic(-self.a, -self.b, self.d)

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o, d = self._common(other)
        except TypeError:
            return NotImplemented
        return QuadAlgebraic(self.a - o.a, self.b - o.b, d)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __mul__(self, other):
        try:
            o, d = self._common(other)
        except TypeError:
            return NotImplemented
        return QuadAlgebraic(self.a * o.a + self.b * o.b * d, self.a * o.b + self.b * o.a, d)

    __rmul__ = __mul__

    def inverse(self) -> "QuadAlgebraic":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in Q(sqrt(d))")
        return QuadAlgebraic(self.a / n, -self.b / n, self.d)

    def __truediv__(self, other):
        try:
            o, _ = self._common(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return QuadAlgebraic.coerce(other) / self

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        out = QuadAlgebraic(1)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # ordering -------------------------------------------------------------
    def sign(self) -> int:
        sa = (self.a > 0) - (self.a < 0)
        sb = (self.b > 0) - (self.b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 d
        n = self.norm()
        return sa * ((n > 0) - (n < 0))

    def _cmp(self, other) -> int:
        return (self - other).sign()

    def __eq__(self, other):
        if isinstance(other, (QuadAlgebraic, int, Rational)):
            o = QuadAlgebraic.coerce(other)
            return self.a == o.a and self.b == o.b and self.d == o.d
        if isinstance(other, float):
            return self.b == 0 and float(self.a) == other
        return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b, self.d))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __bool__(self):
        return self.a != 0 or self.b != 0

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __float__(self):
        return to_float(self)

    def __repr__(self):
        if self.b == 0:
            return f"QuadAlgebraic({self.a})"
        return f"QuadAlgebraic({self.a}, {self.b}, {self.d})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        rad = f"sqrt({self.d})" if self.b in (1, -1) else f"({abs(self.b)})sqrt({self.d})"
        if self.a == 0:
            return ("-" if self.b < 0 else "") + rad
        return f"{self.a} {'-' if self.b < 0 else '+'} {rad}"


def is_rational(x) -> bool:
    return not isinstance(x, QuadAlgebraic) or x.b == 0


def to_float(x) -> float:
    """Nearest double; meant for reporting only."""
    if not isinstance(x, QuadAlgebraic):
        return float(x)
    if x.b == 0:
        return float(x.a)
    # a + b sqrt(d) suffers cancellation when the terms nearly cancel,
    # so go through the conjugate: (a^2 - b^2 d) / (a - b sqrt(d)).
    root = math.sqrt(x.d)
    direct = float(x.a) + float(x.b) * root
    other = float(x.a) - float(x.b) * root
    if abs(other) > abs(direct) and other != 0:
        return float(x.norm()) / other
    return direct


def compare(x, y) -> int:
    """Exact three-way comparison: -1, 0 or 1."""
    return (QuadAlgebraic.coerce(x) - y).sign()


def qsqrt(r) -> Fraction | QuadAlgebraic:
    """Exact square root of a non-negative rational."""
    r = to_fraction(r)
    if r < 0:
        raise ValueError("square root of a negative number")
    p, q = r.numerator, r.denominator
    # sqrt(p/q) = sqrt(p*q)/q
    if p == 0:
        return Fraction(0)
    s, d = squarefree_part(p * q)
    if d == 1:
        return Fraction(s, q)
    return QuadAlgebraic(0, Fraction(s, q), d)


def parse_number(tokens: list[str], pos: int = 0):
    """Parse one literal starting at ``tokens[pos]``.

    Returns ``(value, next_pos)``.  Literals are ``p/q`` or ``alg a b d``.
    """
    tok = tokens[pos]
    if tok == "alg":
        if pos + 3 >= len(tokens):
            raise ValueError("truncated 'alg' literal")
        a = Fraction(tokens[pos + 1])
        b = Fraction(tokens[pos + 2])
        d = int(tokens[pos + 3])
        v = QuadAlgebraic(a, b, d)
        return (v.a if v.b == 0 else v), pos + 4
    return Fraction(tok), pos + 1


def _frac_literal(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def format_number(x) -> str:
    """Inverse of :func:`parse_number`; rationals are always written ``p/q``."""
    if isinstance(x, QuadAlgebraic):
        if x.b == 0:
            return _frac_literal(x.a)
        return f"alg {_frac_literal(x.a)} {_frac_literal(x.b)} {x.d}"
    return _frac_literal(to_fraction(x))
