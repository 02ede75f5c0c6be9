"""Exact Gaussian rationals ``a + b*i`` with ``a, b`` rational.

Stored as three integers ``(re_num, im_num, den)`` with ``den > 0`` and
``gcd(re_num, im_num, den) == 1``, so equality is plain tuple equality.

Text form (used by every JSON file this package reads or writes)::

    scalar  := real | real sign imag " i"
    real    := ["-"] digits ["/" digits]
    imag    := digits ["/" digits]
    sign    := "+" | "-"

e.g. ``"3"``, ``"-1/2"``, ``"0+1 i"``, ``"1/2-3/4 i"``.  The parser is more
lenient than the printer: it also accepts ``"i"``, ``"-2i"``, ``"3/4 i"`` and
plain JSON integers.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from numbers import Rational

__all__ = ["GaussianRational", "GR", "ZERO", "ONE", "I", "parse_scalar"]


def _normalize(a: int, b: int, d: int) -> tuple[int, int, int]:
    if d == 0:
        raise ZeroDivisionError("Gaussian rational with zero denominator")
    if d < 0:
        a, b, d = -a, -b, -d
    g = gcd(gcd(a, b), d)
    if g > 1:
        a //= g
        b //= g
        d //= g
    return a, b, d


class GaussianRational:
    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re=0, im=0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // gcd(re.denominator, im.denominator)
        self._a, self._b, self._d = _normalize(
            re.numerator * (d // re.denominator),
            im.numerator * (d // im.denominator),
            d,
        )

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "GaussianRational":
        """Build from an unreduced ``(a + b i) / d`` triple."""
        obj = object.__new__(cls)
        obj._a, obj._b, obj._d = _normalize(a, b, d)
        return obj

    @classmethod
    def coerce(cls, x) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Rational)):
            return cls(x)
        if isinstance(x, complex):
            return cls(Fraction(x.real), Fraction(x.imag))
        if isinstance(x, str):
            return parse_scalar(x)
        raise TypeError(f"cannot convert {type(x).__name__} to GaussianRational")

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    @property
    def triple(self) -> tuple[int, int, int]:
        return self._a, self._b, self._d

    def is_zero(self) -> bool:
        return self._a == 0 and self._b == 0

    def __bool__(self) -> bool:
        return not self.is_zero()

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self._a, -self._b, self._d)

    def norm(self) -> Fraction:
        """Squared modulus ``re^2 + im^2``."""
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    # arithmetic -----------------------------------------------------------

    def __add__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, d = self._a, self._b, self._d
        c, e, f = o._a, o._b, o._d
        if d == f:
            return GaussianRational._raw(a + c, b + e, d)
        return GaussianRational._raw(a * f + c * d, b * f + e * d, d * f)

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(GaussianRational)
        obj._a, obj._b, obj._d = -self._a, -self._b, self._d
        return obj

    def __pos__(self):
        return self

    def __sub__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, d = self._a, self._b, self._d
        c, e, f = o._a, o._b, o._d
        return GaussianRational._raw(a * c - b * e, a * e + b * c, d * f)

    __rmul__ = __mul__

    def inverse(self) -> "GaussianRational":
        a, b, d = self._a, self._b, self._d
        n = a * a + b * b
        if n == 0:
            raise ZeroDivisionError("inverse of zero")
        # d / (a + bi) = d (a - bi) / (a^2 + b^2)
        return GaussianRational._raw(d * a, -d * b, n)

    def __truediv__(self, other):
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, k: int):
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.inverse() ** (-k)
        result = ONE
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # comparison / hashing -------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self._a == other._a and self._b == other._b and self._d == other._d
        try:
            o = GaussianRational.coerce(other)
        except TypeError:
            return NotImplemented
        return self == o

    def __hash__(self):
        if self._b == 0:
            return hash(Fraction(self._a, self._d))
        return hash((self._a, self._b, self._d))

    def __complex__(self):
        return complex(self._a / self._d, self._b / self._d)

    def __repr__(self):
        return f"GR({str(self)!r})"

    def __str__(self):
        re_part = str(self.re)
        if self._b == 0:
            return re_part
        im = self.im
        sign = "+" if im > 0 else "-"
        return f"{re_part}{sign}{abs(im)} i"


GR = GaussianRational
ZERO = GaussianRational(0)
ONE = GaussianRational(1)
I = GaussianRational(0, 1)

_RAT = r"\d+(?:/\d+)?"
_SCALAR_RE = re.compile(
    rf"""^\s*
    (?:
        (?P<re>[+-]?{_RAT})
        (?:\s*(?P<sign>[+-])\s*(?P<im>{_RAT})?\s*\*?\s*i)?
      |
        (?P<pure_sign>[+-]?)\s*(?P<pure>{_RAT})?\s*\*?\s*i
    )\s*$""",
    re.VERBOSE,
)


def parse_scalar(text) -> GaussianRational:
    """Parse a scalar from its text form (or a JSON int)."""
    if isinstance(text, bool):
        raise ValueError(f"invalid scalar {text!r}")
    if isinstance(text, int):
        return GaussianRational(text)
    if not isinstance(text, str):
        raise ValueError(f"invalid scalar {text!r}")
    m = _SCALAR_RE.match(text)
    if m is None:
        raise ValueError(f"invalid scalar {text!r}")
    try:
        if m.group("re") is not None:
            re_part = Fraction(m.group("re"))
            im_part = Fraction(0)
            if m.group("sign"):
                im_part = Fraction(m.group("im") or 1)
                if m.group("sign") == "-":
                    im_part = -im_part
            return GaussianRational(re_part, im_part)
        im_part = Fraction(m.group("pure") or 1)
        if m.group("pure_sign") == "-":
            im_part = -im_part
        return GaussianRational(0, im_part)
    except ZeroDivisionError:
        raise ValueError(f"invalid scalar {text!r}: zero denominator") from None
