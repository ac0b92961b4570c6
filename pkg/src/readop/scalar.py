"""Exact rational scalars with a binary-exponent fast path.

A :class:`Scalar` stores ``num / den * 2**exp`` where ``num`` and ``den`` are
odd (or ``num == 0``) and coprime.  Multiplying, dividing and comparing values
whose magnitudes differ by millions of binary orders therefore never builds
the huge integers; only additions of misaligned values do.
"""

from __future__ import annotations

import re
from fractions import Fraction
from math import gcd
from numbers import Rational
from typing import Union

Number = Union["Scalar", int, Fraction]

# exponents up to this size are printed as plain fractions
_PLAIN_EXP = 64

_TEXT = re.compile(
    r"""^\s*
    (?P<sign>[+-])?
    (?:
        2\^(?P<pexp>[+-]?\d+)
      |
        (?P<num>\d+)(?:/(?P<den>\d+))?(?:\*2\^(?P<exp>[+-]?\d+))?
    )
    \s*$""",
    re.VERBOSE,
)


def _twos(n: int) -> int:
    return (n & -n).bit_length() - 1


class Scalar:
    __slots__ = ("num", "den", "exp")

    num: int
    den: int
    exp: int

    def __new__(cls, value: Number | str = 0) -> "Scalar":
        if isinstance(value, Scalar):
            return value
        if isinstance(value, bool):
            value = int(value)
        if isinstance(value, int):
            return cls._make(value, 1, 0)
        if isinstance(value, Rational):
            return cls._make(int(value.numerator), int(value.denominator), 0)
        if isinstance(value, str):
            return cls.parse(value)
        raise TypeError(f"cannot make a Scalar from {type(value).__name__}")

    @classmethod
    def _raw(cls, num: int, den: int, exp: int) -> "Scalar":
        self = object.__new__(cls)
        self.num = num
        self.den = den
        self.exp = exp
        return self

    @classmethod
    def _make(cls, num: int, den: int, exp: int) -> "Scalar":
        if den == 0:
            raise ZeroDivisionError("Scalar with zero denominator")
        if num == 0:
            return _ZERO
        if den < 0:
            num, den = -num, -den
        t = _twos(num)
        if t:
            num >>= t
            exp += t
        t = _twos(den)
        if t:
            den >>= t
            exp -= t
        if den != 1:
            g = gcd(num, den)
            if g != 1:
                num //= g
                den //= g
        return cls._raw(num, den, exp)

    @classmethod
    def pow2(cls, e: int) -> "Scalar":
        """Return ``2**e`` for any integer ``e`` (negative allowed)."""
        return cls._raw(1, 1, int(e))

    # -- inspection ---------------------------------------------------------

    def is_zero(self) -> bool:
        return self.num == 0

    def is_dyadic(self) -> bool:
        """True when the value is ``±2**e``."""
        return self.den == 1 and (self.num == 1 or self.num == -1)

    def sign(self) -> int:
        return (self.num > 0) - (self.num < 0)

    @property
    def numerator(self) -> int:
        return self.as_fraction().numerator

    @property
    def denominator(self) -> int:
        return self.as_fraction().denominator

    def as_fraction(self) -> Fraction:
        if self.exp >= 0:
            return Fraction(self.num << self.exp, self.den)
        return Fraction(self.num, self.den << -self.exp)

    def log2_bounds(self) -> tuple[int, int]:
        """Integers ``lo, hi`` with ``2**lo < |x| < 2**hi`` (x non-zero)."""
        if self.num == 0:
            raise ValueError("log2 of zero")
        mid = self.exp + abs(self.num).bit_length() - self.den.bit_length()
        return mid - 1, mid + 1

    def pow2_ceiling(self) -> "Scalar":
        """Smallest power of two ``>= |self|`` (self non-zero)."""
        if self.num == 0:
            raise ValueError("pow2_ceiling of zero")
        a = abs(self)
        lo, hi = a.log2_bounds()
        for e in range(lo, hi + 1):
            if Scalar.pow2(e) >= a:
                return Scalar.pow2(e)
        raise AssertionError("unreachable")

    def log2_exact(self) -> int:
        """Exponent of a dyadic value ``±2**e``."""
        if not self.is_dyadic():
            raise ValueError(f"{self} is not a power of two")
        return self.exp

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: Number) -> "Scalar":
        if not isinstance(other, Scalar):
            try:
                other = Scalar(other)
            except TypeError:
                return NotImplemented
        if other.num == 0:
            return self
        if self.num == 0:
            return other
        a, b = (self, other) if self.exp <= other.exp else (other, self)
        shift = b.exp - a.exp
        if a.den == b.den:
            num = a.num + (b.num << shift)
            return Scalar._make(num, a.den, a.exp)
        num = a.num * b.den + ((b.num * a.den) << shift)
        return Scalar._make(num, a.den * b.den, a.exp)

    __radd__ = __add__

    def __neg__(self) -> "Scalar":
        if self.num == 0:
            return self
        return Scalar._raw(-self.num, self.den, self.exp)

    def __pos__(self) -> "Scalar":
        return self

    def __abs__(self) -> "Scalar":
        return self if self.num >= 0 else -self

    def __sub__(self, other: Number) -> "Scalar":
        if not isinstance(other, Scalar):
            try:
                other = Scalar(other)
            except TypeError:
                return NotImplemented
        return self + (-other)

    def __rsub__(self, other: Number) -> "Scalar":
        return Scalar(other) - self

    def __mul__(self, other: Number) -> "Scalar":
        if not isinstance(other, Scalar):
            try:
                other = Scalar(other)
            except TypeError:
                return NotImplemented
        if self.num == 0 or other.num == 0:
            return _ZERO
        n1, d1, n2, d2 = self.num, self.den, other.num, other.den
        if d1 == 1 and d2 == 1:
            return Scalar._raw(n1 * n2, 1, self.exp + other.exp)
        g1 = gcd(n1, d2)
        g2 = gcd(n2, d1)
        return Scalar._raw(
            (n1 // g1) * (n2 // g2), (d1 // g2) * (d2 // g1), self.exp + other.exp
        )

    __rmul__ = __mul__

    def reciprocal(self) -> "Scalar":
        if self.num == 0:
            raise ZeroDivisionError("reciprocal of zero")
        if self.num < 0:
            return Scalar._raw(-self.den, -self.num, -self.exp)
        return Scalar._raw(self.den, self.num, -self.exp)

    def __truediv__(self, other: Number) -> "Scalar":
        if not isinstance(other, Scalar):
            try:
                other = Scalar(other)
            except TypeError:
                return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other: Number) -> "Scalar":
        return Scalar(other) * self.reciprocal()

    def __pow__(self, k: int) -> "Scalar":
        if not isinstance(k, int):
            return NotImplemented
        if k < 0:
            return self.reciprocal() ** (-k)
        if k == 0:
            return _ONE
        if self.num == 0:
            return _ZERO
        if self.den == 1 and abs(self.num) == 1:
            sign = -1 if (self.num < 0 and k % 2) else 1
            return Scalar._raw(sign, 1, self.exp * k)
        return Scalar._raw(self.num**k, self.den**k, self.exp * k)

    # -- comparison ---------------------------------------------------------

    def _cmp(self, other: "Scalar") -> int:
        s1, s2 = self.sign(), other.sign()
        if s1 != s2:
            return -1 if s1 < s2 else 1
        if s1 == 0:
            return 0
        if self.num == other.num and self.den == other.den and self.exp == other.exp:
            return 0
        lo1, hi1 = self.log2_bounds()
        lo2, hi2 = other.log2_bounds()
        if hi1 <= lo2:
            return -s1
        if hi2 <= lo1:
            return s1
        return (self - other).sign()

    def _coerce(self, other: object) -> "Scalar | None":
        if isinstance(other, Scalar):
            return other
        if isinstance(other, (int, Rational)):
            return Scalar(other)
        return None

    def __eq__(self, other: object) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.num == o.num and self.den == o.den and self.exp == o.exp

    def __lt__(self, other: Number) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._cmp(o) < 0

    def __le__(self, other: Number) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._cmp(o) <= 0

    def __gt__(self, other: Number) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._cmp(o) > 0

    def __ge__(self, other: Number) -> bool:
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._cmp(o) >= 0

    def __hash__(self) -> int:
        return hash((self.num, self.den, self.exp))

    def __bool__(self) -> bool:
        return self.num != 0

    # -- text ---------------------------------------------------------------

    def __str__(self) -> str:
        if self.num == 0:
            return "0"
        if abs(self.exp) <= _PLAIN_EXP:
            f = self.as_fraction()
            return str(f)
        sign = "-" if self.num < 0 else ""
        if self.is_dyadic():
            return f"{sign}2^{self.exp}"
        body = str(abs(self.num)) if self.den == 1 else f"{abs(self.num)}/{self.den}"
        return f"{sign}{body}*2^{self.exp}"

    def __repr__(self) -> str:
        return f"Scalar('{self}')"

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        """Parse ``n``, ``n/d``, ``±2^e`` or ``n/d*2^e``."""
        m = _TEXT.match(text)
        if m is None:
            raise ValueError(f"bad scalar literal: {text!r}")
        neg = m.group("sign") == "-"
        if m.group("pexp") is not None:
            v = cls.pow2(int(m.group("pexp")))
        else:
            den = int(m.group("den") or 1)
            if den == 0:
                raise ValueError(f"zero denominator in {text!r}")
            v = cls._make(int(m.group("num")), den, int(m.group("exp") or 0))
        return -v if neg else v


_ZERO = Scalar._raw(0, 1, 0)
_ONE = Scalar._raw(1, 1, 0)

ZERO = _ZERO
ONE = _ONE


def scalar_sum(values) -> Scalar:
    total = _ZERO
    for v in values:
        total = total + v
    return total
