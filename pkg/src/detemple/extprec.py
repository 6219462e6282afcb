"""Double-word ("double-double") floating point arithmetic.

A value is stored as an unevaluated sum ``hi + lo`` of two IEEE doubles with
``|lo| <= ulp(hi)/2``, which gives roughly 31 significant decimal digits.
The error-free transformations follow Dekker and Knuth; the accurate
addition and division are the usual QD-library variants.
"""

from __future__ import annotations

import math
from decimal import Decimal, localcontext
from fractions import Fraction
from typing import Union

from .errors import DomainError

__all__ = [
    "ExtReal",
    "ExtDomainError",
    "ext_from",
    "ext_add",
    "ext_sub",
    "ext_mul",
    "ext_div",
    "ext_sqrt",
    "ext_ln",
    "ext_exp",
    "ext_sinh",
    "ext_cosh",
    "two_sum",
    "two_prod",
]

Number = Union["ExtReal", float, int, Fraction]

_SPLITTER = 134217729.0  # 2**27 + 1
_MAX_DIGITS = 40


class ExtDomainError(DomainError, ArithmeticError):
    """Raised for ln of a non-positive value, division by zero, sqrt of a negative."""


def two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def _quick_two_sum(a: float, b: float) -> tuple[float, float]:
    # requires |a| >= |b|
    s = a + b
    return s, b - (s - a)


def _split(a: float) -> tuple[float, float]:
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


class ExtReal:
    """A real number carried as ``hi + lo``.

    Instances are immutable. Arithmetic operators accept ``ExtReal``,
    ``int``, ``float`` and ``Fraction`` operands.
    """

    __slots__ = ("hi", "lo")

    def __init__(self, hi: float = 0.0, lo: float = 0.0):
        hi = float(hi)
        lo = float(lo)
        if not (math.isfinite(hi) and math.isfinite(lo)):
            raise ExtDomainError(f"non-finite ExtReal component ({hi!r}, {lo!r})")
        s, e = two_sum(hi, lo)
        object.__setattr__(self, "hi", s)
        object.__setattr__(self, "lo", e)

    def __setattr__(self, name, value):
        raise AttributeError("ExtReal is immutable")

    @classmethod
    def _raw(cls, hi: float, lo: float) -> "ExtReal":
        # caller guarantees (hi, lo) is already normalized
        obj = object.__new__(cls)
        object.__setattr__(obj, "hi", hi)
        object.__setattr__(obj, "lo", lo)
        return obj

    @classmethod
    def coerce(cls, v: Number) -> "ExtReal":
        if isinstance(v, ExtReal):
            return v
        if isinstance(v, float):
            return cls._raw(v, 0.0)
        if isinstance(v, int):
            hi = float(v)
            return cls._raw(hi, float(v - int(hi))) if abs(v) > 2**53 else cls._raw(hi, 0.0)
        if isinstance(v, Fraction):
            return cls.from_fraction(v)
        raise TypeError(f"cannot convert {type(v).__name__} to ExtReal")

    @classmethod
    def from_fraction(cls, q: Fraction) -> "ExtReal":
        """Round an exact rational to double-word precision."""
        q = Fraction(q)
        hi = float(q)
        lo = float(q - Fraction(hi))
        return cls(hi, lo)

    def to_fraction(self) -> Fraction:
        return Fraction(self.hi) + Fraction(self.lo)

    def to_decimal(self) -> Decimal:
        with localcontext() as ctx:
            ctx.prec = 60
            return Decimal(self.hi) + Decimal(self.lo)

    def to_string(self, digits: int = 30) -> str:
        """Decimal string with ``digits`` significant digits (no locale)."""
        d = self.to_decimal()
        if d == 0:
            return "0"
        return f"{d:.{digits - 1}e}"

    # --- conversions ------------------------------------------------------

    def __float__(self) -> float:
        return self.hi + self.lo

    def __repr__(self) -> str:
        return f"ExtReal({self.to_string(32)})"

    def __str__(self) -> str:
        return self.to_string(30)

    def __hash__(self) -> int:
        return hash((self.hi, self.lo))

    # --- comparisons ------------------------------------------------------

    def _cmp(self, other: Number) -> int:
        o = ExtReal.coerce(other)
        if self.hi != o.hi:
            return -1 if self.hi < o.hi else 1
        if self.lo != o.lo:
            return -1 if self.lo < o.lo else 1
        return 0

    def __eq__(self, other) -> bool:
        try:
            return self._cmp(other) == 0
        except TypeError:
            return NotImplemented

    def __lt__(self, other) -> bool:
        return self._cmp(other) < 0

    def __le__(self, other) -> bool:
        return self._cmp(other) <= 0

    def __gt__(self, other) -> bool:
        return self._cmp(other) > 0

    def __ge__(self, other) -> bool:
        return self._cmp(other) >= 0

    def __bool__(self) -> bool:
        return self.hi != 0.0

    # --- arithmetic -------------------------------------------------------

    def __neg__(self) -> "ExtReal":
        return ExtReal._raw(-self.hi, -self.lo)

    def __pos__(self) -> "ExtReal":
        return self

    def __abs__(self) -> "ExtReal":
        return -self if self.hi < 0.0 else self

    def __add__(self, other: Number) -> "ExtReal":
        if isinstance(other, float):
            s1, s2 = two_sum(self.hi, other)
            s2 += self.lo
            return ExtReal._raw(*_quick_two_sum(s1, s2))
        try:
            b = ExtReal.coerce(other)
        except TypeError:
            return NotImplemented
        s1, s2 = two_sum(self.hi, b.hi)
        t1, t2 = two_sum(self.lo, b.lo)
        s2 += t1
        s1, s2 = _quick_two_sum(s1, s2)
        s2 += t2
        return ExtReal._raw(*_quick_two_sum(s1, s2))

    __radd__ = __add__

    def __sub__(self, other: Number) -> "ExtReal":
        try:
            b = ExtReal.coerce(other)
        except TypeError:
            return NotImplemented
        return self + ExtReal._raw(-b.hi, -b.lo)

    def __rsub__(self, other: Number) -> "ExtReal":
        return ExtReal.coerce(other) - self

    def __mul__(self, other: Number) -> "ExtReal":
        if isinstance(other, float):
            p1, p2 = two_prod(self.hi, other)
            p2 += self.lo * other
            return ExtReal._raw(*_quick_two_sum(p1, p2))
        try:
            b = ExtReal.coerce(other)
        except TypeError:
            return NotImplemented
        p1, p2 = two_prod(self.hi, b.hi)
        p2 += self.hi * b.lo + self.lo * b.hi
        return ExtReal._raw(*_quick_two_sum(p1, p2))

    __rmul__ = __mul__

    def __truediv__(self, other: Number) -> "ExtReal":
        try:
            b = ExtReal.coerce(other)
        except TypeError:
            return NotImplemented
        if b.hi == 0.0:
            raise ExtDomainError("division by zero")
        q1 = self.hi / b.hi
        r = self - b * q1
        q2 = r.hi / b.hi
        r = r - b * q2
        q3 = r.hi / b.hi
        q1, q2 = _quick_two_sum(q1, q2)
        return ExtReal._raw(q1, q2) + q3

    def __rtruediv__(self, other: Number) -> "ExtReal":
        return ExtReal.coerce(other) / self

    def __pow__(self, n: int) -> "ExtReal":
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ONE / (self ** (-n))
        result = ONE
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def ldexp(self, k: int) -> "ExtReal":
        return ExtReal._raw(math.ldexp(self.hi, k), math.ldexp(self.lo, k))

    def sqrt(self) -> "ExtReal":
        return ext_sqrt(self)

    def ln(self) -> "ExtReal":
        return ext_ln(self)

    def exp(self) -> "ExtReal":
        return ext_exp(self)


ZERO = ExtReal._raw(0.0, 0.0)
ONE = ExtReal._raw(1.0, 0.0)


def ext_from(v: str | Number) -> ExtReal:
    """Parse a signed decimal string (at most 40 significant digits) into an ExtReal.

    Non-string numbers are converted exactly and then rounded.
    """
    if not isinstance(v, str):
        return ExtReal.coerce(v)
    text = v.strip()
    mantissa = text.split("e")[0].split("E")[0]
    digits = len(mantissa.lstrip("+-").replace(".", "").lstrip("0"))
    if not any(ch.isdigit() for ch in mantissa) or digits > _MAX_DIGITS:
        raise ValueError(f"invalid decimal literal for ExtReal: {v!r}")
    try:
        q = Fraction(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"invalid decimal literal for ExtReal: {v!r}") from exc
    return ExtReal.from_fraction(q)


_LN2 = ExtReal.from_fraction(Fraction("0.69314718055994530941723212145817656807550013436026"))


def ext_add(a: Number, b: Number) -> ExtReal:
    return ExtReal.coerce(a) + b


def ext_sub(a: Number, b: Number) -> ExtReal:
    return ExtReal.coerce(a) - b


def ext_mul(a: Number, b: Number) -> ExtReal:
    return ExtReal.coerce(a) * b


def ext_div(a: Number, b: Number) -> ExtReal:
    return ExtReal.coerce(a) / b


def ext_sqrt(a: Number) -> ExtReal:
    a = ExtReal.coerce(a)
    if a.hi < 0.0:
        raise ExtDomainError("sqrt of a negative number")
    if a.hi == 0.0:
        return ZERO
    s = math.sqrt(a.hi)
    p1, p2 = two_prod(s, s)
    resid = a - ExtReal._raw(p1, p2)
    return ExtReal(s) + resid.hi / (2.0 * s)


def _expm1_small(r: ExtReal) -> ExtReal:
    # Taylor series for |r| < 1e-3
    term = r
    total = r
    for k in range(2, 14):
        term = term * r / float(k)
        total = total + term
        if abs(term.hi) < 1e-36 * max(abs(total.hi), 1e-300):
            break
    return total


def ext_exp(a: Number) -> ExtReal:
    """exp with argument reduction by ln 2 and 2**-10, then squaring of expm1."""
    a = ExtReal.coerce(a)
    if a.hi > 709.0:
        raise ExtDomainError("exp overflow")
    if a.hi < -700.0:
        return ZERO
    k = int(round(a.hi / _LN2.hi))
    r = (a - _LN2 * float(k)).ldexp(-10)
    e = _expm1_small(r)
    for _ in range(10):
        # (1 + e)**2 - 1
        e = e * (e + 2.0)
    return (e + 1.0).ldexp(k)


def ext_ln(a: Number) -> ExtReal:
    """Natural log: atanh series near 1, else a double-precision seed plus one Newton step on exp."""
    a = ExtReal.coerce(a)
    if a.hi <= 0.0:
        raise ExtDomainError(f"ln of non-positive value {float(a)!r}")
    if abs(a.hi - 1.0) < 0.125:
        # 2 atanh(s), s = (a - 1)/(a + 1): no cancellation for a near 1
        s = (a - 1.0) / (a + 1.0)
        s2 = s * s
        acc, term, k = ExtReal(), s, 1
        while term.hi != 0.0 and abs(term.hi) > 1e-36 * abs(s.hi):
            acc = acc + term / float(k)
            term = term * s2
            k += 2
        return acc * 2.0
    y0 = ExtReal(math.log(a.hi))
    return y0 + (a * ext_exp(-y0) - 1.0)


def ext_sinh(a: Number) -> ExtReal:
    a = ExtReal.coerce(a)
    if abs(a.hi) < 0.5:
        # direct series avoids cancellation in (e^a - e^-a)/2
        a2 = a * a
        term = a
        total = a
        for k in range(1, 20):
            term = term * a2 / float((2 * k) * (2 * k + 1))
            total = total + term
            if abs(term.hi) < 1e-34 * abs(total.hi):
                break
        return total
    e = ext_exp(a)
    return (e - 1.0 / e).ldexp(-1)


def ext_cosh(a: Number) -> ExtReal:
    e = ext_exp(a)
    return (e + 1.0 / e).ldexp(-1)
