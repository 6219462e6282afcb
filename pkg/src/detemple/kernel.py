"""The Laplace kernel Q(t) = 1/t - 1/(2 sinh(t/2)) and its first four derivatives.

Closed forms are written with u = t/2, e = exp(-u), so that 1/sinh u and
coth u stay finite for every t > 0:

    Q'    = -1/t^2 + (1/4) coth(u) / sinh(u)
    Q''   =  2/t^3 + 1/(8 sinh u) - (1/4) coth(u)^2 / sinh(u)
    Q'''  = -6/t^4 - (5/16) coth(u) / sinh(u) + (3/8) coth(u)^3 / sinh(u)
    Q'''' = 24/t^5 - (5/32) / sinh(u) + (7/8) coth(u)^2 / sinh(u)
            - (3/4) coth(u)^4 / sinh(u)

Below a switch point the Maclaurin series (odd powers only) is used instead,
because the closed forms cancel catastrophically as t -> 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import bernoulli
from .errors import BracketError, DomainError
from .extprec import ExtReal, ext_exp, ext_sqrt

__all__ = [
    "KernelSeries",
    "RatioMinimum",
    "q_taylor",
    "q",
    "q_deriv",
    "ratio",
    "ratio_slope",
    "minimize_ratio",
    "a0",
    "laplace_quad",
    "T_SWITCH",
]

PRECISIONS = ("native", "extended")
MAX_ORDER = 59
# below these points the series is used; see the module docstring
T_SWITCH = {"native": 2.0, "extended": 1.0}


def check_precision(precision: str) -> str:
    if precision not in PRECISIONS:
        raise ValueError(f"precision must be one of {PRECISIONS}, got {precision!r}")
    return precision


@dataclass(frozen=True)
class KernelSeries:
    """Odd Maclaurin coefficients c1, c3, ... of Q, up to index ``order``."""

    coeffs: tuple[Fraction, ...]
    order: int

    def coefficient(self, j: int) -> Fraction:
        if j % 2 == 0 or j > self.order or j < 1:
            return Fraction(0)
        return self.coeffs[(j - 1) // 2]

    def derivative_terms(self, k: int) -> list[tuple[int, Fraction]]:
        """(power, coefficient) pairs of the k-th derivative series."""
        out = []
        for i, c in enumerate(self.coeffs):
            j = 2 * i + 1
            if j >= k:
                out.append((j - k, c * Fraction(math.factorial(j), math.factorial(j - k))))
        return out


@lru_cache(maxsize=None)
def q_taylor(order: int = MAX_ORDER) -> KernelSeries:
    """c_{2k-1} = (1 - 2^{1-2k}) B_{2k} / (2k)!, exact."""
    if order < 1 or order > MAX_ORDER or order % 2 == 0:
        raise ValueError(f"order must be odd and in [1, {MAX_ORDER}]")
    coeffs = []
    for k in range(1, (order + 1) // 2 + 1):
        coeffs.append((1 - Fraction(1, 2 ** (2 * k - 1))) * bernoulli(2 * k) / math.factorial(2 * k))
    return KernelSeries(tuple(coeffs), order)


@lru_cache(maxsize=None)
def _series_table(k: int, precision: str):
    # Horner-ready coefficients of the k-th derivative in powers of t^2,
    # plus the leading power (0 or 1)
    terms = q_taylor().derivative_terms(k)
    lead = terms[0][0]
    coeffs = [c for _, c in terms]
    if precision == "native":
        return lead, tuple(float(c) for c in coeffs)
    return lead, tuple(ExtReal.from_fraction(c) for c in coeffs)


def _series(t, k: int, precision: str):
    lead, coeffs = _series_table(k, precision)
    t2 = t * t
    acc = 0.0 if precision == "native" else ExtReal()
    for c in reversed(coeffs):
        acc = acc * t2 + c
    return acc * t if lead == 1 else acc


def _hyper_parts(t, precision: str):
    """(1/sinh(t/2), coth(t/2)) computed from e = exp(-t/2)."""
    if precision == "native":
        u = 0.5 * t
        e = math.exp(-u)
        one_minus = -math.expm1(-2.0 * u)
        return 2.0 * e / one_minus, (2.0 - one_minus) / one_minus
    e = ext_exp(-(t * 0.5))
    e2 = e * e
    one_minus = 1.0 - e2
    return (e * 2.0) / one_minus, (1.0 + e2) / one_minus


def _closed(t, k: int, precision: str):
    inv_s, coth = _hyper_parts(t, precision)
    it = 1.0 / t
    if k == 0:
        return it - inv_s * 0.5
    if k == 1:
        return -(it * it) + coth * inv_s * 0.25
    c2 = coth * coth
    if k == 2:
        return it**3 * 2.0 + inv_s * 0.125 - c2 * inv_s * 0.25
    if k == 3:
        return -(it**4 * 6.0) - coth * inv_s * 0.3125 + c2 * coth * inv_s * 0.375
    return it**5 * 24.0 - inv_s * 0.15625 + c2 * inv_s * 0.875 - c2 * c2 * inv_s * 0.75


def _prepare(t, precision: str):
    check_precision(precision)
    if isinstance(t, ExtReal):
        tv = t if precision == "extended" else float(t)
    else:
        tv = float(t) if precision == "native" else ExtReal.coerce(t)
    if float(tv) <= 0.0:
        raise DomainError(f"kernel requires t > 0, got {float(tv)!r}")
    return tv


def q_deriv(t, k: int, precision: str = "native"):
    """k-th derivative of Q at t > 0, for 0 <= k <= 4."""
    if not isinstance(k, int) or not 0 <= k <= 4:
        raise DomainError(f"derivative order must be 0..4, got {k!r}")
    tv = _prepare(t, precision)
    if float(tv) < T_SWITCH[precision]:
        return _series(tv, k, precision)
    return _closed(tv, k, precision)


def q(t, precision: str = "native"):
    """Q(t) = 1/t - 1/(2 sinh(t/2))."""
    return q_deriv(t, 0, precision)


def ratio(t, precision: str = "native"):
    """Q'(t)/Q(t).

    Above the switch point this uses
    (t^2 cosh(t/2) - 4 sinh^2(t/2)) / (4t sinh^2(t/2) - 2t^2 sinh(t/2))
    after dividing through by sinh^2(t/2).
    """
    tv = _prepare(t, precision)
    if float(tv) < T_SWITCH[precision]:
        return _series(tv, 1, precision) / _series(tv, 0, precision)
    inv_s, coth = _hyper_parts(tv, precision)
    t2 = tv * tv
    return (t2 * coth * inv_s - 4.0) / (tv * 4.0 - t2 * 2.0 * inv_s)


def ratio_slope(t, precision: str = "native"):
    """d/dt (Q'/Q) = (Q'' Q - Q'^2) / Q^2."""
    q0 = q_deriv(t, 0, precision)
    q1 = q_deriv(t, 1, precision)
    q2 = q_deriv(t, 2, precision)
    return (q2 * q0 - q1 * q1) / (q0 * q0)


@dataclass(frozen=True)
class RatioMinimum:
    t0: float
    c0: float
    bracket: tuple[float, float]
    residual: float


_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


@lru_cache(maxsize=8)
def minimize_ratio(tol: float = 1e-13) -> RatioMinimum:
    """Minimize Q'/Q on [1, 100]: golden section, then bisection on the slope sign."""
    if tol < 1e-13:
        raise ValueError("tol must be >= 1e-13")
    lo, hi = 1.0, 100.0
    if not (ratio_slope(lo) < 0.0 < ratio_slope(hi)):
        raise BracketError("Q'/Q is not decreasing at t = 1 and increasing at t = 100")
    a, b = lo, hi
    x1 = b - _GOLDEN * (b - a)
    x2 = a + _GOLDEN * (b - a)
    f1, f2 = ratio(x1), ratio(x2)
    while b - a > 1e-4:
        if f1 < f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - _GOLDEN * (b - a)
            f1 = ratio(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + _GOLDEN * (b - a)
            f2 = ratio(x2)
    # the slope changes sign inside [a, b]; bisect on it
    if not (ratio_slope(a) < 0.0 < ratio_slope(b)):
        raise BracketError("golden-section bracket lost the slope sign change")
    while b - a > tol * max(1.0, a):
        mid = 0.5 * (a + b)
        if mid <= a or mid >= b:
            break
        if ratio_slope(mid) < 0.0:
            a = mid
        else:
            b = mid
    t0 = 0.5 * (a + b)
    return RatioMinimum(t0=t0, c0=ratio(t0), bracket=(a, b), residual=abs(ratio_slope(t0)))


def a0(c0: float | None = None) -> float:
    """sqrt(c0^2 + 7/40) - c0, the sufficient threshold for h_a."""
    if c0 is None:
        c0 = minimize_ratio().c0
    return math.sqrt(c0 * c0 + 7.0 / 40.0) - c0


def a0_extended(c0: float | None = None) -> ExtReal:
    if c0 is None:
        c0 = minimize_ratio().c0
    c = ExtReal(c0)
    return ext_sqrt(c * c + ExtReal.from_fraction(Fraction(7, 40))) - c


def laplace_quad(x: float, k: int = 0) -> float:
    """Numerical value of the integral of exp(-x t) Q^(k)(t) over (0, inf)."""
    from scipy.integrate import quad

    if x <= 0:
        raise DomainError("laplace_quad needs x > 0")

    def integrand(t: float) -> float:
        # Gauss-Kronrod nodes are interior, so t > 0 here
        return math.exp(-x * t) * q_deriv(t, k)

    cut = 60.0 / x
    head, _ = quad(integrand, 0.0, cut, epsabs=1e-15, epsrel=1e-13, limit=400)
    tail, _ = quad(integrand, cut, math.inf, epsabs=1e-15, epsrel=1e-13, limit=200)
    return head + tail
