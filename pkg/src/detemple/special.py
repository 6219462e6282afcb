"""Digamma, trigamma, harmonic numbers, Euler's constant and R(x) = psi(x + 1/2) - ln x.

Every function takes ``precision="native"`` (floats) or ``"extended"``
(:class:`~detemple.extprec.ExtReal`). Digamma and trigamma shift the argument
upward with the recurrences, then apply the asymptotic series. R switches to
its own asymptotic series for large x, where psi(x + 1/2) and ln x cancel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .algebra import bernoulli
from .errors import ConvergenceError, DomainError
from .extprec import ExtReal, ext_from, ext_ln
from .kernel import check_precision

__all__ = [
    "GammaConstant",
    "GAMMA_REFERENCE_DIGITS",
    "digamma",
    "trigamma",
    "harmonic",
    "harmonic_exact",
    "euler_gamma",
    "R",
    "r_asymptotic_coefficients",
    "R_SWITCH",
]

GAMMA_REFERENCE_DIGITS = "0.5772156649015328606065120900824024310422"

# (shift threshold, number of Bernoulli terms B_2..B_2K)
_PSI_PLAN = {"native": (12.0, 10), "extended": (24.0, 18)}
# R(x) uses its asymptotic series from here on, in both precisions
R_SWITCH = 16.0
HARMONIC_MAX = 10**7
_EXACT_HARMONIC_MAX = 2000


def _coerce(x, precision: str):
    check_precision(precision)
    if precision == "native":
        v = float(x)
    else:
        v = x if isinstance(x, ExtReal) else ExtReal.coerce(x)
    if float(v) <= 0.0:
        raise DomainError(f"argument must be positive, got {float(v)!r}")
    return v


@lru_cache(maxsize=None)
def _psi_coeffs(precision: str):
    _, terms = _PSI_PLAN[precision]
    cs = [bernoulli(2 * k) / (2 * k) for k in range(1, terms + 1)]
    if precision == "native":
        return tuple(float(c) for c in cs)
    return tuple(ExtReal.from_fraction(c) for c in cs)


def _reciprocal_sum(x, count: int, precision: str):
    """sum_{j < count} 1/(x + j), and the shifted argument x + count."""
    if precision == "native":
        s = 0.0
        for j in range(count):
            s += 1.0 / (x + j)
        return s, x + count
    # accumulate as one fraction num/den: a single extended division at the end
    num, den = ExtReal(), ExtReal(1.0)
    y = x
    for _ in range(count):
        num = num * y + den
        den = den * y
        y = y + 1.0
    return (num / den if count else num), y


def _shift_count(x, precision: str) -> int:
    threshold, _ = _PSI_PLAN[precision]
    xf = float(x)
    return 0 if xf >= threshold else int(math.ceil(threshold - xf))


def digamma(x, precision: str = "native"):
    """psi(x) for x > 0."""
    v = _coerce(x, precision)
    shift, y = _reciprocal_sum(v, _shift_count(v, precision), precision)
    z = 1.0 / (y * y)
    acc = 0.0 if precision == "native" else ExtReal()
    for c in reversed(_psi_coeffs(precision)):
        acc = (acc + c) * z
    log_y = math.log(y) if precision == "native" else ext_ln(y)
    return log_y - 0.5 / y - acc - shift


def trigamma(x, precision: str = "native"):
    """psi'(x) for x > 0."""
    v = _coerce(x, precision)
    threshold, terms = _PSI_PLAN[precision]
    native = precision == "native"
    shift = 0.0 if native else ExtReal()
    y = v
    while float(y) < threshold:
        shift = shift + 1.0 / (y * y)
        y = y + 1.0
    inv = 1.0 / y
    z = inv * inv
    acc = 0.0 if native else ExtReal()
    for k in range(terms, 0, -1):
        b = bernoulli(2 * k)
        acc = (acc + (float(b) if native else ExtReal.from_fraction(b))) * z
    # 1/y + 1/(2y^2) + sum B_2k / y^(2k+1)
    return inv + z * 0.5 + acc * inv + shift


@lru_cache(maxsize=None)
def _harmonic_table() -> tuple[Fraction, ...]:
    out = [Fraction(0)]
    acc = Fraction(0)
    for k in range(1, _EXACT_HARMONIC_MAX + 1):
        acc += Fraction(1, k)
        out.append(acc)
    return tuple(out)


def harmonic_exact(n: int) -> Fraction:
    """H_n as an exact rational, 0 <= n <= 2000."""
    if not 0 <= n <= _EXACT_HARMONIC_MAX:
        raise DomainError(f"harmonic_exact supports 0 <= n <= {_EXACT_HARMONIC_MAX}")
    return _harmonic_table()[n]


def harmonic(n: int, precision: str = "native"):
    """H_n = 1 + 1/2 + ... + 1/n for 1 <= n <= 10^7."""
    check_precision(precision)
    if not isinstance(n, int) or not 1 <= n <= HARMONIC_MAX:
        raise DomainError(f"harmonic needs an integer 1 <= n <= {HARMONIC_MAX}")
    if precision == "native":
        if n <= _EXACT_HARMONIC_MAX:
            return float(harmonic_exact(n))
        return math.fsum(1.0 / k for k in range(1, n + 1))
    if n <= _EXACT_HARMONIC_MAX:
        return ExtReal.from_fraction(harmonic_exact(n))
    # H_n = H_m + psi(n + 1) - psi(m + 1); no Euler constant needed
    m = _EXACT_HARMONIC_MAX
    tail = digamma(ExtReal(float(n + 1)), "extended") - digamma(ExtReal(float(m + 1)), "extended")
    return ExtReal.from_fraction(harmonic_exact(m)) + tail


@dataclass(frozen=True)
class GammaConstant:
    """Euler's constant with the route it came from."""

    value: ExtReal
    digits: str
    provenance: str  # "computed" or "reference"


# z_n is gamma + c4 h^4 + c5 h^5 + ... with h = (n + 1/2)^-2
_GAMMA_NODES = (40, 80, 160, 320, 640)
_GAMMA_CHECK_NODES = (50, 100, 200, 400, 800)


def _solve_exact(rows: list[list[Fraction]], rhs: list[Fraction]) -> list[Fraction]:
    n = len(rhs)
    a = [row[:] + [b] for row, b in zip(rows, rhs)]
    for col in range(n):
        piv = next(r for r in range(col, n) if a[r][col] != 0)
        a[col], a[piv] = a[piv], a[col]
        for r in range(n):
            if r != col and a[r][col] != 0:
                f = a[r][col] / a[col][col]
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
    return [a[i][n] / a[i][i] for i in range(n)]


def extrapolate_even(ns, values, powers) -> Fraction:
    """Constant term of values ~ c + sum_p c_p h^p, h = (n + 1/2)^-2, solved exactly."""
    rows, rhs = [], []
    for n, v in zip(ns, values):
        h = Fraction(4, (2 * n + 1) ** 2)
        rows.append([Fraction(1)] + [h**p for p in powers])
        rhs.append(v.to_fraction() if isinstance(v, ExtReal) else Fraction(v))
    return _solve_exact(rows, rhs)[0]


def _gamma_from_z(nodes) -> Fraction:
    from .sequences import accel

    values = [accel("z", n) for n in nodes]
    return extrapolate_even(nodes, values, (4, 5, 6, 7))


@lru_cache(maxsize=2)
def euler_gamma(source: str = "computed") -> GammaConstant:
    """Euler's constant.

    ``source="computed"`` extrapolates z_n exactly in rationals from two node
    sets, requires them to agree, and checks the result against the stored
    40-place reference to 30 digits. ``source="reference"`` returns the stored
    digits directly.
    """
    ref = ext_from(GAMMA_REFERENCE_DIGITS)
    if source == "reference":
        return GammaConstant(ref, GAMMA_REFERENCE_DIGITS, "reference")
    if source != "computed":
        raise ValueError("source must be 'computed' or 'reference'")
    g1 = _gamma_from_z(_GAMMA_NODES)
    g2 = _gamma_from_z(_GAMMA_CHECK_NODES)
    if abs(g1 - g2) > Fraction(1, 10**29):
        raise ConvergenceError(f"extrapolants disagree by {float(abs(g1 - g2)):.3e}")
    value = ExtReal.from_fraction(g1)
    if abs(g1 - Fraction(GAMMA_REFERENCE_DIGITS)) > Fraction(5, 10**31):
        raise ConvergenceError("computed Euler constant disagrees with the reference beyond 30 digits")
    return GammaConstant(value, value.to_string(35), "computed")


@lru_cache(maxsize=None)
def r_asymptotic_coefficients(count: int = 30) -> tuple[Fraction, ...]:
    """r_k with R(x) ~ sum_{k>=1} r_k x^(-2k); r_k = (2k-1)! c_(2k-1) = (1 - 2^(1-2k)) B_2k / (2k)."""
    if not 1 <= count <= 100:
        raise ValueError("count must be in 1..100")
    return tuple((1 - Fraction(1, 2 ** (2 * k - 1))) * bernoulli(2 * k) / (2 * k) for k in range(1, count + 1))


@lru_cache(maxsize=None)
def _r_coeff_values(precision: str):
    cs = r_asymptotic_coefficients()
    if precision == "native":
        return tuple(float(c) for c in cs)
    return tuple(ExtReal.from_fraction(c) for c in cs)


def asymptotic_sum(coeffs, z, precision: str, start_power: int = 1, rel: float | None = None):
    """sum_k coeffs[k] z^(k + start_power) for an asymptotic series in z.

    The number of terms is chosen in floats first (terms below ``rel`` times
    the largest term seen are dropped), then the sum runs by Horner's rule
    in the target precision.
    """
    if rel is None:
        rel = 1e-18 if precision == "native" else 1e-34
    zf = float(z)
    biggest = 0.0
    last = None
    zp = zf**start_power
    for k, c in enumerate(coeffs):
        cf = float(c)
        if cf != 0.0:
            term = abs(cf) * zp
            if biggest > 0.0 and term < rel * biggest:
                break
            biggest = max(biggest, term)
            last = k
        zp *= zf
    else:
        if biggest > 0.0:
            raise ConvergenceError("asymptotic series did not reach the requested accuracy")
    if last is None:
        return 0.0 if precision == "native" else ExtReal()
    acc = 0.0 if precision == "native" else ExtReal()
    for c in reversed(coeffs[: last + 1]):
        acc = acc * z + c
    return acc * (z**start_power)


def R(x, precision: str = "native"):
    """R(x) = psi(x + 1/2) - ln x for x > 0."""
    v = _coerce(x, precision)
    if float(v) >= R_SWITCH:
        z = 1.0 / (v * v)
        return asymptotic_sum(_r_coeff_values(precision), z, precision)
    if precision == "native":
        return digamma(v + 0.5) - math.log(v)
    return digamma(v + 0.5, "extended") - ext_ln(v)
