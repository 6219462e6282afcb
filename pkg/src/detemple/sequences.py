"""R_n, D_n, the accelerated sequences w_n, y_n, z_n, the bound families, limits.

Every quantity of the form R_n - gamma is evaluated as R(n + 1/2), which is
the same number (psi(n + 1) = H_n - gamma) but avoids subtracting two
numbers near gamma. The margins of the families built on the theorem
functions (d1..d4) are rearranged so that they are proportional to F, f, G
or V at n + 1/2, which the theorem-function evaluator returns with full
relative precision even when they are far below 1e-30.
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable

from .errors import DomainError
from .extprec import ExtReal, ext_ln
from .kernel import check_precision
from .special import R, euler_gamma, harmonic

__all__ = [
    "FAMILY_NAMES",
    "BoundFamily",
    "BracketReport",
    "LimitEstimate",
    "PrecisionFloorWarning",
    "LIMIT_TARGETS",
    "detemple_R",
    "classical_D",
    "accel",
    "correction",
    "bound_family",
    "check_brackets",
    "estimate_limit",
    "richardson_even",
]

FAMILY_NAMES = ("de1", "de2", "villarino", "chen", "mortici", "d1", "d2", "d3", "d4")

A1 = Fraction(7, 40)
A2 = Fraction(-31, 336)
A3 = Fraction(11165, 8284)
Y_NUM = Fraction(97153, 82840)
Y_QUAD = Fraction(199849, 1391712)
Z_NUM = Fraction(2071, 5880)
Z_DEN = Fraction(155, 294)


def _ext(q: Fraction) -> ExtReal:
    return ExtReal.from_fraction(q)


def _half(n: int) -> Fraction:
    return Fraction(2 * n + 1, 2)


def detemple_R(n: int, precision: str = "extended"):
    """R_n = H_n - ln(n + 1/2)."""
    check_precision(precision)
    if not isinstance(n, int) or n < 1:
        raise DomainError("n must be a positive integer")
    if precision == "native":
        return harmonic(n) - math.log(n + 0.5)
    return harmonic(n, "extended") - ext_ln(ExtReal(n + 0.5))


def classical_D(n: int, precision: str = "extended"):
    """D_n = H_n - ln n."""
    check_precision(precision)
    if not isinstance(n, int) or n < 1:
        raise DomainError("n must be a positive integer")
    if precision == "native":
        return harmonic(n) - math.log(n)
    return harmonic(n, "extended") - ext_ln(ExtReal(float(n)))


def correction(kind: str, m: Fraction) -> Fraction:
    """Rational correction subtracted from R_n to form w_n, y_n or z_n (m = n + 1/2)."""
    m2 = m * m
    if kind == "w":
        return (m2 - A1) / (24 * (m2 * m2 + A2))
    if kind == "y":
        return (m2 + Y_NUM) / (24 * (m2 * m2 + A3 * m2 + Y_QUAD))
    if kind == "z":
        return (m2 + Z_NUM) / (24 * m2 * (m2 + Z_DEN))
    raise ValueError(f"unknown sequence kind {kind!r}; expected w, y or z")


def accel(kind: str, n: int) -> ExtReal:
    """w_n, y_n or z_n in extended precision, straight from the definition."""
    if not isinstance(n, int) or n < 1:
        raise DomainError("n must be a positive integer")
    corr = correction(kind, _half(n))
    return detemple_R(n, "extended") - _ext(corr)


@lru_cache(maxsize=1)
def _gamma() -> ExtReal:
    return euler_gamma().value


@lru_cache(maxsize=200_000)
def r_half(n: int) -> ExtReal:
    """R_n - gamma, evaluated as R(n + 1/2)."""
    return R(ExtReal(n + 0.5), "extended")


# ---------------------------------------------------------------------------
# bound families


@dataclass(frozen=True)
class BoundFamily:
    """A named pair n -> (lower, upper) claimed to bracket R_n - gamma.

    ``margins(n)`` returns (R_n - gamma - lower, upper - R_n - gamma) computed
    without cancellation against R_n - gamma. ``attained`` lists the sides
    whose constant is chosen so that equality holds at n = 1.
    """

    name: str
    lower: Callable[[int], ExtReal]
    upper: Callable[[int], ExtReal]
    margins: Callable[[int], tuple[ExtReal, ExtReal]]
    valid_from: int = 1
    attained: tuple[str, ...] = ()
    formula: str = ""


def _frac_family(name, lo: Callable[[int], Fraction], hi: Callable[[int], Fraction], formula, attained=()):
    def lower(n):
        return _ext(lo(n))

    def upper(n):
        return _ext(hi(n))

    def margins(n):
        v = r_half(n)
        return v - lower(n), upper(n) - v

    return BoundFamily(name, lower, upper, margins, 1, attained, formula)


def _build(name: str) -> BoundFamily:
    from .cm_verify import evaluate, lambda_constants, villarino_constant, chen_lambda

    if name == "de1":
        return _frac_family(
            name,
            lambda n: Fraction(1, 24 * (n + 1) ** 2),
            lambda n: Fraction(1, 24 * n * n),
            "1/(24(n+1)^2) < R_n - g < 1/(24n^2)",
        )
    if name == "de2":
        return _frac_family(
            name,
            lambda n: Fraction(1, 24 * n * n) + Fraction(7, 960 * (n + 1) ** 4),
            lambda n: Fraction(1, 24 * n * n) + Fraction(7, 960 * n**4),
            "7/(960(n+1)^4) < R_n - g - 1/(24n^2) < 7/(960n^4)",
        )
    if name == "mortici":
        return _frac_family(
            name,
            lambda n: 1 / (24 * (_half(n) + Fraction(7, 80 * n)) ** 2),
            lambda n: 1 / (24 * _half(n) ** 2),
            "(1/24)(n+1/2+7/(80n))^-2 < R_n - g < (1/24)(n+1/2)^-2",
        )
    if name == "villarino":
        kappa = villarino_constant()

        def lower(n):
            return _ext(1 / (24 * _half(n) ** 2 + Fraction(21, 5)))

        def upper(n):
            return 1.0 / (_ext(24 * _half(n) ** 2) + kappa)

        def margins(n):
            v = r_half(n)
            return v - lower(n), upper(n) - v

        return BoundFamily(name, lower, upper, margins, 1, ("upper",),
                           "1/(24(n+1/2)^2 + 21/5) < R_n - g < 1/(24(n+1/2)^2 + k)")
    if name == "chen":
        lam = chen_lambda()

        def lower(n):
            s = lam + float(n)
            return 1.0 / (s * s * 24.0)

        def upper(n):
            return _ext(1 / (24 * _half(n) ** 2))

        def margins(n):
            v = r_half(n)
            return v - lower(n), upper(n) - v

        return BoundFamily(name, lower, upper, margins, 1, ("lower",),
                           "(1/24)(n+l)^-2 < R_n - g < (1/24)(n+1/2)^-2")

    lam = lambda_constants()
    if name == "d1":
        def d(n):
            return 24 * (_half(n) ** 2 + A1)

        def lower(n):
            return _ext(1 / d(n))

        def upper(n):
            return (1.0 + lam.lambda1) / _ext(d(n))

        def margins(n):
            F = evaluate("F", A1, _ext(_half(n)))
            den = _ext(d(n))
            return F / den, (lam.lambda1 - F) / den

        return BoundFamily(name, lower, upper, margins, 1, ("upper",),
                           "1/(24((n+1/2)^2+7/40)) < R_n - g < (1+l1)/(24((n+1/2)^2+7/40))")
    if name == "d2":
        def d(n):
            return 24 * (_half(n) ** 4 + A2)

        def lower(n):
            return (_ext(_half(n) ** 2 - A1) - lam.lambda2) / _ext(d(n))

        def upper(n):
            return _ext((_half(n) ** 2 - A1) / d(n))

        def margins(n):
            f = evaluate("f", A2, _ext(_half(n)))
            den = _ext(d(n))
            return (lam.lambda2 - f) / den, f / den

        return BoundFamily(name, lower, upper, margins, 1, ("lower",),
                           "(1/24)((n+1/2)^2-7/40-l2)/((n+1/2)^4-31/336) < R_n - g < (1/24)((n+1/2)^2-7/40)/((n+1/2)^4-31/336)")
    if name == "d3":
        def d(n):
            m2 = _half(n) ** 2
            return 24 * (m2 * m2 + A3 * m2 + Y_QUAD)

        def lower(n):
            return _ext((_half(n) ** 2 + Y_NUM) / d(n))

        def upper(n):
            return (_ext(_half(n) ** 2 + Y_NUM) + lam.lambda3) / _ext(d(n))

        def margins(n):
            G = evaluate("G", A3, _ext(_half(n)))
            den = _ext(d(n))
            return G / den, (lam.lambda3 - G) / den

        return BoundFamily(name, lower, upper, margins, 1, ("upper",),
                           "(1/24)((n+1/2)^2+97153/82840)/P < R_n - g < (1/24)((n+1/2)^2+97153/82840+l3)/P")
    if name == "d4":
        def lower(n):
            return _ext(correction("z", _half(n))) + lam.lambda4

        def upper(n):
            return _ext(correction("z", _half(n)))

        def margins(n):
            V = evaluate("V", None, _ext(_half(n)))
            return V - lam.lambda4, -V

        return BoundFamily(name, lower, upper, margins, 1, ("lower",),
                           "corr(n+1/2) + l4 < R_n - g < corr(n+1/2)")
    raise ValueError(f"unknown bound family {name!r}; expected one of {', '.join(FAMILY_NAMES)}")


@lru_cache(maxsize=None)
def bound_family(name: str) -> BoundFamily:
    """The bound family ``name`` with its constants in closed form."""
    return _build(name)


@dataclass
class BracketReport:
    family: str
    n_max: int
    min_lower_margin: float = math.inf
    min_upper_margin: float = math.inf
    argmin_lower: int = 0
    argmin_upper: int = 0
    # (n, side, margin) for strict failures
    violations: list = field(default_factory=list)
    # (n, side, margin) where equality holds up to rounding at the best-constant point
    attained: list = field(default_factory=list)
    n_checked: int = 0

    @property
    def passed(self) -> bool:
        return not self.violations

    @property
    def strict(self) -> bool:
        return not self.violations and not self.attained

    def merge(self, other: "BracketReport") -> "BracketReport":
        out = BracketReport(self.family, max(self.n_max, other.n_max))
        for r in (self, other):
            if r.min_lower_margin < out.min_lower_margin:
                out.min_lower_margin, out.argmin_lower = r.min_lower_margin, r.argmin_lower
            if r.min_upper_margin < out.min_upper_margin:
                out.min_upper_margin, out.argmin_upper = r.min_upper_margin, r.argmin_upper
        out.violations = sorted(self.violations + other.violations)
        out.attained = sorted(self.attained + other.attained)
        out.n_checked = self.n_checked + other.n_checked
        return out


# equality at the attained point shows up as a margin at rounding level
ATTAINED_REL_TOL = 1e-25


def _check_range(name: str, n_lo: int, n_hi: int) -> BracketReport:
    fam = bound_family(name)
    rep = BracketReport(name, n_hi)
    for n in range(n_lo, n_hi + 1):
        lo_m, hi_m = fam.margins(n)
        scale = float(r_half(n))
        for side, mval in (("lower", lo_m), ("upper", hi_m)):
            mf = float(mval)
            if side == "lower" and mf < rep.min_lower_margin:
                rep.min_lower_margin, rep.argmin_lower = mf, n
            if side == "upper" and mf < rep.min_upper_margin:
                rep.min_upper_margin, rep.argmin_upper = mf, n
            if n == 1 and side in fam.attained and abs(mf) <= ATTAINED_REL_TOL * scale:
                rep.attained.append((n, side, mf))
            elif mf <= 0.0:
                rep.violations.append((n, side, mf))
        rep.n_checked += 1
    return rep


def check_brackets(name: str, n_max: int, workers: int = 1, chunk: int = 2500) -> BracketReport:
    """Check lower(n) < R_n - gamma < upper(n) for 1 <= n <= n_max.

    With ``workers > 1`` disjoint n-ranges run in separate processes; the
    merged report does not depend on the split.
    """
    if name not in FAMILY_NAMES:
        raise ValueError(f"unknown bound family {name!r}")
    if not 1 <= n_max <= 10**6:
        raise DomainError("n_max must be in [1, 10^6]")
    ranges = [(lo, min(lo + chunk - 1, n_max)) for lo in range(1, n_max + 1, chunk)]
    if workers <= 1 or len(ranges) == 1:
        parts = [_check_range(name, lo, hi) for lo, hi in ranges]
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_check_range, [name] * len(ranges), *zip(*ranges)))
    report = parts[0]
    for p in parts[1:]:
        report = report.merge(p)
    report.n_max = n_max
    return report


# ---------------------------------------------------------------------------
# convergence limits


LIMIT_TARGETS = {
    ("w", 8): Fraction(-319, 92160),
    ("y", 10): Fraction(627404761, 246900842496),
    ("z", 8): Fraction(-199849, 94832640),
}


class PrecisionFloorWarning(UserWarning):
    """x_n - gamma fell below the resolution of extended precision."""


@dataclass(frozen=True)
class LimitEstimate:
    p: int
    estimate: ExtReal
    target: Fraction
    rel_error: float
    n_used: list


def richardson_even(ns, values, levels: int = 2):
    """Eliminate h and h^2 terms, h = (n + 1/2)^-2, from the last ``levels + 1`` nodes."""
    ns = list(ns)[-(levels + 1):]
    vals = [v.to_fraction() if isinstance(v, ExtReal) else Fraction(v) for v in list(values)[-(levels + 1):]]
    hs = [Fraction(4, (2 * n + 1) ** 2) for n in ns]
    # Neville's scheme at h = 0
    table = vals[:]
    for lev in range(1, len(ns)):
        table = [
            (hs[i + lev] * table[i] - hs[i] * table[i + 1]) / (hs[i + lev] - hs[i])
            for i in range(len(table) - 1)
        ]
    return table[0]


def estimate_limit(kind: str, p: int, n_list) -> LimitEstimate:
    """Extrapolated lim n^p (x_n - gamma) for x in {w, y, z}.

    The error x_n - gamma is an even series in 1/(n + 1/2); the scaled
    sequence (n + 1/2)^p (x_n - gamma) has the same limit as n^p (x_n - gamma)
    and an exact even ladder, so it is the one extrapolated.
    """
    if p not in (8, 10):
        raise DomainError("p must be 8 or 10")
    ns = list(n_list)
    if not ns or ns != sorted(ns) or len(set(ns)) != len(ns):
        raise DomainError("n_list must be strictly ascending")
    if ns[-1] > 300:
        raise DomainError("n_list entries must be <= 300 (extended precision floor)")
    scaled = []
    for n in ns:
        # x_n - gamma = R(n + 1/2) - correction, with no cancellation against gamma
        err = r_half(n) - _ext(correction(kind, _half(n)))
        if abs(float(err)) < 1e-26:
            warnings.warn(f"{kind}_{n} - gamma = {float(err):.3e} is below 1e-26", PrecisionFloorWarning)
        scaled.append(err * _ext(_half(n) ** p))
    est = _ext(richardson_even(ns, scaled, levels=min(2, len(ns) - 1)))
    target = LIMIT_TARGETS.get((kind, p))
    if target is None:
        raise DomainError(f"no reference limit for ({kind}, {p})")
    rel = abs(float(est.to_fraction() - target) / float(target))
    return LimitEstimate(p, est, target, rel, ns)
