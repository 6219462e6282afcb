"""Theorem functions built on R(x) and desk-scale checks of their monotonicity claims.

Each theorem function is a polynomial in its parameter a whose coefficients
("components") are linear in R:

    h_a = x^2 R + a (2x R) + a^2 R
    F_a = (24 x^2 R - 1) + a (24 R)
    f_a = (-24 x^4 R + x^2 - 7/40) + a (-24 R)
    G_a = (24 x^4 R - (31/14) R - x^2 + 7/40) + a (24 x^2 R + (21/5) R - 1)
    V   = R - (1/24)(x^2 + 2071/5880)/(x^2 (x^2 + 155/294))

For x >= 16 each component is summed from its exact Laurent series in 1/x,
in which the large terms cancel symbolically; below that R is evaluated
directly. Finite differences are linear, so sign scans difference the
components once and then combine them for any a.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .algebra import (
    P1_DEN,
    P1_NUM,
    P2_DEN,
    P2_NUM,
    UniPoly,
    X,
    cosh_series,
    poly_of_series,
    series_mul,
    sinh_series,
)
from .errors import DomainError, NonMonotoneError, StepSizeError
from .extprec import ExtReal, ext_cosh, ext_ln, ext_sinh, ext_sqrt
from .kernel import minimize_ratio, q_deriv, q_taylor
from .special import R, R_SWITCH, asymptotic_sum, euler_gamma, r_asymptotic_coefficients

__all__ = [
    "FAMILIES",
    "TheoremFunction",
    "SignReport",
    "LambdaConstants",
    "IntegrandReport",
    "HyperbolicReport",
    "MonotoneReport",
    "theorem_function",
    "evaluate",
    "lambda_constants",
    "villarino_constant",
    "chen_lambda",
    "sign_pattern",
    "integrand_check",
    "hyperbolic_check",
    "threshold_bisect",
    "v_monotone_check",
    "standard_grid",
    "log_grid",
    "TOL_FD",
    "A1",
    "A2",
    "A3",
]

FAMILIES = ("h", "F", "f", "G", "V", "ratioFG")
A1 = Fraction(7, 40)
A2 = Fraction(-31, 336)
A3 = Fraction(11165, 8284)
TOL_FD = 1e-9

# component = ({power j: coefficient of x^j R}, UniPoly added, extra)
# extra is "corr" for the rational correction inside V
_COMPONENTS: dict[str, tuple] = {
    "h": (
        ({2: Fraction(1)}, UniPoly(), None),
        ({1: Fraction(2)}, UniPoly(), None),
        ({0: Fraction(1)}, UniPoly(), None),
    ),
    "F": (
        ({2: Fraction(24)}, UniPoly([-1]), None),
        ({0: Fraction(24)}, UniPoly(), None),
    ),
    "f": (
        ({4: Fraction(-24)}, UniPoly([-A1, 0, 1]), None),
        ({0: Fraction(-24)}, UniPoly(), None),
    ),
    "G": (
        ({4: Fraction(24), 0: Fraction(-31, 14)}, UniPoly([A1, 0, -1]), None),
        ({2: Fraction(24), 0: Fraction(21, 5)}, UniPoly([-1]), None),
    ),
    "V": (({0: Fraction(1)}, UniPoly(), "corr"),),
}

# R coefficients carried by the component series; enough for 1e-34 at x = 16
_LAURENT_TERMS = 56
_LAURENT_REL = 1e-31
_V_ALPHA = Fraction(2071, 5880)
_V_BETA = Fraction(155, 294)


def _corr_exact(x):
    x2 = x * x
    return (x2 + _V_ALPHA) / (x2 * (x2 + _V_BETA) * 24)


@lru_cache(maxsize=None)
def _component_laurent(family: str, idx: int) -> tuple[int, tuple[Fraction, ...]]:
    """(lowest power, coefficients) of the component as a series in y = 1/x."""
    rpoly, add, extra = _COMPONENTS[family][idx]
    rk = r_asymptotic_coefficients(_LAURENT_TERMS)
    terms: dict[int, Fraction] = {}

    def put(power, c):
        terms[power] = terms.get(power, Fraction(0)) + c

    for j, c in rpoly.items():
        for k, r in enumerate(rk, start=1):
            put(2 * k - j, c * r)
    for j, c in enumerate(add.coeffs):
        put(-j, c)
    if extra == "corr":
        # (1/24) y^2 (1 + alpha w)/(1 + beta w), w = y^2
        put(2, Fraction(-1, 24))
        coef = _V_ALPHA - _V_BETA
        for i in range(1, len(rk)):
            put(2 + 2 * i, -coef / 24)
            coef *= -_V_BETA
    # the series of R is only trusted up to the last coefficient it carries
    top = 2 * len(rk) - max(rpoly)
    bad = [p for p, c in terms.items() if p <= 0 and c != 0]
    if bad and any(p < 0 for p in bad):
        raise ArithmeticError(f"component {family}[{idx}] has growing terms {bad}")
    powers = [p for p in terms if p <= top]
    lo = min((p for p in powers if terms[p] != 0), default=0)
    coeffs = tuple(terms.get(p, Fraction(0)) for p in range(lo, top + 1))
    return lo, coeffs


@lru_cache(maxsize=None)
def _component_laurent_ext(family: str, idx: int):
    lo, cs = _component_laurent(family, idx)
    return lo, tuple(ExtReal.from_fraction(c) for c in cs)


@lru_cache(maxsize=400_000)
def _r_at(hi: float, lo: float) -> ExtReal:
    return R(ExtReal._raw(hi, lo), "extended")


def _component(family: str, idx: int, x: ExtReal) -> ExtReal:
    if float(x) >= R_SWITCH:
        lo, cs = _component_laurent_ext(family, idx)
        y = 1.0 / x
        # at x = 16 the G series bottoms out near 1e-32 relative
        return asymptotic_sum(cs, y, "extended", start_power=lo, rel=_LAURENT_REL)
    rpoly, add, extra = _COMPONENTS[family][idx]
    r = _r_at(x.hi, x.lo)
    acc = ExtReal()
    for j, c in rpoly.items():
        acc = acc + (x**j) * r * ExtReal.from_fraction(c)
    if not add.is_zero():
        acc = acc + add(x)
    if extra == "corr":
        acc = acc - _corr_exact(x)
    return acc


def _as_ext(x) -> ExtReal:
    v = x if isinstance(x, ExtReal) else ExtReal.coerce(x)
    if float(v) <= 0.0:
        raise DomainError(f"theorem functions need x > 0, got {float(v)!r}")
    return v


def _combine(values: Sequence, a) -> ExtReal:
    """sum_i a^i values[i]."""
    if len(values) == 1:
        return values[0]
    av = ExtReal.coerce(a) if not isinstance(a, ExtReal) else a
    acc = ExtReal()
    for v in reversed(values):
        acc = acc * av + v
    return acc


def _check_family(family: str, a):
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}; expected one of {FAMILIES}")
    if family in ("V", "ratioFG"):
        return None
    if a is None:
        raise ValueError(f"family {family!r} needs a parameter a")
    return Fraction(a) if isinstance(a, (int, Fraction)) else a


def evaluate(family: str, a, x) -> ExtReal:
    """Value of the theorem function at x > 0 in extended precision."""
    a = _check_family(family, a)
    xv = _as_ext(x)
    if family == "ratioFG":
        return evaluate("f", A2, xv) / evaluate("F", A1, xv)
    vals = [_component(family, i, xv) for i in range(len(_COMPONENTS[family]))]
    return _combine(vals, a if a is not None else 0)


@dataclass(frozen=True)
class TheoremFunction:
    family: str
    a: object
    evaluator: Callable[[object], ExtReal]


def theorem_function(family: str, a=None) -> TheoremFunction:
    a = _check_family(family, a)
    return TheoremFunction(family, a, lambda x: evaluate(family, a, x))


# ---------------------------------------------------------------------------
# closed-form constants


@dataclass(frozen=True)
class LambdaConstants:
    lambda1: ExtReal
    lambda2: ExtReal
    lambda3: ExtReal
    lambda4: ExtReal
    provenance: dict


def _lg() -> ExtReal:
    # ln(3/2) + gamma
    return ext_ln(ExtReal(1.5)) + euler_gamma().value


@lru_cache(maxsize=1)
def lambda_constants() -> LambdaConstants:
    """lambda1..lambda4: F_{7/40}, f_{-31/336}, G_{a3}, V at 3/2 in closed form."""
    s = _lg()
    q = ExtReal.from_fraction
    l1 = q(Fraction(286, 5)) - q(Fraction(291, 5)) * s
    l2 = q(Fraction(835, 7)) * s - q(Fraction(32819, 280))
    l3 = q(Fraction(112672809, 579880)) - q(Fraction(11465761, 57988)) * s
    l4 = q(Fraction(866519, 881820)) - s
    prov = {
        "lambda1": "286/5 - (291/5)(ln(3/2) + gamma)",
        "lambda2": "(835/7)(gamma + ln(3/2)) - 32819/280",
        "lambda3": "112672809/579880 - (11465761/57988)(ln(3/2) + gamma)",
        "lambda4": "866519/881820 - ln(3/2) - gamma",
    }
    return LambdaConstants(l1, l2, l3, l4, prov)


@lru_cache(maxsize=1)
def villarino_constant() -> ExtReal:
    """1/(1 - ln 3 + ln 2 - gamma) - 54."""
    return 1.0 / (1.0 - _lg()) - 54.0


@lru_cache(maxsize=1)
def chen_lambda() -> ExtReal:
    """1/(2 sqrt(6 (1 - gamma - ln 3 + ln 2))) - 1."""
    return 1.0 / (ext_sqrt((1.0 - _lg()) * 6.0) * 2.0) - 1.0


# ---------------------------------------------------------------------------
# derivative sign patterns


@dataclass
class SignReport:
    family: str
    a: object
    orders: tuple[int, ...]
    grid: list
    # (x, order, signed margin) with margin < -tol_fd
    violations: list = field(default_factory=list)
    # (x, order, signed margin) with -tol_fd <= margin < 0
    indeterminate: list = field(default_factory=list)
    min_margin: float = math.inf
    argmin: tuple = ()

    @property
    def passed(self) -> bool:
        return not self.violations


def standard_grid(count: int = 500, step: float = 0.1) -> list[float]:
    return [round(step * k, 12) for k in range(1, count + 1)]


def log_grid(lo: float, hi: float, count: int) -> list[float]:
    r = math.log(hi / lo)
    pts = [lo * math.exp(r * i / (count - 1)) for i in range(count)]
    pts[0], pts[-1] = lo, hi
    return pts


def fd_step(x: float, k_max: int = 8) -> float:
    """Dyadic step h <= min(0.18 sqrt(x), x/32) so every stencil stays well inside (0, inf)."""
    cap = min(0.18 * math.sqrt(x), x / 32.0)
    return 2.0 ** math.floor(math.log2(cap))


@lru_cache(maxsize=64)
def _component_fd(family: str, grid: tuple, k_max: int):
    """k-th derivatives of every component at every grid point.

    Returns, per x and per order k, a list over components of
    (Richardson value, step-h value, step-h/2 value).
    """
    ncomp = len(_COMPONENTS[family])
    out = []
    for x in grid:
        h = fd_step(x, k_max)
        unit = ExtReal(h / 4.0)  # stencil offsets are multiples of h/4
        cache: dict[int, list[ExtReal]] = {}

        def vals_at(off: int) -> list[ExtReal]:
            if off not in cache:
                pt = ExtReal(x) + unit * float(off)
                cache[off] = [_component(family, i, pt) for i in range(ncomp)]
            return cache[off]

        per_k = []
        for k in range(k_max + 1):
            comps = []
            for i in range(ncomp):
                d = []
                for scale in (4, 2):  # h and h/2 in units of h/4
                    acc = ExtReal()
                    for j in range(k + 1):
                        c = math.comb(k, j) * (-1) ** (k - j)
                        acc = acc + vals_at((2 * j - k) * scale // 2)[i] * float(c)
                    d.append(acc / (unit * float(scale)) ** k if k else acc)
                comps.append(((d[1] * 4.0 - d[0]) / 3.0 if k else d[0], d[0], d[1]))
            per_k.append(comps)
        out.append(per_k)
    return out


def _combined(entry, a):
    return tuple(_combine([e[m] for e in entry], a) for m in range(3))


def sign_pattern(family: str, a, grid=None, k_max: int = 6, tol_fd: float = TOL_FD,
                 strict_steps: bool = False) -> SignReport:
    """Scan (-1)^k f^(k)(x) >= 0 for k = 0..k_max over the grid.

    Derivatives are central differences at steps h and h/2, combined by
    Richardson extrapolation. With ``strict_steps`` a refinement
    disagreement above 10% (on values above tol_fd) raises StepSizeError.
    """
    if family not in ("h", "F", "f", "G"):
        raise ValueError("sign patterns are defined for h, F, f and G")
    a = _check_family(family, a)
    if not 0 <= k_max <= 8:
        raise DomainError("k_max must be in 0..8")
    grid = tuple(standard_grid() if grid is None else grid)
    if any(x < 0.05 or x > 100 for x in grid):
        raise DomainError("grid must lie in [0.05, 100]")
    table = _component_fd(family, grid, k_max)
    rep = SignReport(family, a, tuple(range(k_max + 1)), list(grid))
    av = 0 if a is None else a
    for x, per_k in zip(grid, table):
        for k, entry in enumerate(per_k):
            rich, coarse, fine = _combined(entry, av)
            margin = float(rich) * (-1) ** k
            if strict_steps and k > 0:
                diff = abs(float(fine) - float(coarse))
                if abs(float(fine)) > tol_fd and diff > 0.1 * abs(float(fine)):
                    raise StepSizeError(f"refinements disagree at x={x}, k={k}")
            if margin < rep.min_margin:
                rep.min_margin, rep.argmin = margin, (x, k)
            if margin < -tol_fd:
                rep.violations.append((x, k, margin))
            elif margin < 0.0:
                rep.indeterminate.append((x, k, margin))
    return rep


def threshold_bisect(family: str, side: str, interval: tuple[float, float], tol: float = 1e-4,
                     grid=None, k_max: int = 6, scan_points: int = 11) -> float:
    """Empirical parameter threshold of the sign-pattern predicate.

    ``side="min_a"``: the predicate is expected to hold for a above the
    threshold; ``"max_a"``: below it. The interval is first sampled; if the
    predicate flips more than once the scan raises NonMonotoneError.
    """
    if side not in ("min_a", "max_a"):
        raise ValueError("side must be 'min_a' or 'max_a'")
    if tol < 1e-6:
        raise ValueError("tol must be >= 1e-6")
    lo, hi = interval
    if not lo < hi:
        raise ValueError("interval must be increasing")

    def ok(a: float) -> bool:
        return sign_pattern(family, a, grid, k_max).passed

    samples = [lo + (hi - lo) * i / (scan_points - 1) for i in range(scan_points)]
    flags = [ok(s) for s in samples]
    flips = sum(1 for u, v in zip(flags, flags[1:]) if u != v)
    expected_first = side == "max_a"
    if flips != 1 or flags[0] != expected_first:
        raise NonMonotoneError(
            f"predicate over {interval} is {['T' if f else 'F' for f in flags]}; "
            f"expected a single switch for side {side}"
        )
    i = next(j for j in range(len(flags) - 1) if flags[j] != flags[j + 1])
    a, b = samples[i], samples[i + 1]
    while b - a > tol:
        mid = 0.5 * (a + b)
        if ok(mid) == flags[i]:
            a = mid
        else:
            b = mid
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# kernel integrands


_INTEGRANDS = {
    # name: ({derivative order: coefficient}, expected sign)
    "q1": ({2: Fraction(1), 0: Fraction(7, 40)}, 1),
    "q2": ({4: Fraction(1), 0: Fraction(-31, 336)}, -1),
    "q3": ({4: Fraction(1), 2: Fraction(11165, 8284), 0: Fraction(199849, 1391712)}, 1),
}
_INTEGRAND_SWITCH = 2.0


@lru_cache(maxsize=None)
def _integrand_series(name: str) -> tuple[float, ...]:
    """Exact Maclaurin coefficients (as floats) of an integrand, index = power of t."""
    combo, _ = _INTEGRANDS[name]
    series = q_taylor()
    coeffs: dict[int, Fraction] = {}
    for k, w in combo.items():
        for power, c in series.derivative_terms(k):
            coeffs[power] = coeffs.get(power, Fraction(0)) + w * c
    top = max(coeffs)
    return tuple(float(coeffs.get(p, Fraction(0))) for p in range(top + 1))


def _integrand_value(name: str, t: float) -> float:
    combo, _ = _INTEGRANDS[name]
    if t < _INTEGRAND_SWITCH:
        acc = 0.0
        for c in reversed(_integrand_series(name)):
            acc = acc * t + c
        return acc
    return sum(float(w) * q_deriv(t, k) for k, w in combo.items())


@dataclass
class IntegrandReport:
    which: str
    a: object
    expected_sign: int
    n_points: int
    violations: list = field(default_factory=list)
    min_margin: float = math.inf
    argmin: float = 0.0
    # smallest margin over t >= tangency_cutoff, away from the t -> 0 contact
    min_margin_away: float = math.inf
    tangency_cutoff: float = 0.1

    @property
    def passed(self) -> bool:
        return not self.violations


def integrand_check(which: str, a=None, t_grid=None, tangency_cutoff: float = 0.1) -> IntegrandReport:
    """Sign of q1 (> 0), q2 (< 0), q3 (> 0) or delta_a (>= 0 for a >= a0) on a t-grid.

    Below t = 2 the q-combinations are summed from their exact Maclaurin
    series, so the contact of order t^3 at the origin does not drown in
    cancellation. The reported margin is the value times the expected sign.
    """
    t_grid = list(log_grid(1e-3, 300.0, 2000) if t_grid is None else t_grid)
    if any(t <= 0 or t > 300 for t in t_grid):
        raise DomainError("t_grid must lie in (0, 300]")
    if which == "delta":
        if a is None:
            raise ValueError("delta needs a parameter a")
        sign = 1
    elif which in _INTEGRANDS:
        sign = _INTEGRANDS[which][1]
    else:
        raise ValueError(f"unknown integrand {which!r}")
    rep = IntegrandReport(which, a, sign, len(t_grid), tangency_cutoff=tangency_cutoff)
    for t in t_grid:
        if which == "delta":
            q0 = q_deriv(t, 0)
            v = q_deriv(t, 2) / q0 + 2.0 * a * q_deriv(t, 1) / q0 + a * a
            bad = v < -1e-10
        else:
            v = _integrand_value(which, t)
            bad = v * sign <= 0.0
        margin = v * sign
        if margin < rep.min_margin:
            rep.min_margin, rep.argmin = margin, t
        if t >= tangency_cutoff and margin < rep.min_margin_away:
            rep.min_margin_away = margin
        if bad:
            rep.violations.append((t, v))
    return rep


# ---------------------------------------------------------------------------
# sinh t / t inequalities


# (label, numerator poly in x = cosh t, denominator poly, extra factor x?, expected sign of sinh t/t - bound)
_HYPER = (
    ("sinh(t)/t > 3(2x+3)/(x+14)", UniPoly([9, 6]), UniPoly([14, 1]), 1),
    ("sinh(t)/t > 15(2x^2+10x+9)/(2x^2+101x+212)", P1_DEN * 15, P1_NUM, 1),
    ("sinh(t)/t < 15x(18x^2+160x+179)/(1159x^2+4192x+4)", P2_DEN * 15, P2_NUM, -1),
)
_HYPER_SWITCH = 0.5
_HYPER_ORDER = 40


@lru_cache(maxsize=None)
def _hyper_series(idx: int) -> tuple[ExtReal, ...]:
    """Series of sinh(t) den(cosh t) - t num(cosh t); its sign is that of the gap."""
    _, num, den, _ = _HYPER[idx]
    ch = cosh_series(_HYPER_ORDER)
    sh = sinh_series(_HYPER_ORDER)
    a = series_mul(sh, poly_of_series(den, ch, _HYPER_ORDER), _HYPER_ORDER)
    b = poly_of_series(num, ch, _HYPER_ORDER)
    b = [Fraction(0)] + b[:-1]  # times t
    return tuple(ExtReal.from_fraction(x - y) for x, y in zip(a, b))


def hyperbolic_gap(idx: int, t) -> ExtReal:
    """sinh(t)/t minus the bound, in extended precision."""
    _, num, den, _ = _HYPER[idx]
    tv = ExtReal.coerce(t)
    x = ext_cosh(tv)
    if float(tv) < _HYPER_SWITCH:
        acc = ExtReal()
        for c in reversed(_hyper_series(idx)):
            acc = acc * tv + c
        return acc / (tv * den(x))
    return ext_sinh(tv) / tv - num(x) / den(x)


@dataclass
class HyperbolicReport:
    n_points: int
    violations: list = field(default_factory=list)
    min_margin: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.violations


def hyperbolic_check(t_grid=None) -> HyperbolicReport:
    t_grid = list(log_grid(1e-3, 50.0, 2000) if t_grid is None else t_grid)
    if any(t <= 0 or t > 50 for t in t_grid):
        raise DomainError("t_grid must lie in (0, 50]")
    rep = HyperbolicReport(len(t_grid))
    for idx, (label, _, _, sign) in enumerate(_HYPER):
        worst = math.inf
        for t in t_grid:
            margin = float(hyperbolic_gap(idx, t)) * sign
            worst = min(worst, margin)
            if margin <= 0.0:
                rep.violations.append((label, t, margin))
        rep.min_margin[label] = worst
    return rep


# ---------------------------------------------------------------------------
# V and the F/f ratio


@dataclass
class MonotoneReport:
    n_points: int
    v_increasing: bool
    v_violations: list = field(default_factory=list)
    ratio_min: float = math.inf
    ratio_max: float = -math.inf
    ratio_in_bounds: bool = True
    ratio_monotone: bool = True

    @property
    def passed(self) -> bool:
        return self.v_increasing and self.ratio_in_bounds


def v_monotone_check(x_grid=None, eps: float = 1e-12) -> MonotoneReport:
    """V increasing on the grid and f_{-31/336}/F_{7/40} inside [155/294, 11165/8284]."""
    x_grid = list(standard_grid(1000) if x_grid is None else x_grid)
    if any(x <= 0 or x > 100 for x in x_grid):
        raise DomainError("x_grid must lie in (0, 100]")
    vs = [evaluate("V", None, x) for x in x_grid]
    viol = [(x_grid[i], float(vs[i + 1] - vs[i])) for i in range(len(vs) - 1) if not vs[i] < vs[i + 1]]
    ratios = [float(evaluate("ratioFG", None, x)) for x in x_grid]
    lo, hi = float(_V_BETA) - eps, float(A3) + eps
    rep = MonotoneReport(len(x_grid), not viol, viol)
    rep.ratio_min, rep.ratio_max = min(ratios), max(ratios)
    rep.ratio_in_bounds = lo <= rep.ratio_min and rep.ratio_max <= hi
    rep.ratio_monotone = all(u < v for u, v in zip(ratios, ratios[1:]))
    return rep


def a0_quoted() -> float:
    """Threshold value quoted for h_a, kept for comparison with the computed a0."""
    return 0.48476


def c0_value() -> float:
    return minimize_ratio().c0
