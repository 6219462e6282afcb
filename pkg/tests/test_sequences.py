import math
import warnings
from fractions import Fraction

import mpmath as mp
import pytest

from detemple import sequences as sq
from detemple import special
from detemple.errors import DomainError
from detemple.extprec import ExtReal

mp.mp.dps = 60
G = special.euler_gamma().value


def fr(v):
    q = v.to_fraction()
    return mp.mpf(q.numerator) / q.denominator


def mp_R_minus_gamma(n):
    return mp.harmonic(n) - mp.log(mp.mpf(n) + mp.mpf(1) / 2) - mp.euler


def test_detemple_R_examples():
    assert abs(float(sq.detemple_R(1)) - 0.59453489) < 1e-8
    d = float(sq.detemple_R(1) - G)
    assert abs(d - 0.0173192) < 1e-7 and 1 / 96 < d < 1 / 24
    vals = [sq.r_half(n) for n in range(1, 1001)]
    assert all(a > b for a, b in zip(vals, vals[1:]))


def test_r_half_is_R_n_minus_gamma():
    for n in (1, 10, 500, 10**5):
        assert abs(fr(sq.r_half(n)) - mp_R_minus_gamma(n)) < mp.mpf("1e-31") * max(1, 1 / (24 * n * n) * 1e3)


def test_classical_D_examples():
    assert sq.classical_D(1) == 1
    d = float(sq.classical_D(10) - G)
    assert 1 / 22 < d < 1 / 20
    assert abs(float(sq.classical_D(100) - G) - 0.0049917) < 1e-7


def test_domain():
    with pytest.raises(DomainError):
        sq.detemple_R(0)
    with pytest.raises(DomainError):
        sq.accel("w", 0)
    with pytest.raises(ValueError):
        sq.accel("q", 3)


def test_accel_interleaving_at_5():
    w, y, z = (sq.accel(k, 5) for k in "wyz")
    assert w < z < G < y


def test_accel_interleaving_up_to_1000():
    for n in range(1, 1001):
        m = Fraction(2 * n + 1, 2)
        r = sq.r_half(n)
        ew, ey, ez = (r - ExtReal.from_fraction(sq.correction(k, m)) for k in "wyz")
        assert ew < ez < 0 < ey, n


def test_accel_examples():
    ey = float(sq.accel("y", 10) - G)
    ratio = ey / (627404761 / 246900842496 / 1e10)
    assert 0.5 <= ratio <= 2
    assert abs(sq.accel("w", 1) - G) < abs(sq.detemple_R(1) - G)


def test_accel_matches_mpmath():
    for kind in "wyz":
        for n in (3, 40, 250):
            m = mp.mpf(2 * n + 1) / 2
            c = sq.correction(kind, Fraction(2 * n + 1, 2))
            exact = mp.harmonic(n) - mp.log(m) - mp.mpf(c.numerator) / c.denominator
            assert abs(fr(sq.accel(kind, n)) - exact) < mp.mpf("1e-30")


def test_bound_family_examples():
    de1 = sq.bound_family("de1")
    assert float(de1.lower(1)) == 1 / 96 and float(de1.upper(1)) == 1 / 24
    v = sq.bound_family("villarino")
    assert abs(float(v.lower(1)) - 1 / 58.2) < 1e-15
    assert v.lower(1) < sq.r_half(1)
    d2 = sq.bound_family("d2")
    direct = Fraction(1, 24) * (Fraction(9, 4) - Fraction(7, 40)) / (Fraction(81, 16) - Fraction(31, 336))
    assert abs(d2.upper(1).to_fraction() - direct) < Fraction(1, 10**30)
    assert abs(float(d2.upper(1)) - 0.0173952) < 1e-7
    assert d2.upper(1) > sq.r_half(1)
    with pytest.raises(ValueError):
        sq.bound_family("nope")


@pytest.mark.parametrize("name", sq.FAMILY_NAMES)
def test_margins_agree_with_direct_difference(name):
    fam = sq.bound_family(name)
    for n in (1, 2, 7, 60):
        lo_m, hi_m = fam.margins(n)
        r = fr(sq.r_half(n))
        assert abs(fr(lo_m) - (r - fr(fam.lower(n)))) < mp.mpf("1e-30")
        assert abs(fr(hi_m) - (fr(fam.upper(n)) - r)) < mp.mpf("1e-30")


@pytest.mark.parametrize("name", sq.FAMILY_NAMES)
def test_lower_below_upper(name):
    fam = sq.bound_family(name)
    assert all(fam.lower(n) < fam.upper(n) for n in range(1, 300))


@pytest.mark.parametrize("name", ["de1", "mortici"])
def test_strict_families(name):
    rep = sq.check_brackets(name, 10**4)
    assert rep.strict and rep.n_checked == 10**4


@pytest.mark.parametrize("name", ["villarino", "chen", "d1", "d2", "d3", "d4"])
def test_best_constant_families(name):
    rep = sq.check_brackets(name, 2000)
    assert rep.passed
    assert [a[:2] for a in rep.attained] == [(1, sq.bound_family(name).attained[0])]


def test_de2_lower_fails_as_printed():
    rep = sq.check_brackets("de2", 100)
    assert {v[1] for v in rep.violations} == {"lower"}
    assert len(rep.violations) == 100


def test_parallel_merge_is_deterministic():
    serial = sq.check_brackets("d3", 3000, workers=1, chunk=700)
    parallel = sq.check_brackets("d3", 3000, workers=3, chunk=700)
    whole = sq.check_brackets("d3", 3000)
    for rep in (parallel, whole):
        assert rep.min_lower_margin == serial.min_lower_margin
        assert rep.min_upper_margin == serial.min_upper_margin
        assert rep.argmin_lower == serial.argmin_lower
        assert rep.attained == serial.attained
        assert rep.n_checked == serial.n_checked


def test_check_brackets_range():
    with pytest.raises(DomainError):
        sq.check_brackets("d1", 0)
    with pytest.raises(ValueError):
        sq.check_brackets("xx", 10)


def test_d3_tighter_than_d1():
    d1, d3 = sq.bound_family("d1"), sq.bound_family("d3")
    for n in range(2, 1001):
        assert d3.lower(n) > d1.lower(n) and d3.upper(n) < d1.upper(n), n


@pytest.mark.parametrize("name", ["de1", "villarino", "chen", "mortici", "d1", "d2", "d3", "d4"])
def test_strictly_inside_away_from_n1(name):
    fam = sq.bound_family(name)
    for n in range(2, 400, 37):
        lo_m, hi_m = fam.margins(n)
        assert lo_m > 0 and hi_m > 0, (name, n)


@pytest.mark.parametrize("name", ["de1", "villarino", "chen", "mortici", "d1", "d2", "d3"])
def test_bracket_width_shrinks(name):
    fam = sq.bound_family(name)
    assert float(fam.upper(400) - fam.lower(400)) < float(fam.upper(2) - fam.lower(2)) / 100


def test_d4_width_is_lambda4():
    from detemple.cm_verify import lambda_constants

    fam = sq.bound_family("d4")
    lam4 = lambda_constants().lambda4
    for n in (2, 50, 400):
        assert abs(float(fam.upper(n) - fam.lower(n) + lam4)) < 1e-25


def test_upper_bound_comparisons():
    d2, de2, d4 = (sq.bound_family(k) for k in ("d2", "de2", "d4"))
    assert all(d2.upper(n) < de2.upper(n) for n in range(1, 101))
    assert all(d4.upper(n) < d2.upper(n) for n in range(1, 1001))
    # the lower bound of d4 is not above that of d2 (lambda4 < 0)
    assert all(d4.lower(n) < d2.lower(n) for n in range(2, 101))


@pytest.mark.parametrize(
    "kind,p,ns,tol",
    [("w", 8, [20, 40, 80, 160], 0.01), ("y", 10, [10, 20, 40, 80], 0.02), ("z", 8, [20, 40, 80, 160], 0.01)],
)
def test_estimate_limit(kind, p, ns, tol):
    est = sq.estimate_limit(kind, p, ns)
    assert est.rel_error < tol
    assert est.n_used == ns
    assert est.rel_error == abs(float(est.estimate.to_fraction() - est.target) / float(est.target))


def test_estimate_limit_stable_when_adding_a_node():
    a = sq.estimate_limit("z", 8, [20, 40, 80, 160])
    b = sq.estimate_limit("z", 8, [20, 40, 80, 160, 300])
    assert abs(float((a.estimate - b.estimate) / b.estimate)) < 1e-6


def test_estimate_limit_contract():
    with pytest.raises(DomainError):
        sq.estimate_limit("w", 9, [10, 20])
    with pytest.raises(DomainError):
        sq.estimate_limit("w", 8, [40, 20])
    with pytest.raises(DomainError):
        sq.estimate_limit("w", 8, [100, 400])


def test_precision_floor_warning():
    with pytest.warns(sq.PrecisionFloorWarning):
        sq.estimate_limit("y", 10, [100, 200, 300])


def test_richardson_even_exact_on_polynomial_ladder():
    # f(n) = L + a h + b h^2 exactly, h = (n + 1/2)^-2
    L, a, b = Fraction(3, 7), Fraction(-2), Fraction(5, 3)
    ns = [10, 20, 40]
    vals = [L + a * Fraction(4, (2 * n + 1) ** 2) + b * Fraction(4, (2 * n + 1) ** 2) ** 2 for n in ns]
    assert sq.richardson_even(ns, vals, levels=2) == L
