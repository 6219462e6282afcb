import math
import random
from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from detemple import algebra as al
from detemple import kernel, special
from detemple.algebra import HyperExpr, RatFunc, TExpr, UniPoly, X

t_sym, x_sym = sp.symbols("t x")


# ---------------------------------------------------------------- Bernoulli


def test_bernoulli_small_values():
    assert al.bernoulli(2) == Fraction(1, 6)
    assert al.bernoulli(4) == Fraction(-1, 30)
    assert al.bernoulli(12) == Fraction(-691, 2730)


@pytest.mark.parametrize("n", range(0, 81, 2))
def test_bernoulli_matches_sympy(n):
    assert al.bernoulli(n) == Fraction(str(sp.bernoulli(n)))


def test_odd_bernoulli_vanish():
    assert al.bernoulli(1) == Fraction(-1, 2)
    assert all(al.bernoulli(n) == 0 for n in range(3, 80, 2))


def test_kernel_coefficients_from_bernoulli():
    series = kernel.q_taylor()
    for k in range(1, 31):
        expected = (1 - Fraction(1, 2 ** (2 * k - 1))) * al.bernoulli(2 * k) / math.factorial(2 * k)
        assert series.coefficient(2 * k - 1) == expected


# ---------------------------------------------------------------- ring laws

small = st.integers(min_value=-50, max_value=50)
polys = st.lists(st.fractions(min_value=-20, max_value=20, max_denominator=30), max_size=6).map(UniPoly)
hypers = st.tuples(polys, polys).map(lambda p: HyperExpr(*p))


@settings(max_examples=100, deadline=None)
@given(polys, polys, polys)
def test_unipoly_ring_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@settings(max_examples=100, deadline=None)
@given(hypers, hypers, hypers)
def test_hyperexpr_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a


@settings(max_examples=100, deadline=None)
@given(small, small, small)
def test_int_and_fraction_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert Fraction(a, 7) * (Fraction(b, 3) + c) == Fraction(a, 7) * Fraction(b, 3) + Fraction(a, 7) * c


@settings(max_examples=60, deadline=None)
@given(polys, polys.filter(lambda p: not p.is_zero()))
def test_unipoly_divmod(a, b):
    q, r = a.divmod(b)
    assert q * b + r == a
    assert r.is_zero() or r.degree < b.degree


def test_unipoly_matches_sympy():
    p = UniPoly.from_descending([3, -2, 0, 5])
    q = UniPoly([Fraction(1, 2), 1])
    sp_p = 3 * x_sym**3 - 2 * x_sym**2 + 5
    sp_q = sp.Rational(1, 2) + x_sym
    prod = sp.Poly(sp.expand(sp_p * sp_q), x_sym).all_coeffs()
    assert (p * q) == UniPoly.from_descending([Fraction(str(c)) for c in prod])
    assert p.deriv() == UniPoly.from_descending([9, -4, 0])
    assert p.compose(q)(Fraction(3)) == p(q(Fraction(3)))


def test_ratfunc_derivative_and_shift():
    f = RatFunc(UniPoly([1, 0, 1]), UniPoly([0, 1]))  # (1 + x^2)/x
    assert f.deriv().equals(RatFunc(UniPoly([-1, 0, 1]), UniPoly([0, 0, 1])))
    assert f.shift(1)(Fraction(2)) == f(Fraction(3))


@settings(max_examples=50, deadline=None)
@given(hypers, st.floats(min_value=-3, max_value=3))
def test_hyperexpr_evaluation_homomorphism(h, t):
    # evaluating the reduced product equals the product of the values
    g = h * h + h
    v = h.evaluate(t)
    assert math.isclose(g.evaluate(t), v * v + v, rel_tol=1e-10, abs_tol=1e-10 * (1 + v * v))


@settings(max_examples=50, deadline=None)
@given(hypers, st.floats(min_value=-2, max_value=2))
def test_hyperexpr_derivative_numeric(h, t):
    d = h.deriv_t().evaluate(t)
    eps = 1e-5
    fd = (h.evaluate(t + eps) - h.evaluate(t - eps)) / (2 * eps)
    assert math.isclose(d, fd, rel_tol=1e-5, abs_tol=1e-5)


def test_texpr_matches_sympy_derivative():
    expr = al.T * al.T * HyperExpr(X, 1) + al.T * al.S
    d = expr.deriv_t()
    sym = t_sym**2 * (sp.cosh(t_sym) + sp.sinh(t_sym)) + t_sym * sp.sinh(t_sym)
    dsym = sp.diff(sym, t_sym)
    for tv in (0.3, 1.1, 2.4):
        assert math.isclose(d.evaluate(tv), float(dsym.subs(t_sym, tv)), rel_tol=1e-12)


# ---------------------------------------------------------------- u_n


def test_u_examples():
    assert al.u_closed(3) == 0
    assert all(al.u_closed(n) < 0 for n in range(4, 11))
    assert al.u_closed(11) == 1636643754240


def test_u_recursion_holds_2_to_50():
    assert all(al.u_recursion_check(n) for n in range(2, 51))
    assert all(al.u_recursion_rhs(n) > 0 for n in range(11, 51))
    assert al.u_closed(12) == 16 * al.u_closed(11) + al.u_recursion_rhs(11)


def test_u_series_examples():
    assert al.u_from_series(3) == 0
    assert al.u_from_series(11) == Fraction(1636643754240, math.factorial(22))
    assert [al.u_from_series(n) for n in (0, 1, 2)] == [0, 0, 0]


def test_u_series_matches_closed_form_from_3():
    assert all(al.u_from_series(n) * math.factorial(2 * n) == al.u_closed(n) for n in range(3, 51))


def test_u_series_boundary_at_2():
    # the closed form is the generic coefficient; at n = 2 it does not match the series
    assert al.u_from_series(2) == 0
    assert al.u_closed(2) == -192


def test_half_p_series_matches_sympy():
    t = t_sym
    half_p = (sp.cosh(4 * t) + 4 * t**2 * sp.cosh(3 * t) - 2 * t**3 * sp.sinh(3 * t) - 4 * t * sp.sinh(3 * t)
              - 4 * sp.cosh(2 * t) - 4 * t**2 * sp.cosh(t) - 10 * t**3 * sp.sinh(t) + 12 * t * sp.sinh(t)
              + 8 * t**4 + 3)
    ser = sp.series(half_p, t, 0, 25).removeO()
    ours = al.half_p_series(24)
    for k in range(25):
        assert ours[k] == Fraction(str(ser.coeff(t, k)))


# ---------------------------------------------------------------- factorizations


def test_identity_suite_all_hold():
    results = [fn() for fn in al.IDENTITY_SUITE]
    assert len(results) == 8
    for r in results:
        assert r.holds, r.name
        assert not r.residual


def test_p1_p2_numeric_spot_checks():
    x = math.cosh(1.3)
    claimed = 4 * (x - 1) ** 5 / (2 * x * x + 10 * x + 9) ** 2
    assert math.isclose(al.p_derivative_numeric(1, 1.3), claimed, rel_tol=1e-10)
    x = math.cosh(0.7)
    claimed = -4 * (1215 * x + 179) * (x - 1) ** 5 / (x * x * (18 * x * x + 160 * x + 179) ** 2)
    assert math.isclose(al.p_derivative_numeric(2, 0.7), claimed, rel_tol=1e-8)


def test_p1_derivative_against_sympy():
    x = sp.cosh(t_sym)
    p1 = (2 * x**2 + 101 * x + 212) / (2 * x**2 + 10 * x + 9) * sp.sinh(t_sym) - 15 * t_sym
    target = 4 * (x - 1) ** 5 / (2 * x**2 + 10 * x + 9) ** 2
    diff = sp.diff(p1, t_sym) - target
    for tv in (0.2, 1.3, 3.0):
        assert abs(float(diff.subs(t_sym, tv))) < 1e-9


def test_U1_facts():
    r = al.verify_U1()
    assert r.facts["U1(1)"] == 7290000
    assert al.PRINTED_U1(1) == 7290000
    assert r.facts["shifted_coefficients_nonnegative"]
    assert al.PRINTED_U1.degree == 6 and al.PRINTED_U1.coeffs[-1] == 176 and al.PRINTED_U1.coeffs[0] == -20756344


def _U_sym(y, x):
    s2 = x**2 - 1
    return -504 * y**5 + 31 * s2**2 * y + 504 * x**4 - 588 * x**2 * s2 + 74 * s2**2


def test_U1_against_sympy():
    x = x_sym
    cleared = sp.cancel(_U_sym(3 * (2 * x + 3) / (x + 14), x) * (x + 14) ** 5)
    u1 = sum(int(c) * x**i for i, c in enumerate(al.PRINTED_U1.coeffs))
    assert sp.expand(cleared - (x - 1) ** 3 * u1) == 0


def test_U2_against_sympy():
    x = x_sym
    den = 1159 * x**2 + 4192 * x + 4
    cleared = sp.cancel(_U_sym(15 * x * (18 * x**2 + 160 * x + 179) / den, x) * den**5)
    u2 = sum(int(c) * x**i for i, c in enumerate(al.PRINTED_U2.coeffs))
    assert sp.expand(cleared - (x - 1) ** 4 * u2) == 0


def test_U2_q4_facts():
    r = al.verify_U2()
    assert r.facts["U2(0)"] == 75776
    assert r.facts["all_positive"]
    assert al.PRINTED_U2.degree == 11 and al.PRINTED_U2.coeffs[-1] == 14379675269523570
    r = al.verify_q4()
    assert r.facts["all_positive"]
    assert al.PRINTED_Q4.degree == 9 and al.PRINTED_Q4.coeffs[-1] == 10249024


def test_V1_printed_identity_and_audit():
    r = al.verify_V1()
    assert r.holds
    assert al.PRINTED_V1.degree == 12 and al.PRINTED_V1.coeffs[-1] == 1718371882080
    assert r.facts["printed_tail_over_true_derivative"] == "24"
    assert r.facts["true_numerator_negative_coefficients"]


def test_V1_trigamma_spot_check():
    # V'(x) = psi'(x + 1/2) - 1/x - corr'(x); with the true derivative the
    # difference V'(2) - V'(1) matches true_num(1)/den(1), where true_num < 0
    corr = al.V_CORRECTION
    dcorr = corr.deriv()

    def v_prime(x):
        return special.trigamma(x + 0.5) - 1.0 / x - float(dcorr(Fraction(x)))

    true_num = al.verify_V1().facts["true_numerator"]
    predicted = float(true_num(Fraction(1))) / float(al.V1_DENOMINATOR(Fraction(1)))
    assert math.isclose(v_prime(2.0) - v_prime(1.0), predicted, rel_tol=1e-10)
    printed = -float(al.PRINTED_V1(Fraction(1))) / float(al.V1_DENOMINATOR(Fraction(1)))
    assert not math.isclose(v_prime(2.0) - v_prime(1.0), printed, rel_tol=1e-3)


def test_series_helpers():
    ch = al.cosh_series(10, 2)
    assert ch[4] == Fraction(16, 24)
    inv = al.series_inv(ch, 10)
    prod = al.series_mul(ch, inv, 10)
    assert prod == [1] + [0] * 10
    assert al.poly_of_series(UniPoly([0, 0, 1]), al.sinh_series(6), 6)[2] == 1
