"""Exponent table, sieve thresholds, and the linear-sieve hypotheses."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pvsieve import fourier, sieve
from pvsieve.spaces import CUBIC, QUARTIC


# ---------------------------------------------------------------------------
# exponent table
# ---------------------------------------------------------------------------

def test_exponent_table_values():
    rows, alpha_max, bottleneck = sieve.exponent_table(QUARTIC)
    by_j = {r.j: r for r in rows}
    assert set(by_j) == {4, 7, 8, 10, 11, 12}
    assert (by_j[4].x_exponent, by_j[4].n_exponent, by_j[4].alpha_cap) == \
        (Fraction(2, 3), 2, Fraction(1, 6))
    assert (by_j[7].x_exponent, by_j[7].n_exponent, by_j[7].alpha_cap) == \
        (Fraction(5, 12), 4, Fraction(7, 48))
    assert (by_j[8].n_exponent, by_j[8].alpha_cap) == (4, Fraction(1, 6))
    assert (by_j[10].n_exponent, by_j[10].alpha_cap) == (5, Fraction(1, 6))
    assert by_j[11].alpha_cap == Fraction(11, 60)
    assert (by_j[12].x_exponent, by_j[12].alpha_cap) == (0, Fraction(1, 5))
    assert alpha_max == Fraction(7, 48)
    assert bottleneck == 7


def test_exponent_rows_solve_balance_equation():
    rows, _, _ = sieve.exponent_table(QUARTIC)
    for r in rows:
        assert r.x_exponent + r.alpha_cap * r.n_exponent == 1


# ---------------------------------------------------------------------------
# weighted-sieve threshold
# ---------------------------------------------------------------------------

def test_weighted_sieve_thresholds():
    assert sieve.weighted_sieve_t(Fraction(7, 48)) == 8
    assert sieve.weighted_sieve_t(Fraction(1, 2)) == 3
    assert sieve.weighted_sieve_t(1) == 2
    assert sieve.weighted_sieve_t(Fraction(7, 48), sieve.GREAVES_CONSTANT) == 7


def test_weighted_sieve_rejects_nonpositive():
    with pytest.raises(ValueError):
        sieve.weighted_sieve_t(0)
    with pytest.raises(ValueError):
        sieve.weighted_sieve_t(Fraction(-1, 3))


def test_weighted_sieve_boundary_exactness():
    """Thresholds within 1e-11 of an integer must be decided exactly."""
    import decimal
    decimal.getcontext().prec = 50
    log43 = decimal.Decimal(4).ln() / decimal.Decimal(3).ln()
    # 1/alpha a hair above / below t + 1 - log4/log3 for t = 5
    for inv_alpha in (Fraction(473814049286, 10 ** 11),
                      Fraction(473814049285, 10 ** 11)):
        thr = decimal.Decimal(inv_alpha.numerator) / inv_alpha.denominator \
            + log43 - 1
        want = int(thr) + 1          # thr is never an integer
        assert sieve.weighted_sieve_t(1 / inv_alpha) == want


@given(st.fractions(min_value=Fraction(1, 40), max_value=4, max_denominator=500))
@settings(max_examples=80, deadline=None)
def test_weighted_sieve_matches_float_away_from_boundary(alpha):
    import math
    t = sieve.weighted_sieve_t(alpha)
    thr = 1 / float(alpha) + math.log(4) / math.log(3) - 1
    assert t >= thr - 1e-6
    assert t - 1 < thr + 1e-6


@given(st.fractions(min_value=Fraction(1, 30), max_value=2, max_denominator=500),
       st.fractions(min_value=Fraction(1, 30), max_value=2, max_denominator=500))
@settings(max_examples=60, deadline=None)
def test_weighted_sieve_monotone(a1, a2):
    lo, hi = min(a1, a2), max(a1, a2)
    assert sieve.weighted_sieve_t(lo) >= sieve.weighted_sieve_t(hi)


# ---------------------------------------------------------------------------
# linear-sieve hypotheses
# ---------------------------------------------------------------------------

def test_primes_upto():
    assert sieve.primes_upto(1).size == 0
    assert sieve.primes_upto(30).tolist() == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert len(sieve.primes_upto(10_000)) == 1229


def test_linear_sieve_cubic_small():
    # |11/27 - 1/3| = 2/27 < 1/9: C = 1 already works at p = 3
    assert abs(fourier.omega(CUBIC, 3) - Fraction(1, 3)) == Fraction(2, 27)
    rep = sieve.linear_sieve_check(CUBIC, 100)
    assert rep.smallest_int_c == 1
    assert rep.c3_strict and rep.omega_below_one


def test_linear_sieve_full_range():
    rep_c = sieve.linear_sieve_check(CUBIC, 10_000)
    rep_q = sieve.linear_sieve_check(QUARTIC, 10_000)
    assert rep_c.c_witness == Fraction(9972, 9973)   # 1 - 1/p at the top prime
    assert rep_c.smallest_int_c == 1
    assert rep_q.smallest_int_c == 2
    assert rep_q.c_witness < 2
    assert rep_c.c3_strict and rep_q.c3_strict
    assert rep_c.omega_below_one and rep_q.omega_below_one


def test_product_bound_witness():
    Kc, nc = sieve.sieve_product_bound(CUBIC, 3_000)
    Kq, nq = sieve.sieve_product_bound(QUARTIC, 3_000)
    # frozen from the 10^4 run (1.3021 / 1.9715); margins for the short range
    assert 1.0 <= Kc < 1.5
    assert 1.0 <= Kq < 2.2
    assert nc == nq - 1          # cubic also drops p = 3


def test_omega_squarefree_multiplicative():
    assert sieve.omega_squarefree(CUBIC, 15) == fourier.omega(CUBIC, 5)  # 3 drops
    v = sieve.omega_squarefree(QUARTIC, 105)
    assert v == (fourier.omega(QUARTIC, 3) * fourier.omega(QUARTIC, 5)
                 * fourier.omega(QUARTIC, 7))


# ---------------------------------------------------------------------------
# gcd-sum bound
# ---------------------------------------------------------------------------

def test_gcd_sum_examples():
    assert sieve.gcd_sum_check(1, 10) == (11, 11)
    exact, major = sieve.gcd_sum_check(6, 6)
    assert exact == sum(__import__("math").gcd(6, n) for n in range(6, 13))
    assert major == 36
    assert exact <= major
    # prime beyond the window contributes nothing
    assert sieve.gcd_sum_check(97, 10)[0] == 11


def test_gcd_sum_domain():
    with pytest.raises(ValueError):
        sieve.gcd_sum_check(0, 5)
    with pytest.raises(ValueError):
        sieve.gcd_sum_check(4, 0)


@given(st.integers(min_value=-400, max_value=400).filter(bool),
       st.integers(min_value=1, max_value=300))
@settings(max_examples=120, deadline=None)
def test_gcd_sum_bound_always_holds(m, N):
    exact, major = sieve.gcd_sum_check(m, N)
    assert exact <= major
