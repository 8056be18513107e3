import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from mvop.exact import MomentFunctional, falling, format_rational, gen_binom, parse_rational, poch

rationals = st.fractions(min_value=-10, max_value=10, max_denominator=12)


def test_poch_frozen_values():
    assert poch(5, 0) == 1
    assert poch(Fraction(-7, 3), 0) == 1
    assert poch(1, 3) == 6
    assert poch(Fraction(1, 2), 2) == Fraction(3, 4)
    assert poch(-2, 4) == 0


def test_poch_rejects_negative_length():
    with pytest.raises(ValueError):
        poch(1, -1)


@given(rationals, st.integers(0, 8), st.integers(0, 8))
def test_poch_splits_multiplicatively(z, r, s):
    assert poch(z, r + s) == poch(z, r) * poch(z + r, s)


def test_falling_frozen_values():
    assert falling(7, 0) == 1
    assert falling(3, 2) == 6
    assert falling(Fraction(1, 2), 2) == Fraction(-1, 4)


@given(rationals, st.integers(0, 8))
def test_falling_matches_reversed_poch(n, i):
    assert falling(n, i) == poch(n - i + 1, i)


def test_gen_binom_frozen_values():
    assert gen_binom(5, 2) == 10
    assert gen_binom(Fraction(3, 2), 2) == Fraction(3, 8)
    assert gen_binom(Fraction(-1, 2), 1) == Fraction(-1, 2)
    assert gen_binom(Fraction(7, 4), 0) == 1


@given(st.integers(0, 12), st.integers(0, 12))
def test_gen_binom_matches_integer_binomials(z, r):
    if z >= r:
        assert gen_binom(z, r) == math.comb(z, r)
    else:
        assert gen_binom(z, r) == 0


def test_parse_rational_accepts_exact_forms():
    assert parse_rational("3/4") == Fraction(3, 4)
    assert parse_rational("-1/2") == Fraction(-1, 2)
    assert parse_rational(" 7 ") == 7
    assert parse_rational("+2") == 2
    assert parse_rational("6/4") == Fraction(3, 2)


@pytest.mark.parametrize("bad", ["1.5", "", "a", "1/0", "1e3", "1/2/3", "--1", "0x1"])
def test_parse_rational_rejects_inexact_forms(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


@given(rationals)
def test_format_parse_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_format_rational_lowest_terms():
    assert format_rational(Fraction(4, 8)) == "1/2"
    assert format_rational(Fraction(-3)) == "-3"
    assert format_rational(2) == "2"


def test_moment_ratio_frozen_values():
    # integer-exponent oracle: the m-th moment of u^beta on (0,1) is 1/(beta+m+1)
    def poly_weight_ratio(beta, m):
        return Fraction(1, beta + m + 1) / Fraction(1, beta + 1)

    assert MomentFunctional(0, 0).ratio(2) == poly_weight_ratio(0, 2) == Fraction(1, 3)
    assert MomentFunctional(0, 1).ratio(1) == poly_weight_ratio(1, 1) == Fraction(2, 3)
    assert MomentFunctional(0, 3).ratio(4) == poly_weight_ratio(3, 4)


def test_moment_ratio_normalization():
    assert MomentFunctional(Fraction(1, 2), Fraction(3, 2)).ratio(0) == 1


@given(
    st.fractions(min_value=Fraction(-9, 10), max_value=4, max_denominator=10),
    st.fractions(min_value=Fraction(-9, 10), max_value=4, max_denominator=10),
    st.integers(0, 12),
)
def test_moment_ratio_positive_and_decreasing(alpha, beta, m):
    mf = MomentFunctional(alpha, beta)
    assert mf.ratio(m) > 0
    assert mf.ratio(m + 1) < mf.ratio(m)
    # defining recurrence
    assert mf.ratio(m + 1) * (alpha + beta + 2 + m) == mf.ratio(m) * (beta + 1 + m)


def test_moment_functional_rejects_bad_exponents():
    with pytest.raises(ValueError):
        MomentFunctional(-1, 0)
    with pytest.raises(ValueError):
        MomentFunctional(0, Fraction(-5, 4))
    with pytest.raises(ValueError):
        MomentFunctional(0, 0).ratio(-1)


def test_moment_integrate():
    mf = MomentFunctional(0, 1)
    # 2 - u against u on (0, 1): 2*(1/2) - 1/3, in units of the zeroth moment 1/2
    assert mf.integrate([2, -1]) == 2 - Fraction(2, 3)
    assert mf.integrate([]) == 0


def test_moment_cache_is_thread_safe():
    import threading

    mf = MomentFunctional(Fraction(1, 3), Fraction(5, 7))
    expected = MomentFunctional(Fraction(1, 3), Fraction(5, 7))
    results = [None] * 8

    def worker(idx):
        results[idx] = [mf.ratio(m) for m in range(60)]

    threads = [threading.Thread(target=worker, args=(i,)) for i in range(8)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    serial = [expected.ratio(m) for m in range(60)]
    assert all(r == serial for r in results)
