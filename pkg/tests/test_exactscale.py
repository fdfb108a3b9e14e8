import math
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from randcarpet.exactscale import (
    InsufficientDepthError, _iroot_floor, as_scale, as_theta, k1, k2, power_scale, ratio_stats,
    scale_from_vertical_product, stopping_time,
)
from randcarpet.model import Ensemble, Pattern, generic_example, small_test_pattern


def naive_stopping_time(sizes, R, exponent):
    # direct rational comparison: (1/P)**p <= R**q with exponent q/p
    q, p = exponent.numerator, exponent.denominator
    P = 1
    for k, s in enumerate(sizes, 1):
        P *= s
        if Fraction(1, P) ** p <= R ** q:
            return k
    return None


SMALL = Ensemble([small_test_pattern()])


def single(m, n):
    return Ensemble([Pattern(m, n, [(0, 0)])])


def test_equality_is_on_the_left():
    assert k1([1] * 10, single(2, 3), Fraction(1, 8)) == 3


def test_between_powers():
    assert k1([1] * 10, single(2, 3), Fraction(1, 7)) == 3


def test_generic_grids_horizontal():
    assert k1([1, 2, 1, 2], generic_example(), Fraction(1, 300)) == 3


def test_generic_grids_vertical():
    assert k2([1, 2, 1, 2], generic_example(), Fraction(1, 300)) == 2


def test_vertical_exact_power():
    assert k2([1] * 5, single(2, 4), Fraction(1, 16)) == 2


def test_first_step_suffices():
    assert k2([1] * 5, single(2, 3), Fraction(1, 2)) == 1


def test_exhausted_prefix_reports_bound():
    with pytest.raises(InsufficientDepthError, match="insufficient realization depth") as exc:
        k1([1, 1], single(2, 3), Fraction(1, 1000))
    # ceil(log2(1000)) = 10 levels at worst, two supplied
    assert exc.value.extra_bound == 8


def test_scale_parsing():
    assert as_scale("3/12") == Fraction(1, 4)
    assert as_scale((1, 8)) == Fraction(1, 8)
    with pytest.raises(TypeError):
        as_scale(0.25)
    for bad in ("0", "1", "3/2", "-1/4"):
        with pytest.raises(ValueError):
            as_scale(bad)


def test_theta_parsing():
    assert as_theta(0.3) == Fraction(3, 10)
    assert as_theta("9/10") == Fraction(9, 10)
    for bad in (0, 1, "5/4"):
        with pytest.raises(ValueError):
            as_theta(bad)


def test_power_scale_integer_exponent():
    assert power_scale(Fraction(1, 16), Fraction(1, 4)) == (Fraction(1, 65536), Fraction(1, 65536))
    assert power_scale(Fraction(1, 8), Fraction(1, 2)).exact


def test_power_scale_exact_root():
    # (1/4)**(3/2) = 1/8
    ps = power_scale(Fraction(1, 4), Fraction(2, 3))
    assert ps.exact and ps.lo == Fraction(1, 8)


def test_power_scale_bracket():
    ps = power_scale(Fraction(1, 10), Fraction(2, 3))
    assert ps == (Fraction(1, 32), Fraction(1, 31))
    assert not ps.exact


@given(st.integers(1, 10 ** 30), st.integers(1, 7))
def test_iroot_floor(x, k):
    r = _iroot_floor(x, k)
    assert r ** k <= x < (r + 1) ** k


@given(st.integers(1, 50), st.integers(2, 400), st.integers(1, 9), st.integers(2, 10))
def test_power_scale_brackets_true_value(a, b, tp, tq):
    assume(a < b and tp < tq)
    R, theta = Fraction(a, b), Fraction(tp, tq)
    lo, hi = power_scale(R, theta)
    q, p = (1 / theta).numerator, (1 / theta).denominator
    # lo**p <= R**q <= hi**p
    assert lo ** p <= R ** q <= hi ** p
    assert lo == hi or hi / lo < 2


def test_ratio_stats_deterministic():
    r = ratio_stats([1] * 80, SMALL, Fraction(1, 2 ** 16), Fraction(1, 4))
    assert (r.k1R, r.k2R, r.k1Rt, r.k2Rt) == (16, 8, 64, 32)
    assert r.ratios["k1R/k2R"] == 2.0
    assert r.ratios["k2R/k2Rt"] == 0.25


def test_vertical_product_scale():
    e = generic_example()
    w = [1, 2, 2, 1]
    R = scale_from_vertical_product(w, e, 3)
    assert R == Fraction(1, 21 * 15 * 15)
    assert k2(w, e, R) == 3
    with pytest.raises(InsufficientDepthError):
        scale_from_vertical_product(w, e, 5)


sizes_st = st.lists(st.integers(2, 30), min_size=40, max_size=40)


@given(sizes_st, st.integers(1, 10 ** 6), st.integers(2, 10 ** 9),
       st.sampled_from([Fraction(1), Fraction(2), Fraction(3, 2), Fraction(10, 3), Fraction(7, 5)]))
def test_matches_naive_oracle(sizes, a, b, exponent):
    assume(a < b)
    R = Fraction(a, b)
    assert stopping_time(sizes, R, exponent) == naive_stopping_time(sizes, R, exponent)


@given(sizes_st, st.integers(1, 10 ** 6), st.integers(2, 10 ** 9))
def test_defining_inequalities(sizes, a, b):
    assume(a < b)
    R = Fraction(a, b)
    k = stopping_time(sizes, R)
    P = math.prod(sizes[:k])
    assert Fraction(1, P) <= R < Fraction(1, P // sizes[k - 1])
    # comparability with the largest size in play
    assert Fraction(1, P) > R / max(sizes)


@given(sizes_st, st.integers(1, 10 ** 6), st.integers(2, 10 ** 9), st.integers(1, 10 ** 6))
def test_monotone_in_scale(sizes, a, b, c):
    assume(a < b and c < a)
    assert stopping_time(sizes, Fraction(c, b)) >= stopping_time(sizes, Fraction(a, b))


@given(st.lists(st.sampled_from([1, 2]), min_size=60, max_size=60), st.integers(2, 10 ** 12))
def test_vertical_time_never_exceeds_horizontal(omega, d):
    e = generic_example()
    R = Fraction(1, d)
    assert k2(omega, e, R) <= k1(omega, e, R)


def test_exact_boundary_power_product():
    # 2**30 exactly equals the scale; floats alone cannot be trusted here
    R = Fraction(1, 2 ** 30)
    assert stopping_time([2] * 40, R) == 30
    assert stopping_time([2] * 40, R + Fraction(1, 2 ** 80)) == 30
    assert stopping_time([2] * 40, R - Fraction(1, 2 ** 80)) == 31
    assert stopping_time([4] * 40, Fraction(1, 8), Fraction(4, 3)) == 2
