# -*- coding: utf-8 -*-
from fractions import Fraction

import pytest

from ccdesign import bounds
from ccdesign.core import ParamError


@pytest.mark.parametrize('n,expected', zip(range(3, 10), (1, 3, 4, 6, 7, 11, 12)))
def test_fort_hedlund(n, expected):
    assert bounds.fort_hedlund(n) == expected


def test_r2_closed_form():
    got = [bounds.r2_closed_form(n) for n in range(3, 15)]
    assert got == [1, 3, 5, 7, 10, 14, 18, 22, 27, 33, 39, 45]


def test_mantel_values():
    assert [bounds.mantel_cc(n) for n in range(5, 15)] == [5, 7, 10, 13, 17, 21, 26, 31, 37, 43]
    assert bounds.mantel_c(7) == 9


def test_kostochka_values():
    assert [bounds.kostochka_formula(n) for n in range(9, 15)] == [30, 45, 63, 84, 112, 144]
    assert bounds.kostochka_cc_upper(9) == 31
    assert bounds.kostochka_cc_upper(8) == 21
    assert bounds.kostochka_cc_upper(10) == 45
    assert bounds.kostochka_cc_range(8) == (20, 21)
    assert bounds.kostochka_cc_range(13) == (112, 112)
    assert bounds.kostochka_cc_range(14) == (None, 144)


def test_counting_lower_bounds():
    q1, c1 = bounds.cc1_lower(7, 3)
    assert q1 == Fraction(34, 3) and c1 == 12
    q2, c2 = bounds.cc2_lower(7, 3)
    assert q2 == Fraction(28, 3) and c2 == 10
    assert bounds.cc_lower(7, 3) == 12
    # n = r + 1 drops the second bound
    assert bounds.cc_lower(5, 4) == 1


def test_lower_bounds_reject_degenerate():
    with pytest.raises(ParamError):
        bounds.cc1_lower(5, 0)
    with pytest.raises(ParamError):
        bounds.cc2_lower(5, 4)
    with pytest.raises(ParamError):
        bounds.fort_hedlund(2)


def test_second_bound_wins_exactly_past_two_thirds():
    for n in range(3, 101):
        for r in range(1, n - 1):
            assert bounds.lower_threshold_holds(n, r), (n, r)
    # at (3,1) the two rational bounds coincide
    assert bounds.cc1_lower(3, 1)[0] == bounds.cc2_lower(3, 1)[0] == 2


def test_schoenheim():
    assert bounds.schoenheim_general(7, 3, 2) == 7
    assert bounds.schoenheim_general(9, 3, 2) == 12
    assert bounds.schoenheim_L(8, 3) == 14
    assert bounds.schoenheim_general(5, 2, 0) == 1
    assert bounds.schoenheim_step(7, 3, 7) == 13


def test_connected_counting_bound():
    assert bounds.connected_counting_bound(7, 3, 2) == 10
    assert bounds.connected_counting_bound(5, 2, 1) == 4


def test_upper_s_and_n():
    assert bounds.upper_s(7, 4) == 12
    assert bounds.upper_n(7, 4) == 10
    assert bounds.upper_n(8, 4, c_sub=6) == 23
    assert bounds.upper_n(8, 4, c_sub=7) == 24
    with pytest.raises(ParamError):
        bounds.upper_n(8, 4)


def test_parity_flag():
    assert bounds.parity_flag(8, 4) == 1
    assert bounds.parity_flag(7, 4) == 0


@pytest.mark.parametrize('v,t,size', [(4, 2, 3), (5, 2, 4), (6, 2, 7), (7, 2, 9), (5, 1, 3), (9, 0, 1)])
def test_gordon_size(v, t, size):
    assert bounds.gordon_size(v, t) == size


def test_s_minus_n_identity():
    for n in range(3, 41):
        for r in range(2, n):
            assert bounds.thm1_check(n, r, lambda v, k, t: bounds.gordon_size(v, t)), (n, r)
            for c_sub in (0, 1, 5, 17):
                assert bounds.thm1_check(n, r, c_sub), (n, r, c_sub)


def test_s_never_below_n():
    for n in range(3, 41):
        for r in range(2, n):
            c_sub = bounds.gordon_size(n - 2, r - 2) if bounds.parity_flag(n, r) else None
            assert bounds.upper_s(n, r) >= bounds.upper_n(n, r, c_sub), (n, r)


def test_even_gap_inequality():
    for r in range(3, 11):
        for n in range(r + 2, 21, 2):
            assert bounds.thgen_check(n, r), (n, r)
    with pytest.raises(ParamError):
        bounds.thgen_check(9, 4)


def test_small_upper_helpers():
    assert bounds.two_c_bound(7) == 13
    assert bounds.recursive_cc_upper(12, 7) == 19
    assert bounds.sum_upper(6, 3, [1, 3, 4]) == 8
    with pytest.raises(ParamError):
        bounds.sum_upper(6, 3, [1, 3])
    with pytest.raises(ParamError):
        bounds.two_c_bound(0)


def test_closed_form_cc():
    lo, hi = bounds.closed_form_cc(7, 3)
    assert (lo.value, hi.value) == (12, 12)
    assert lo.source == bounds.SRC_KOSTOCHKA
    lo, hi = bounds.closed_form_cc(14, 10)
    assert lo is None and hi.value == 144
    assert bounds.closed_form_cc(6, 1)[0].value == 5
    assert bounds.closed_form_cc(12, 5) == (None, None)


def test_bound_record_without_provider():
    rec = bounds.build_bound_record(7, 3)
    assert rec.lower_cc1.value == 12
    assert rec.lower_cc2.value == 10
    assert rec.upper_s.value == 15
    assert rec.upper_n.value == 14
    assert rec.is_exact
    doc = rec.to_json()
    assert doc['exact'] is True
    assert doc['lower_cc1']['rational'] == '34/3'
    assert doc['upper_recursive'] is None


def test_bound_record_r0():
    rec = bounds.build_bound_record(5, 0)
    assert rec.best_lower.value == 1
    assert rec.best_upper.value == 1


def test_ratios_approach_limits():
    def gap(n):
        return abs(bounds.asymptotic_ratios(n, 3)['S'] - Fraction(1, 2))
    assert gap(40) < gap(20) < gap(10)
    ratios = bounds.asymptotic_ratios(30, 3)
    assert ratios['limit_lower'] == Fraction(1, 4)
    assert ratios['limit_upper'] == Fraction(1, 2)
    assert ratios['lower'] <= ratios['upper']
