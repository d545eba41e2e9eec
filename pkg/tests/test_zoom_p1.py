from decimal import Decimal, getcontext
from fractions import Fraction
from math import gcd, pi

import pytest
from hypothesis import given, settings, strategies as st

from localzoom.arithmetic import totient_sum
from localzoom.quadratic import QuadraticTarget, cmp_distance, liouville_xi
from localzoom.zoom_p1 import (
    HALF, NoGap, UnsupportedFactor, ZoomWindow, active_range, avoidance_sequence,
    count_zoom_rational, count_zoom_surd, critical_points, critical_upper_bound,
    totient_integral, rational_main_term, pell_value_bound, pell_window_decomposition,
    tracking_sequence, tracking_window,
)

getcontext().prec = 60


def brute_rational(w):
    """Primitive u, v > 0, max(u, v) <= B, eps_inner < B^(1/r) u/v <= eps."""
    p, q = w.r.numerator, w.r.denominator
    n = 0
    for v in range(1, w.B + 1):
        for u in range(1, w.B + 1):
            if gcd(u, v) != 1:
                continue
            # (B^(q/p) u/v)^p compared with eps^p
            s = Fraction(w.B ** q * u ** p, v ** p)
            if w.eps_inner ** p < s <= w.eps_outer ** p:
                n += 1
    return n


def brute_surd(t, w):
    n = 0
    for v in range(1, w.B + 1):
        for u in range(1, w.B + 1):
            if gcd(u, v) == 1 and cmp_distance(t, u, v, w.eps_outer, w.B, w.r) <= 0:
                if w.eps_inner == 0 or cmp_distance(t, u, v, w.eps_inner, w.B, w.r) > 0:
                    n += 1
    return n


@pytest.mark.parametrize("eps,inner,B,r", [
    (1, 0, 30, 2), (3, Fraction(1, 2), 40, 1), (Fraction(7, 2), Fraction(3, 2), 50, 1),
    (2, 0, 25, Fraction(3, 2)), (5, 1, 20, Fraction(1, 2)),
])
def test_rational_count_matches_brute_force(eps, inner, B, r):
    w = ZoomWindow(eps, inner, B, r)
    assert count_zoom_rational(w).count == brute_rational(w)


@given(st.integers(1, 6), st.integers(5, 40), st.sampled_from([Fraction(1), Fraction(2), Fraction(3, 2)]))
@settings(max_examples=25, deadline=None)
def test_rational_count_hypothesis(eps, B, r):
    w = ZoomWindow(eps, 0, B, r)
    assert count_zoom_rational(w).count == brute_rational(w)


@pytest.mark.parametrize("ab,eps,inner,B,r", [
    ((1, 2), 1, 0, 40, 1), ((1, 2), 3, 0, 60, HALF), ((2, 3), 2, Fraction(1, 3), 50, 1),
    ((1, 3), 1, 0, 30, Fraction(3, 5)), ((3, 7), 5, 1, 45, HALF), ((1, 5), 1, 0, 80, 2),
])
def test_surd_count_matches_brute_force(ab, eps, inner, B, r):
    t = QuadraticTarget(*ab)
    w = ZoomWindow(eps, inner, B, r)
    assert count_zoom_surd(t, w).count == brute_surd(t, w)


def test_threads_do_not_change_counts():
    t = QuadraticTarget(1, 2)
    w = ZoomWindow(1, 0, 20000, 1)
    assert count_zoom_surd(t, w, threads=1).count == count_zoom_surd(t, w, threads=3).count
    wr = ZoomWindow(1, 0, 10 ** 4, 2)
    assert count_zoom_rational(wr, 1).count == count_zoom_rational(wr, 2).count


def test_window_validation():
    with pytest.raises(ValueError):
        ZoomWindow(1, 2, 10, 1)
    with pytest.raises(TypeError):
        ZoomWindow(0.5, 0, 10, 1)


@pytest.mark.parametrize("lo,hi", [(0, 1), (Fraction(3, 2), Fraction(7, 2)), (1, 5), (Fraction(1, 3), 2)])
def test_totient_integral_against_riemann_sum(lo, hi):
    lo, hi = Fraction(lo), Fraction(hi)
    n = 4000
    h = (hi - lo) / n
    approx = sum(float(totient_sum(lo + (k + Fraction(1, 2)) * h)) / float(lo + (k + Fraction(1, 2)) * h) ** 2
                 for k in range(n)) * float(h)
    assert abs(float(totient_integral(lo, hi)) - approx) < 2e-3


def test_rational_main_terms():
    assert abs(rational_main_term(ZoomWindow(1, 0, 10 ** 6, 2)) - 3 / pi ** 2 * 10 ** 9) < 1e-3
    with pytest.raises(UnsupportedFactor):
        rational_main_term(ZoomWindow(1, 0, 10, HALF))


@pytest.mark.parametrize("B", [10, 100, 1000, 10 ** 4])
def test_critical_gap_below_xi(B):
    t = QuadraticTarget(1, 2)
    xi = liouville_xi(t)
    assert count_zoom_surd(t, ZoomWindow(xi * Fraction(99, 100), 0, B, HALF)).count == 0


@pytest.mark.parametrize("ab", [(1, 2), (2, 3), (1, 7)])
@pytest.mark.parametrize("B", [100, 1000, 10 ** 4])
def test_critical_partition_by_pell_value(ab, B):
    t = QuadraticTarget(*ab)
    eps = 3
    parts = pell_window_decomposition(t, eps, B)
    total = count_zoom_surd(t, ZoomWindow(eps, 0, B, HALF)).count
    assert sum(parts.values()) == total
    assert total <= critical_upper_bound(t, eps)
    M = pell_value_bound(t, eps, B)
    assert all(0 < abs(m) <= M for m in parts)


@given(st.integers(2, 40), st.integers(1, 30))
@settings(max_examples=40, deadline=None)
def test_active_range_is_exact(u, v):
    t = QuadraticTarget(1, 2)
    if gcd(u, v) != 1:
        return
    eps = Fraction(3)
    lo, hi = active_range(t, u, v, eps, 0)
    for B in range(max(1, lo - 3), hi + 4):
        inside = max(u, v) <= B and cmp_distance(t, u, v, eps, B, HALF) <= 0
        assert inside == (lo <= B <= hi)


def test_critical_points_cover_the_windows():
    t = QuadraticTarget(1, 2)
    eps = Fraction(3)
    pts = set(critical_points(t, eps, 2000))
    for B in (50, 300, 2000):
        w = ZoomWindow(eps, 0, B, HALF)
        for v in range(1, B + 1):
            for u in range(1, B + 1):
                if gcd(u, v) == 1 and cmp_distance(t, u, v, eps, B, HALF) <= 0:
                    assert (u, v) in pts


def test_tracking_window_brackets_constant():
    t = QuadraticTarget(1, 2)
    eps, inner = tracking_window(t, 7)
    c = 7 * Decimal(2).sqrt() / 2
    assert Decimal(inner.numerator) / inner.denominator < c < Decimal(eps.numerator) / eps.denominator


def test_tracking_and_avoidance_oscillate():
    t = QuadraticTarget(1, 2)
    eps, inner = tracking_window(t, 7)
    track = tracking_sequence(t, eps, inner, 7, 4)
    assert len(track) == 4 and track == sorted(track)
    for B in track:
        assert count_zoom_surd(t, ZoomWindow(eps, inner, B, HALF)).count >= 1
    avoid = avoidance_sequence(t, eps, inner, 4)
    for B in avoid:
        assert count_zoom_surd(t, ZoomWindow(eps, inner, B, HALF)).count == 0


def test_avoidance_reports_missing_gaps():
    t = QuadraticTarget(1, 2)
    with pytest.raises(NoGap):
        avoidance_sequence(t, 50, 0, 3, B_limit=10 ** 4)


def test_tracking_rejects_outside_constant():
    t = QuadraticTarget(1, 2)
    with pytest.raises(ValueError):
        tracking_sequence(t, 2, 1, 7, 3)
