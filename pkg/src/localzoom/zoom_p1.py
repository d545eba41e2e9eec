"""Zoom counts on the projective line around a rational point or a
quadratic surd, with main terms and the critical-zoom constructions."""

from dataclasses import dataclass
from fractions import Fraction
from math import floor, isqrt, log, pi, sqrt

import numpy as np

from . import _parallel
from .arithmetic import (
    ceil_div, ceil_root, count_coprime, factor_with_table, factorize, iroot,
    totient_sum, spf_sieve, squarefree_decompose, tau)
from .pell import advance_solution, generalized_generator, solve_pell_all, unit_star
from .quadratic import QuadraticTarget, as_fraction, as_ratio, cmp_distance, liouville_xi


class UnsupportedFactor(ValueError):
    pass


class NoGap(RuntimeError):
    pass


class NoPrimitiveSolution(RuntimeError):
    pass


@dataclass(frozen=True)
class ZoomWindow:
    """Counts points with eps_inner < B^(1/r) d <= eps_outer and height <= B."""
    eps_outer: Fraction
    eps_inner: Fraction
    B: int
    r: Fraction

    def __init__(self, eps_outer, eps_inner=0, B=1, r=1):
        eo, ei, r = as_fraction(eps_outer), as_fraction(eps_inner), as_fraction(r)
        if eo <= 0 or ei < 0 or ei >= eo:
            raise ValueError("need 0 <= eps_inner < eps_outer")
        if int(B) != B or B < 1:
            raise ValueError("B must be a positive integer")
        if r <= 0:
            raise ValueError("r must be positive")
        object.__setattr__(self, "eps_outer", eo)
        object.__setattr__(self, "eps_inner", ei)
        object.__setattr__(self, "B", int(B))
        object.__setattr__(self, "r", r)

    @property
    def scale(self):
        """B^(-1/r) as a float."""
        return self.B ** (-1 / float(self.r))


@dataclass
class ZoomCount:
    count: int
    main_term: float
    window: ZoomWindow
    slope: float = None

    @property
    def ratio(self):
        return self.count / self.main_term if self.main_term else float("nan")


# rational target [0:1]

def _rational_chunk(u_lo, u_hi, w):
    p, q = w.r.numerator, w.r.denominator
    e1, e2 = w.eps_outer.numerator, w.eps_outer.denominator
    f1, f2 = w.eps_inner.numerator, w.eps_inner.denominator
    B = w.B
    Bq = B ** q
    spf = spf_sieve(u_hi) if u_hi > 5000 else None
    total = 0
    for u in range(u_lo, u_hi + 1):
        up = Bq * u ** p
        vmin = max(1, ceil_root(ceil_div(e2 ** p * up, e1 ** p), p))
        vmax = B
        if f1:
            vmax = min(vmax, iroot(ceil_div(f2 ** p * up, f1 ** p) - 1, p))
        if vmin > vmax:
            continue
        fac = factor_with_table(u, spf) if spf is not None else factorize(u)
        total += count_coprime(fac, vmin, vmax)
    return total


def count_zoom_rational(w, threads=1):
    """Primitive u, v > 0 with eps_inner < B^(1/r) u/v <= eps_outer, max(u, v) <= B."""
    p, q = w.r.numerator, w.r.denominator
    e1, e2 = w.eps_outer.numerator, w.eps_outer.denominator
    # u <= v eps B^(-1/r) <= eps B^(1 - 1/r)
    umax = min(w.B, iroot(e1 ** p * w.B ** p // (e2 ** p * w.B ** q), p))
    parts = _parallel.split_range(1, umax, 4 * _parallel.resolve_threads(threads))
    total = sum(_parallel.run_chunks(_rational_chunk, [(lo, hi, w) for lo, hi in parts], threads))
    main = rational_main_term(w) if w.r >= 1 else 0.0
    return ZoomCount(total, main, w)


def totient_integral(lo, hi):
    """Exact value of the integral of sigma(x)/x^2 over [lo, hi]."""
    lo, hi = Fraction(lo), Fraction(hi)
    total = Fraction(0)
    n = max(1, floor(lo))
    while n <= hi:
        a, b = max(lo, n), min(hi, n + 1)
        if b > a:
            total += totient_sum(n) * (1 / a - 1 / b)
        n += 1
    return total


def rational_main_term(w):
    if w.r < 1:
        raise UnsupportedFactor("main term needs r >= 1")
    if w.r == 1:
        return float(w.B * totient_integral(w.eps_inner, w.eps_outer))
    return 3 / pi ** 2 * float(w.eps_outer - w.eps_inner) * w.B ** (2 - 1 / float(w.r))


# quadratic target

def _inside(t, u, v, eps, B, r):
    return cmp_distance(t, u, v, eps, B, r) <= 0


def _scan_v(t, w, v_lo, v_hi, collect=False):
    """Vectorized scan over v with a float prefilter and exact checks near
    the window boundaries."""
    al = t.alpha
    ro = float(w.eps_outer) * w.scale
    ri = float(w.eps_inner) * w.scale
    width = int(2 * ro * v_hi) + 3
    found = []
    total = 0
    step = 1 << 20
    for s in range(v_lo, v_hi + 1, step):
        v = np.arange(s, min(v_hi, s + step - 1) + 1, dtype=np.int64)
        vf = v.astype(np.float64)
        base = np.floor((al - ro) * vf).astype(np.int64) - 1
        for k in range(width + 1):
            u = base + k
            ok = (u >= 1) & (u <= w.B)
            if not ok.any():
                continue
            uu, vv = u[ok], v[ok]
            d = np.abs(uu.astype(np.float64) - al * vv.astype(np.float64)) / vv
            tol = 1e-12 * (al + ro + 1)
            hi_ok = d <= ro * (1 - 1e-12) - tol
            hi_amb = np.abs(d - ro) <= ro * 1e-12 + tol
            if w.eps_inner:
                lo_ok = d > ri * (1 + 1e-12) + tol
                lo_amb = np.abs(d - ri) <= ri * 1e-12 + tol
            else:
                lo_ok = np.ones_like(hi_ok)
                lo_amb = np.zeros_like(hi_ok)
            sure = hi_ok & lo_ok
            amb = (hi_amb & (lo_ok | lo_amb)) | (lo_amb & (hi_ok | hi_amb))
            sure &= ~amb
            cop = np.gcd(uu, vv) == 1
            sel = sure & cop
            total += int(sel.sum())
            if collect:
                found.extend(zip(uu[sel].tolist(), vv[sel].tolist()))
            for a_, b_ in zip(uu[amb & cop].tolist(), vv[amb & cop].tolist()):
                if _inside(t, a_, b_, w.eps_outer, w.B, w.r) and not (
                        w.eps_inner and _inside(t, a_, b_, w.eps_inner, w.B, w.r)):
                    total += 1
                    if collect:
                        found.append((a_, b_))
    return (total, found) if collect else total


def _v_interval(t, u, eps, B, r, vcap):
    """Closed integer range of v in [1, vcap] with |u/v - alpha| <= eps B^(-1/r)."""
    rho = float(eps) * B ** (-1 / float(r))
    al = t.alpha
    lo_est = u / (al + rho)
    hi_est = u / (al - rho) if al > rho else float(vcap)
    vl = max(1, int(lo_est))
    vr = min(vcap, int(hi_est) + 1)
    if vl > vr:
        return 1, 0

    def ins(v):
        return _inside(t, u, v, eps, B, r)

    while vl > 1 and ins(vl - 1):
        vl -= 1
    while vl <= vr and not ins(vl):
        vl += 1
    if vl > vr:
        return 1, 0
    while vr < vcap and ins(vr + 1):
        vr += 1
    while vr >= vl and not ins(vr):
        vr -= 1
    return vl, vr


def _scan_u(t, w, u_lo, u_hi):
    spf = spf_sieve(u_hi) if u_hi > 5000 else None
    total = 0
    for u in range(u_lo, u_hi + 1):
        vl, vr = _v_interval(t, u, w.eps_outer, w.B, w.r, w.B)
        if vl > vr:
            continue
        fac = factor_with_table(u, spf) if spf is not None else factorize(u)
        c = count_coprime(fac, vl, vr)
        if w.eps_inner:
            il, ir = _v_interval(t, u, w.eps_inner, w.B, w.r, w.B)
            c -= count_coprime(fac, il, ir)
        total += c
    return total


def count_zoom_surd(t, w, threads=1):
    """Primitive u, v > 0 with eps_inner B^(-1/r) < |u/v - alpha| <= eps_outer B^(-1/r)
    and max(u, v) <= B."""
    ro = float(w.eps_outer) * w.scale
    nthreads = _parallel.resolve_threads(threads)
    if 2 * ro * w.B <= 32:
        vmax = min(w.B, int(w.B / (t.alpha - ro)) + 2 if t.alpha > ro else w.B)
        parts = _parallel.split_range(1, vmax, 4 * nthreads)
        total = sum(_parallel.run_chunks(_scan_v, [(t, w, lo, hi) for lo, hi in parts], threads))
    else:
        umax = min(w.B, int((t.alpha + ro) * w.B) + 2)
        parts = _parallel.split_range(1, umax, 4 * nthreads)
        total = sum(_parallel.run_chunks(_scan_u, [(t, w, lo, hi) for lo, hi in parts], threads))
    main = subcritical_main_term(t, w) if w.r > Fraction(1, 2) else 0.0
    return ZoomCount(total, main, w)


def subcritical_main_term(t, w):
    if w.r <= Fraction(1, 2):
        raise UnsupportedFactor("main term needs r > 1/2")
    r = float(w.r)
    return w.B ** (2 - 1 / r) * 3 / (pi ** 2 * max(1.0, t.b / t.a)) * 2 * float(w.eps_outer - w.eps_inner)


# critical zoom r = 1/2

HALF = Fraction(1, 2)


def pell_value_bound(t, eps, B=1):
    """Largest |a u^2 - b v^2| a point can have when it is counted at height B."""
    eps = as_fraction(eps)
    # |m| <= 2 eps sqrt(ab) + a eps^2 / B^2
    return isqrt(int(4 * eps * eps * t.n)) + 1 + int(t.a * eps * eps / (B * B)) + 1


def pell_window_decomposition(t, eps, B, eps_inner=0):
    """Critical-zoom count at height B split by m = a u^2 - b v^2."""
    w = ZoomWindow(eps, eps_inner, B, HALF)
    ro = float(w.eps_outer) * w.scale
    vmax = min(w.B, int(w.B / (t.alpha - ro)) + 2 if t.alpha > ro else w.B)
    _, pts = _scan_v(t, w, 1, vmax, collect=True)
    out = {}
    for u, v in pts:
        m = t.a * u * u - t.b * v * v
        out[m] = out.get(m, 0) + 1
    return dict(sorted(out.items()))


def critical_upper_bound(t, eps):
    eps = as_fraction(eps)
    xi = liouville_xi(t)
    if eps < xi:
        return 0.0
    A, _ = squarefree_decompose(t.a)
    unit = float(unit_star(t.core))
    k = floor((log(eps) - log(xi)) / (2 * log(unit))) + 1
    mmax = floor(2 * float(eps) * sqrt(t.n) + 1)
    s = sum(2 * tau(A * m) for m in range(1, mmax + 1))
    return float(6 * s * k)


def active_range(t, u, v, eps, eps_inner):
    """Integer heights B at which (u, v) is counted by the critical window."""
    d = abs(u / v - t.alpha)
    lo = max(u, v)
    hi_est = int(sqrt(float(eps) / d)) + 1 if d > 0 else lo
    hi = hi_est

    def ins(e, B):
        return _inside(t, u, v, e, B, HALF)

    while hi >= 1 and not ins(eps, hi):
        hi -= 1
    while ins(eps, hi + 1):
        hi += 1
    if hi < lo:
        return lo, lo - 1
    if eps_inner:
        b0 = max(lo, int(sqrt(float(eps_inner) / d)) - 1)
        while b0 > lo and not ins(eps_inner, b0 - 1):
            b0 -= 1
        while b0 <= hi and ins(eps_inner, b0):
            b0 += 1
        lo = max(lo, b0)
    return lo, hi


def critical_points(t, eps, Bmax):
    """Primitive (u, v) with max(u, v) <= Bmax that can be counted at some height."""
    M = pell_value_bound(t, eps)
    sols = solve_pell_all(t.n, t.a * M, Bmax)
    out = []
    for am, pairs in sols.items():
        if am % t.a:
            continue
        for X, v in pairs:
            if X % t.a:
                continue
            u = X // t.a
            if u <= Bmax and np.gcd(u, v) == 1:
                out.append((u, v))
    return sorted(out)


def tracking_window(t, m, delta=Fraction(1, 100)):
    """Rational (eps, eps_inner) bracketing |m| alpha / (2a) within a factor 1 +- delta."""
    delta = as_fraction(delta)
    scale = 10 ** 12
    c2 = Fraction(m * m * t.b, 4 * t.a ** 3)
    c = Fraction(isqrt(int(c2 * scale * scale)), scale)
    return c * (1 + delta), c * (1 - delta)


def _family_solutions(t, m, count, search=10 ** 6):
    sols = solve_pell_all(t.n, abs(t.a * m), search).get(t.a * m, [])
    prim = [(X // t.a, v) for X, v in sols if X % t.a == 0 and np.gcd(X // t.a, v) == 1]
    if not prim:
        raise NoPrimitiveSolution("no primitive solution of %d u^2 - %d v^2 = %d" % (t.a, t.b, m))
    gen = generalized_generator(t.a, t.b)
    sol = prim[0]
    out = [sol]
    while len(out) < count:
        sol = advance_solution(t.a, t.b, m, sol, gen)
        out.append(sol)
    return out


def tracking_sequence(t, eps, eps_inner, m, n, threads=1):
    """Heights B at which the family of a u^2 - b v^2 = m keeps a point in the window."""
    eps, eps_inner = as_fraction(eps), as_fraction(eps_inner)
    # need 2 a eta / alpha < |m| < 2 a eps / alpha, i.e. eta^2 < m^2 b / (4 a^3) < eps^2
    c2 = Fraction(m * m * t.b, 4 * t.a ** 3)
    if not (eps_inner ** 2 < c2 < eps ** 2):
        raise ValueError("|m| alpha / (2a) must lie strictly inside (eps_inner, eps)")
    if n <= 0:
        return []
    out = []
    k = 0
    while len(out) < n:
        k += 1
        sols = _family_solutions(t, m, k + 1)
        u, v = sols[k]
        lo, hi = active_range(t, u, v, eps, eps_inner)
        if lo <= hi:
            c = count_zoom_surd(t, ZoomWindow(eps, eps_inner, lo, HALF), threads).count
            if c >= 1:
                out.append(lo)
        if k > 60:
            break
    return out


def avoidance_sequence(t, eps, eps_inner, n, B_start=10, tol=1e-6, threads=1, B_limit=10 ** 8):
    """Heights B at which the critical window holds no point at all."""
    eps, eps_inner = as_fraction(eps), as_fraction(eps_inner)
    if n <= 0:
        return []
    period = log(float(unit_star(t.core)))
    Bmax = max(10 * B_start, 10 ** 4)
    while Bmax <= B_limit:
        spans = []
        for u, v in critical_points(t, eps, Bmax):
            lo, hi = active_range(t, u, v, eps, eps_inner)
            if lo <= hi and lo <= Bmax:
                spans.append((lo, hi))
        spans.sort()
        gaps = []
        cur = B_start
        for lo, hi in spans:
            if hi < cur:
                continue
            if lo > cur:
                gaps.append((cur, lo - 1))
            cur = max(cur, hi + 1)
        if cur <= Bmax:
            gaps.append((cur, Bmax))
        picks = []
        for g0, g1 in gaps:
            width = log((g1 + 1) / g0) / period
            if width < tol:
                continue
            B = int(round(sqrt(g0 * (g1 + 1))))
            B = min(max(B, g0), g1)
            if picks and B < 2 * picks[-1]:
                continue
            picks.append(B)
            if len(picks) == n:
                break
        if len(picks) == n:
            for B in picks:
                c = count_zoom_surd(t, ZoomWindow(eps, eps_inner, B, HALF), threads).count
                if c:
                    raise NoGap("validation failed at B=%d (count %d)" % (B, c))
            return picks
        Bmax *= 10
    raise NoGap("fewer than %d gaps of width >= %g below %d" % (n, tol, B_limit))
