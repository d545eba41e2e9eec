"""Points of the toric surface Y4 near Q = [1:1]x[1:1]: anticanonical height,
distance, the nodal curves through Q, and zoom counts."""

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, gcd, isqrt, log, sqrt

from . import _parallel
import numpy as np

from .arithmetic import is_square
from .quadratic import as_fraction, as_ratio
from .zoom_p1 import UnsupportedFactor, ZoomCount, ZoomWindow


class OnBoundary(ValueError):
    pass


class OffRegion(ValueError):
    pass


class OutOfRange(ValueError):
    pass


class TooLarge(ValueError):
    pass


class DegenerateCurve(ValueError):
    pass


class ParameterOutOfRange(ValueError):
    pass


ORACLE_LIMIT = 10 ** 5


@dataclass(frozen=True)
class Y4Point:
    """[x:y] x [s:t] with both pairs primitive."""
    x: int
    y: int
    s: int
    t: int

    def __post_init__(self):
        if gcd(self.x, self.y) != 1 or gcd(self.s, self.t) != 1:
            raise ValueError("both coordinate pairs must be primitive")
        if (self.x == 0 or self.y == 0) and (self.s == 0 or self.t == 0):
            raise OnBoundary("point is the center of a blown-up point")

    def in_region(self):
        """z > w > 1 with w = y/x and z = t/s."""
        x, y, s, t = self._positive()
        return y > x and t * x > y * s

    def _positive(self):
        x, y, s, t = self.x, self.y, self.s, self.t
        if x < 0:
            x, y = -x, -y
        if s < 0:
            s, t = -s, -t
        return x, y, s, t


@dataclass(frozen=True)
class NodalCurve:
    """a x y (t - s)^2 = b s t (y - x)^2."""
    a: int
    b: int

    def __post_init__(self):
        if self.a == self.b:
            raise DegenerateCurve("a = b gives a reducible curve")
        if self.a < 1 or self.a > self.b or gcd(self.a, self.b) != 1:
            raise ValueError("need coprime 0 < a < b")

    @property
    def square_pair(self):
        return is_square(self.a) and is_square(self.b)

    def contains(self, P):
        x, y, s, t = P.x, P.y, P.s, P.t
        return self.a * x * y * (t - s) ** 2 == self.b * s * t * (y - x) ** 2


def _check_nonzero(P):
    if 0 in (P.x, P.y, P.s, P.t):
        raise OnBoundary("a coordinate vanishes")


def height(P):
    """Anticanonical height."""
    _check_nonzero(P)
    x, y, s, t = (abs(c) for c in (P.x, P.y, P.s, P.t))
    top = max(x * x * s * t, y * y * s * t, t * t * x * y, s * s * x * y)
    g = gcd(x, s) * gcd(x, t) * gcd(y, s) * gcd(y, t)
    assert top % g == 0
    return top // g


def distance(P):
    """max(|y/x - 1|, |t/s - 1|)."""
    if P.x == 0 or P.s == 0:
        raise OnBoundary("x or s vanishes")
    return max(abs(Fraction(P.y, P.x) - 1), abs(Fraction(P.t, P.s) - 1))


def thin_set_member(P):
    return is_square(P.x * P.y * P.s * P.t)


def curve_of(P):
    """The (a, b) with P on C_{a,b}; P must lie in the region z > w > 1."""
    if 0 in (P.x, P.s):
        raise OnBoundary("x or s vanishes")
    w1 = Fraction(P.y, P.x) - 1
    z1 = Fraction(P.t, P.s) - 1
    if w1 <= 0 or z1 <= 0:
        raise OffRegion("shifted coordinates must be positive")
    q = z1 * z1 * (w1 + 1) / (w1 * w1 * (z1 + 1))
    if q == 1:
        raise DegenerateCurve("point lies on z = w")
    if q < 1:
        raise OffRegion("point lies below the diagonal z = w")
    return NodalCurve(q.denominator, q.numerator)


def in_parameter_range(c, u, v):
    """sqrt(b/a) < u/v < b/a."""
    return v > 0 and c.a * u * u > c.b * v * v and c.b * v > c.a * u


def gcd_product(c, u, v):
    """gcd(u, b) gcd(v, a) gcd(u - v, b - a)."""
    return gcd(u, c.b) * gcd(v, c.a) * gcd(u - v, c.b - c.a)


def psi_ab(c, u, v):
    """Point of C_{a,b} attached to the slope u/v through the node."""
    if gcd(u, v) != 1:
        raise ValueError("u and v must be coprime")
    if not in_parameter_range(c, u, v):
        raise OutOfRange("u/v must lie in (sqrt(b/a), b/a)")
    a, b = c.a, c.b
    x, y = u * (b * v - a * u), b * v * (u - v)
    s, t = v * (b * v - a * u), a * u * (u - v)
    g1, g2 = gcd(x, y), gcd(s, t)
    return Y4Point(x // g1, y // g1, s // g2, t // g2)


def restricted_height(c, u, v):
    """b (u a (u - v))^2 / (gcd(u,b) gcd(v,a) gcd(u-v,b-a))^2.

    Agrees with height(psi_ab(c, u, v)) when a and b are squarefree."""
    num = c.b * (u * c.a * (u - v)) ** 2
    d = gcd_product(c, u, v)
    return Fraction(num, d * d)


def curve_distance(c, u, v):
    """t/s - 1 at psi_ab(c, u, v), written in u/v."""
    return Fraction(c.a * u * u - c.b * v * v, v * (c.b * v - c.a * u))


def _scaled_cmp(d, eps, B, r):
    """Sign of B^(1/r) d - eps, for d, eps >= 0."""
    p, q = as_ratio(r)
    lhs = B ** q * d ** p
    rhs = Fraction(eps) ** p
    return (lhs > rhs) - (lhs < rhs)


def _in_window(d, eps1, eps2, B, r):
    if _scaled_cmp(d, eps1, B, r) > 0:
        return False
    return d > 0 and _scaled_cmp(d, eps2, B, r) > 0


def _u_bound(c, B):
    """Largest u that can give a point of height <= B on the curve."""
    a, b = c.a, c.b
    # t = a u (u - v)/g with g | a^2 b (b - a), t <= sqrt(B) and
    # u - v > u (1 - sqrt(a/b))
    lam = 1 - sqrt(a / b)
    return int(sqrt(sqrt(B) * a * b * (b - a) / lam) * 1.001) + 2


def _curve_points(c, eps1, eps2, B, r, tau1=None, tau2=None):
    """(u, v) in range with the point in the window and of height <= B.

    Vectorized over u; floats only discard candidates that are clearly out,
    every kept point is confirmed exactly."""
    a, b = c.a, c.b
    u = np.arange(2, _u_bound(c, B) + 1, dtype=np.int64)
    # largest v with b v^2 < a u^2
    v0 = np.floor(u * sqrt(a / b)).astype(np.int64) + 1
    for _ in range(3):
        v0 = np.where(b * v0 * v0 >= a * u * u, v0 - 1, v0)
    vmin = a * u // b + 1
    rho = float(eps1) * B ** (-1 / float(r)) * (1 + 1e-9)
    root = isqrt(B)
    active = np.ones(u.shape, dtype=bool)
    out = []
    k = 0
    while True:
        v = v0 - k
        ok = active & (v >= vmin) & (v >= 1)
        if not ok.any():
            break
        uu, vv = u[ok], v[ok]
        d = (a * uu * uu - b * vv * vv) / (vv * (b * vv - a * uu))
        near = d <= rho
        # the distance only grows as v decreases
        active[np.flatnonzero(ok)[~near]] = False
        uu, vv = uu[near], vv[near]
        keep = np.gcd(uu, vv) == 1
        uu, vv = uu[keep], vv[keep]
        x, y = uu * (b * vv - a * uu), b * vv * (uu - vv)
        s, t = vv * (b * vv - a * uu), a * uu * (uu - vv)
        y = y // np.gcd(x, y)
        t = t // np.gcd(s, t)
        # the height is at least y^2 and t^2
        keep = (y <= root) & (t <= root)
        for p, q in zip(uu[keep].tolist(), vv[keep].tolist()):
            dist = curve_distance(c, p, q)
            if not _in_window(dist, eps1, eps2, B, r):
                continue
            lam = Fraction(p, q)
            if (tau1 is not None and lam > tau1) or (tau2 is not None and lam < tau2):
                continue
            if height(psi_ab(c, p, q)) <= B:
                out.append((p, q))
        k += 1
    return sorted(out)


def count_E(c, eps1, eps2, B, r, tau1=None, tau2=None):
    """Points of C_{a,b} with eps2 < B^(1/r) d <= eps1 and height <= B."""
    eps1, eps2 = as_fraction(eps1), as_fraction(eps2)
    return len(_curve_points(c, eps1, eps2, B, r, tau1, tau2))


def approx_constant_on_curve(c):
    return Fraction(4) if c.square_pair else Fraction(2)


def curve_cutoff(eps, B, r, eta=None):
    """Largest b to enumerate.

    Without eta every curve that can carry a point in the window is kept:
    b <= eps^2 B^(1 - 2/r). With eta the sub-sum b <= B^(eta (1 - 2/r))."""
    p, q = as_ratio(r)
    eps = as_fraction(eps)
    if eta is None:
        # b^p <= eps^(2p) B^(p - 2q)
        bound = eps ** (2 * p) * Fraction(B) ** (p - 2 * q)
    else:
        e = as_fraction(eta) * (1 - Fraction(2) / Fraction(r))
        # b^(den e) <= B^(num e)
        k, m = e.numerator, e.denominator
        b = 1
        while (b + 1) ** m <= B ** k:
            b += 1
        return b
    b = 1
    while Fraction(b + 1) ** p <= bound:
        b += 1
    return b


def curves_upto(bmax, skip_square_pairs=False):
    out = []
    for b in range(2, bmax + 1):
        for a in range(1, b):
            if gcd(a, b) == 1:
                c = NodalCurve(a, b)
                if not (skip_square_pairs and c.square_pair):
                    out.append(c)
    return out


def _count_chunk(curves, eps1, eps2, B, r, tau1, tau2):
    return [len(_curve_points(c, eps1, eps2, B, r, tau1, tau2)) for c in curves]


def count_zoom_y4(eps, B, r, eps_inner=0, eta=None, region=None, threads=1):
    """Zoom count on the region z > w > 1 by summing over nodal curves.

    region is an optional (tau1, tau2) bracket on u/v. Returns (ZoomCount,
    breakdown) where breakdown maps (a, b) to the nonzero curve counts."""
    r = as_fraction(r)
    if r < 2:
        raise UnsupportedFactor("the curve decomposition needs r >= 2")
    w = ZoomWindow(eps, eps_inner, B, r)
    tau1 = tau2 = None
    if region is not None:
        tau1, tau2 = (as_fraction(x) for x in region)
    bmax = curve_cutoff(w.eps_outer, B, r, eta)
    curves = curves_upto(bmax, skip_square_pairs=eta is not None)
    if eta is not None and region is not None:
        # the sub-sum keeps curves with tau2^2 < b/a < tau1^2
        curves = [c for c in curves if tau2 ** 2 * c.a < c.b < tau1 ** 2 * c.a]
    n = _parallel.resolve_threads(threads)
    size = max(1, -(-len(curves) // (4 * n)))
    parts = [curves[i:i + size] for i in range(0, len(curves), size)]
    res = _parallel.run_chunks(
        _count_chunk, [(p, w.eps_outer, w.eps_inner, B, r, tau1, tau2) for p in parts], threads)
    breakdown = {}
    for part, counts in zip(parts, res):
        for c, k in zip(part, counts):
            if k:
                breakdown[(c.a, c.b)] = k
    breakdown = dict(sorted(breakdown.items()))
    main = None
    if eta is not None and region is not None and 2 < r < Fraction(144, 55):
        main = lower_bound_main_term(r, eta, w.eps_outer, w.eps_inner, tau1, tau2, B)
    return ZoomCount(sum(breakdown.values()), main, w), breakdown


def critical_count_bound(eps):
    """A bound, independent of B, for the r = 2 count.

    On C_{a,b} a counted point has u^2 |u/v - sqrt(b/a)| <= eps a b (b - a)
    sqrt(b/a) / 2 and u inside a window of fixed ratio around B^(1/4), which
    is the situation bounded by critical_upper_bound on the line. Square
    pairs have a rational slope and at most U^2 points with U as below."""
    from .quadratic import QuadraticTarget
    from .zoom_p1 import critical_upper_bound
    eps = as_fraction(eps)
    total = 0
    for c in curves_upto(curve_cutoff(eps, 1, 2)):
        a, b = c.a, c.b
        e_ab = Fraction(ceil(float(eps) * a * b * (b - a) * sqrt(b / a) / 2) + 1)
        if c.square_pair:
            U = int(e_ab) * isqrt(b) + 2
            total += U * U
        else:
            total += critical_upper_bound(QuadraticTarget(a, b), e_ab)
    return total


def oracle_points(eps, B, r, eps_inner=0):
    """Direct enumeration of primitive points in z > w > 1 in the window."""
    if B > ORACLE_LIMIT:
        raise TooLarge("oracle is limited to B <= %d" % ORACLE_LIMIT)
    eps1, eps2 = as_fraction(eps), as_fraction(eps_inner)
    root = isqrt(B)  # height >= t^2 and >= y^2
    out = []
    for t in range(2, root + 1):
        for s in range(t - 1, 0, -1):
            d = Fraction(t - s, s)
            if _scaled_cmp(d, eps1, B, r) > 0:
                break
            if gcd(s, t) != 1 or not _in_window(d, eps1, eps2, B, r):
                continue
            for y in range(2, root + 1):
                # x < y and y/x < t/s
                for x in range(y * s // t + 1, y):
                    if gcd(x, y) == 1:
                        P = Y4Point(x, y, s, t)
                        if height(P) <= B:
                            out.append(P)
    return out


def brute_force_zoom_y4(eps, B, r, eps_inner=0):
    w = ZoomWindow(eps, eps_inner, B, r)
    return ZoomCount(len(oracle_points(eps, B, r, eps_inner)), None, w)


def region_integral(eps1, eps2, tau1, tau2):
    """Closed form of the integral of dx dy / y^2 over eps2 <= x <= eps1,
    tau2 <= y <= tau1."""
    return float((Fraction(eps1) - Fraction(eps2)) * (1 / Fraction(tau2) - 1 / Fraction(tau1)))


def lower_bound_main_term(r, eta, eps1, eps2, tau1, tau2, B, prime_cutoff=10 ** 6):
    from .divisor_asymptotics import c2_constant
    r, eta = as_fraction(r), as_fraction(eta)
    if not (2 < r < Fraction(144, 55)) or not (0 < eta < Fraction(1, 35)):
        raise ParameterOutOfRange("need 2 < r < 144/55 and 0 < eta < 1/35")
    if not Fraction(tau1) > Fraction(tau2) > 1:
        raise ParameterOutOfRange("need tau1 > tau2 > 1")
    c2 = c2_constant(r, eta, prime_cutoff)
    expo = float((1 + eta) * (Fraction(1, 2) - 1 / r))
    return c2 * region_integral(eps1, eps2, tau1, tau2) * B ** expo * log(B) ** 3
