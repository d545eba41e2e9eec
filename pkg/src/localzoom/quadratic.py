"""Quadratic surds sqrt(b/a): continued fractions, Liouville certificates,
exact distance predicates and the discrepancy of {k alpha}."""

from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import cmp_to_key
from math import gcd, isqrt, log, sqrt

from .arithmetic import is_square, squarefree_decompose


class PerfectSquare(ValueError):
    pass


class InvalidTarget(ValueError):
    pass


def as_fraction(x):
    """Parse ints, Fractions and 'p/q' strings; floats are refused."""
    if isinstance(x, float):
        raise TypeError("exact parameter expected, got float %r" % (x,))
    return Fraction(x)


def as_ratio(r):
    r = as_fraction(r)
    if r <= 0:
        raise ValueError("zoom factor must be positive")
    return r.numerator, r.denominator


@dataclass(frozen=True)
class QuadraticTarget:
    """The surd alpha = sqrt(b/a) with gcd(a, b) = 1 and a < b."""
    a: int
    b: int
    core: int = field(init=False)

    def __post_init__(self):
        a, b = self.a, self.b
        if a < 1 or b < 1 or gcd(a, b) != 1:
            raise InvalidTarget("need coprime positive a, b: %r, %r" % (a, b))
        if a >= b:
            raise InvalidTarget("need a < b")
        if is_square(a * b):
            raise InvalidTarget("b/a is a rational square")
        ca, _ = squarefree_decompose(a)
        cb, _ = squarefree_decompose(b)
        object.__setattr__(self, "core", ca * cb)

    @property
    def n(self):
        return self.a * self.b

    @property
    def alpha(self):
        return sqrt(self.b / self.a)

    def side(self, u, v):
        """Sign of u/v - alpha for v > 0."""
        m = self.a * u * u - self.b * v * v
        if u <= 0:
            return -1
        return (m > 0) - (m < 0)


def sign_surd(c, d, n):
    """Sign of c + d*sqrt(n) for integers c, d and n >= 0."""
    if c >= 0 and d >= 0:
        return 1 if (c or d) else 0
    if c <= 0 and d <= 0:
        return -1
    lhs, rhs = c * c, d * d * n
    if c > 0:
        return (lhs > rhs) - (lhs < rhs)
    return (rhs > lhs) - (rhs < lhs)


def surd_pow(x, y, n, k):
    """(x + y sqrt(n))**k as a pair."""
    rx, ry = 1, 0
    while k:
        if k & 1:
            rx, ry = rx * x + n * ry * y, rx * y + ry * x
        x, y = x * x + n * y * y, 2 * x * y
        k >>= 1
    return rx, ry


def cmp_distance(t, u, v, eps, B, r):
    """Sign of |u/v - alpha| - eps * B**(-1/r), decided in integers."""
    eps = Fraction(eps)
    p, q = as_ratio(r)
    if eps <= 0:
        return 1
    e1, e2 = eps.numerator, eps.denominator
    m = t.a * u * u - t.b * v * v
    sig = 1 if m > 0 else -1
    X, Y = surd_pow(t.a * u, -v, t.n, p)
    if p % 2 and sig < 0:
        X, Y = -X, -Y
    K = B ** q * e2 ** p
    R = e1 ** p * (t.a * v) ** p
    return sign_surd(K * X - R, K * Y, t.n)


@dataclass(frozen=True)
class ContinuedFraction:
    a0: int
    period: tuple

    def quotient(self, i):
        if i == 0:
            return self.a0
        return self.period[(i - 1) % len(self.period)]


def cf_quadratic(P, Q, d):
    """Continued fraction of (P + sqrt(d))/Q, Q > 0 and Q | d - P^2.

    Only surds whose expansion is purely periodic after the first
    quotient are supported (true for sqrt(d) and sqrt(b/a) with a < b)."""
    if Q <= 0 or (d - P * P) % Q:
        raise ValueError("need Q > 0 and Q | d - P^2")
    r = isqrt(d)
    a0 = (P + r) // Q
    P = a0 * Q - P
    Q = (d - P * P) // Q
    start = (P, Q)
    period = []
    while True:
        a = (P + r) // Q
        period.append(a)
        P = a * Q - P
        Q = (d - P * P) // Q
        if (P, Q) == start:
            return ContinuedFraction(a0, tuple(period))
        if len(period) > 4 * d + 10:
            raise ValueError("expansion is not purely periodic")


def cf_sqrt(d):
    if d < 2 or is_square(d):
        raise PerfectSquare("%r is a perfect square" % (d,))
    return cf_quadratic(0, 1, d)


def cf_target(t):
    """Continued fraction of sqrt(b/a) = sqrt(ab)/a."""
    return cf_quadratic(0, t.a, t.n)


def convergents(cf, n):
    out = []
    p0, q0, p1, q1 = 1, 0, cf.a0, 1
    out.append((p1, q1))
    for i in range(1, n):
        a = cf.quotient(i)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def liouville_xi(t):
    """Rational lower bound 1/ceil(4 sqrt(ab)) for |u/v - alpha| v^2."""
    c = isqrt(16 * t.n)
    if c * c < 16 * t.n:
        c += 1
    return Fraction(1, c)


def partial_quotient_bound(t):
    return liouville_xi(t).denominator


def _alpha_decimal(t, digits):
    with localcontext() as ctx:
        ctx.prec = digits
        return (Decimal(t.b) / Decimal(t.a)).sqrt()


def empirical_discrepancy(t, N):
    """Star discrepancy of ({k alpha})_{k<=N}, ordered exactly.

    The maximizing term is found exactly; the returned Fraction is that
    term evaluated with alpha known to 60 digits."""
    if N < 1:
        raise ValueError("N must be positive")
    a, n = t.a, t.n
    al = t.alpha
    fl = []
    for k in range(1, N + 1):
        nk = isqrt(k * k * t.b // a)
        fl.append((k * al - nk, k, nk))

    def cmp(x, y):
        # sign of (kx - ky) alpha - (nx - ny), times a
        return sign_surd(-a * (x[2] - y[2]), x[1] - y[1], n)

    fl.sort()
    if any(cmp(fl[i], fl[i + 1]) >= 0 for i in range(N - 1)):
        fl.sort(key=cmp_to_key(cmp))
    # candidates c/N + s*(k alpha - nk), kept as (c0, c1) = rational + alpha part
    cands = []
    for i, (f, k, nk) in enumerate(fl, 1):
        cands.append((i / N - f, Fraction(i, N) + nk, -k))
        cands.append((f - (i - 1) / N, Fraction(-(i - 1), N) - nk, k))
    top = max(c[0] for c in cands)
    close = [c for c in cands if c[0] >= top - 1e-9]

    def ccmp(x, y):
        dr = x[1] - y[1]
        return sign_surd(a * dr.numerator, (x[2] - y[2]) * dr.denominator, n)

    best = max(close, key=cmp_to_key(ccmp))
    al_dec = _alpha_decimal(t, 60)
    return best[1] + best[2] * Fraction(al_dec)


def discrepancy_upper_bound(N, M):
    """Bounded-quotient estimate (3 + (1/log xi + M/log(M+1)) log N)/N."""
    xi = (1 + sqrt(5)) / 2
    return (3 + (1 / log(xi) + M / log(M + 1)) * log(N)) / N
