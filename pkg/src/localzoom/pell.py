"""Solutions of x^2 - D y^2 = m and a x^2 - b y^2 = c: units, orbits, families."""

from dataclasses import dataclass
from decimal import Decimal, localcontext
from math import gcd, isqrt

import numpy as np

from .arithmetic import factorize, is_square, kronecker, squarefree_decompose, tau
from .quadratic import cf_sqrt, convergents


class InconsistentOrbit(ValueError):
    pass


class NotASolution(ValueError):
    pass


@dataclass(frozen=True)
class QuadraticInteger:
    """x + y sqrt(D), or (x + y sqrt(D))/2 when half is set."""
    x: int
    y: int
    D: int
    half: bool = False

    def __post_init__(self):
        if self.half:
            if self.D % 4 != 1 or (self.x - self.y) % 2:
                raise ValueError("half-integral element needs D = 1 mod 4 and x = y mod 2")
            if self.x % 2 == 0 and self.y % 2 == 0:
                object.__setattr__(self, "x", self.x // 2)
                object.__setattr__(self, "y", self.y // 2)
                object.__setattr__(self, "half", False)

    def _num(self):
        return (self.x, self.y, 2 if self.half else 1)

    def __mul__(self, other):
        if other.D != self.D:
            raise ValueError("different fields")
        x1, y1, s1 = self._num()
        x2, y2, s2 = other._num()
        x, y, s = x1 * x2 + self.D * y1 * y2, x1 * y2 + x2 * y1, s1 * s2
        if s == 4:
            if x % 2 or y % 2:
                raise ValueError("product left the ring")
            x, y, s = x // 2, y // 2, 2
        return QuadraticInteger(x, y, self.D, s == 2)

    def __pow__(self, k):
        r = QuadraticInteger(1, 0, self.D)
        z = self
        while k:
            if k & 1:
                r = r * z
            z = z * z
            k >>= 1
        return r

    def __neg__(self):
        return QuadraticInteger(-self.x, -self.y, self.D, self.half)

    def conj(self):
        return QuadraticInteger(self.x, -self.y, self.D, self.half)

    def norm(self):
        n = self.x * self.x - self.D * self.y * self.y
        return n // 4 if self.half else n

    def __float__(self):
        v = self.x + self.y * self.D ** 0.5
        return v / 2 if self.half else v

    def sign(self):
        from .quadratic import sign_surd
        return sign_surd(self.x, self.y, self.D)

    def pair(self):
        if self.half:
            raise ValueError("not in Z[sqrt(D)]")
        return (self.x, self.y)


def _squarefree(D):
    return D >= 2 and all(e == 1 for _, e in factorize(D))


def fundamental_unit(D):
    """Smallest unit > 1 of the ring of integers of Q(sqrt(D))."""
    if not _squarefree(D):
        raise ValueError("D must be squarefree and >= 2")
    cf = cf_sqrt(D)
    L = len(cf.period)
    x, y = convergents(cf, L)[-1]
    u = QuadraticInteger(x, y, D)
    if D % 4 != 1:
        return u
    # Z[sqrt D] has index 1 or 3 in the unit group of the maximal order
    digits = len(str(x)) + 30
    with localcontext() as ctx:
        ctx.prec = digits
        val = Decimal(x) + Decimal(y) * Decimal(D).sqrt()
        eta = val ** (Decimal(1) / 3)
        nrm = u.norm()
        other = Decimal(nrm) / eta
        tr = int((eta + other).to_integral_value())
        yy = int(((eta - other) / Decimal(D).sqrt()).to_integral_value())
    for sx, sy in ((tr, yy),):
        if (sx - sy) % 2 == 0 and sy > 0:
            cand = QuadraticInteger(sx, sy, D, True)
            if cand ** 3 == u:
                return cand
    return u


def unit_star(D):
    """Generator > 1 of the norm-one units lying in Z[sqrt D]."""
    e = fundamental_unit(D)
    if e.norm() == -1:
        e = e * e
    if e.half:
        e = e ** 3
    return e


def ideal_count(D, m):
    """Number of ideals of norm |m| in the maximal order of Q(sqrt D)."""
    m = abs(m)
    if m == 0:
        raise ValueError("m must be nonzero")
    disc = D if D % 4 == 1 else 4 * D
    m1 = 1
    for p, e in factorize(m):
        k = kronecker(disc, p)
        if k == -1 and e % 2:
            return 0
        if k == 1:
            m1 *= p ** e
    return tau(m1)


def _square_roots(vals):
    """Exact integer square roots of an int64 array, -1 where not a square."""
    r = np.floor(np.sqrt(vals.astype(np.float64))).astype(np.int64)
    out = np.full(vals.shape, -1, dtype=np.int64)
    for dr in (-1, 0, 1):
        c = r + dr
        hit = (c >= 0) & (c * c == vals)
        out[hit] = c[hit]
    return out


def solve_pell_all(D, M, y_bound):
    """All (x, y), x, y > 0, y <= y_bound, with 0 < |x^2 - D y^2| <= M,
    grouped by m."""
    out = {}
    small = min(y_bound, M + 1)
    for y in range(1, small + 1):
        lo = D * y * y - M
        x = max(1, isqrt(lo - 1) + 1 if lo > 0 else 1)
        while x * x <= D * y * y + M:
            m = x * x - D * y * y
            if m:
                out.setdefault(m, []).append((x, y))
            x += 1
    step = 1 << 20
    for start in range(small + 1, y_bound + 1, step):
        ys = np.arange(start, min(y_bound, start + step - 1) + 1, dtype=np.int64)
        dy2 = D * ys * ys
        x0 = np.floor(np.sqrt(dy2.astype(np.float64))).astype(np.int64)
        for dx in (-2, -1, 0, 1, 2, 3):
            xs = x0 + dx
            ms = xs * xs - dy2
            ok = (np.abs(ms) <= M) & (ms != 0) & (xs > 0)
            for x, y, m in zip(xs[ok].tolist(), ys[ok].tolist(), ms[ok].tolist()):
                out.setdefault(m, []).append((x, y))
    for m in out:
        out[m] = sorted(set(out[m]), key=lambda s: (s[1], s[0]))
    return out


def solve_pell(D, m, y_bound):
    """Positive solutions of x^2 - D y^2 = m with y <= y_bound."""
    if m == 0:
        raise ValueError("m must be nonzero")
    return solve_pell_all(D, abs(m), y_bound).get(m, [])


@dataclass(frozen=True)
class PellFamily:
    base: QuadraticInteger
    generator: QuadraticInteger
    m: int
    gcd_xy: int
    members: tuple = ()

    def element(self, k):
        """base * generator**k."""
        if k >= 0:
            return self.base * self.generator ** k
        return self.base * self.generator.conj() ** (-k)


def _in_quadrant(z):
    return z.x > 0 and z.y > 0


def canonical_solution(z, eps):
    """Positive-quadrant member of the orbit of z under +-eps^k with least y."""
    if z.sign() < 0:
        z = -z
    guard = 0
    while not _in_quadrant(z):
        z = z * eps
        guard += 1
        if guard > 1000:
            raise InconsistentOrbit("orbit never reaches the positive quadrant")
    while True:
        w = z * eps.conj()
        if not _in_quadrant(w):
            return z
        z = w


def same_orbit(z, w, m):
    """True when w * conj(z) / m is a norm-one element of Z[sqrt D]."""
    q = w * z.conj()
    if q.x % m or q.y % m:
        return False
    return QuadraticInteger(q.x // m, q.y // m, z.D).norm() == 1


def decompose_families(D, m, solutions):
    eps = unit_star(D)
    groups = {}
    for x, y in solutions:
        if x * x - D * y * y != m:
            raise NotASolution("(%d, %d) does not solve x^2 - %d y^2 = %d" % (x, y, D, m))
        for sx, sy in ((x, y), (-x, y), (x, -y), (-x, -y)):
            z = QuadraticInteger(sx, sy, D)
            c = canonical_solution(z, eps)
            groups.setdefault((c.x, c.y), set()).add((sx, sy))
    fams = []
    for (bx, by), mem in sorted(groups.items(), key=lambda kv: (kv[0][1], kv[0][0])):
        base = QuadraticInteger(bx, by, D)
        g = gcd(bx, by)
        for sx, sy in mem:
            z = QuadraticInteger(sx, sy, D)
            if not (same_orbit(base, z, m) or same_orbit(base, -z, m)):
                raise InconsistentOrbit("(%d, %d) is not in the orbit of (%d, %d)" % (sx, sy, bx, by))
            if gcd(sx, sy) != g:
                raise InconsistentOrbit("coordinate gcd changed inside an orbit")
        fams.append(PellFamily(base, eps, m, g, tuple(sorted(mem))))
    return fams


def generalized_generator(a, b):
    """Least power u + v sqrt(A'B') of the norm-one unit with a'b' | v."""
    if gcd(a, b) != 1 or a >= b or is_square(a * b):
        raise ValueError("need coprime a < b with ab not a square")
    A, a2 = squarefree_decompose(a)
    B, b2 = squarefree_decompose(b)
    e = unit_star(A * B)
    z = e
    while z.y % (a2 * b2):
        z = z * e
    return z


def advance_solution(a, b, c, sol, gen):
    """Next solution of a x^2 - b y^2 = c along (x + theta y)(u + theta w)."""
    x, y = sol
    if a * x * x - b * y * y != c:
        raise NotASolution("(%d, %d) does not solve %d x^2 - %d y^2 = %d" % (x, y, a, b, c))
    _, a2 = squarefree_decompose(a)
    _, b2 = squarefree_decompose(b)
    u, v = gen.pair()
    if v % (a2 * b2):
        raise ValueError("generator does not act on this equation")
    w = a * v // (a2 * b2)
    bw = b * v // (a2 * b2)  # equals (b/a) * w
    return (x * u + y * bw, x * w + y * u)
