"""Primitive points of a plane lattice in thin triangles under a line of
quadratic slope."""

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, pi

import numpy as np

from . import _parallel
from .arithmetic import psi1
from .quadratic import as_fraction, as_ratio, cmp_distance, sign_surd


class DegenerateSlope(ValueError):
    pass


def _egcd(a, b):
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        k = a // b
        a, b = b, a - k * b
        x0, x1 = x1, x0 - k * x1
        y0, y1 = y1, y0 - k * y1
    return a, x0, y0


@dataclass(frozen=True)
class Lattice2:
    e1: tuple
    e2: tuple

    def __post_init__(self):
        object.__setattr__(self, "e1", tuple(int(c) for c in self.e1))
        object.__setattr__(self, "e2", tuple(int(c) for c in self.e2))
        if self.det == 0:
            raise ValueError("basis vectors are dependent")

    @property
    def det(self):
        return abs(self.e1[0] * self.e2[1] - self.e1[1] * self.e2[0])

    def hnf(self):
        """Basis ((h1, h2), (0, h3)) with h1, h3 > 0 and 0 <= h2 < h3."""
        (a, b), (c, d) = self.e1, self.e2
        g, x, y = _egcd(a, c)
        if g < 0:
            g, x, y = -g, -x, -y
        # first row x*e1 + y*e2 has first coordinate g
        h2 = x * b + y * d
        h3 = abs(a * d - b * c) // g
        return (g, h2 % h3), (0, h3)

    def contains(self, u, v):
        (a, b), (c, d) = self.e1, self.e2
        det = a * d - b * c
        return (u * d - v * c) % det == 0 and (a * v - b * u) % det == 0

    def contains_array(self, u, v):
        (a, b), (c, d) = self.e1, self.e2
        det = a * d - b * c
        return ((u * d - v * c) % det == 0) & ((a * v - b * u) % det == 0)

    def has_primitive_point(self):
        """True iff Z^2 / L is cyclic."""
        (h1, h2), (_, h3) = self.hnf()
        return gcd(gcd(h1, h2), h3) == 1


Z2 = Lattice2((1, 0), (0, 1))


def sup_norm(e):
    return max(abs(e[0]), abs(e[1]))


def _positive(e):
    return e if (e[0], e[1]) > (0, 0) else (-e[0], -e[1])


def reduced_basis(L):
    """Lagrange-Gauss reduction (Euclidean); the sup-norm product is then <= 8 det."""
    e1, e2 = L.e1, L.e2

    def n2(e):
        return e[0] * e[0] + e[1] * e[1]

    if n2(e1) > n2(e2):
        e1, e2 = e2, e1
    while True:
        dot = e1[0] * e2[0] + e1[1] * e2[1]
        k = (2 * dot + n2(e1)) // (2 * n2(e1))  # nearest integer to dot / |e1|^2
        e2 = (e2[0] - k * e1[0], e2[1] - k * e1[1])
        if n2(e2) >= n2(e1):
            return Lattice2(_positive(e1), _positive(e2))
        e1, e2 = e2, e1


def intersect_dZ2(L, d):
    """L intersected with d Z^2."""
    (h1, h2), (_, h3) = L.hnf()
    i0 = d // gcd(d, h1)
    g = gcd(h3, d)
    k0 = g // gcd(g, i0 * h2)
    i = i0 * k0
    # solve i*h2 + j*h3 = 0 mod d
    dg = d // g
    c = (i * h2) // g
    inv = pow(h3 // g, -1, dg) if dg > 1 else 0
    j = (-c * inv) % dg if dg > 1 else 0
    w1 = (i * h1, i * h2 + j * h3)
    w2 = (0, dg * h3)
    return Lattice2(w1, w2)


def theta_lambda(L):
    """(Psi_1(det)/det, 6/pi^2, value) for the density of primitive points."""
    q = psi1(L.det) / L.det
    return q, 6 / pi ** 2, float(q) * 6 / pi ** 2


def theta_truncated(L, N):
    """Sum over d <= N of mu(d)/det(L cap dZ^2)."""
    from .arithmetic import mobius
    s = Fraction(0)
    for d in range(1, N + 1):
        m = mobius(d)
        if m:
            s += Fraction(m, intersect_dZ2(L, d).det)
    return s


@dataclass(frozen=True)
class Surd:
    """(p + q sqrt(n))/s with s > 0."""
    p: int
    q: int
    n: int
    s: int

    def __float__(self):
        return (self.p + self.q * self.n ** 0.5) / self.s

    def sign(self):
        return sign_surd(self.p, self.q, self.n)


def normalize_basis(L, t):
    """Flip basis vectors so that lambda2 - alpha mu2 > 0 and theta > 0."""
    (l1, m1), (l2, m2) = L.e1, L.e2
    # sign of l2 - alpha m2 = sign(a l2 - m2 sqrt(ab))
    s2 = sign_surd(t.a * l2, -m2, t.n)
    if s2 == 0:
        raise DegenerateSlope("lambda2 - alpha mu2 vanished")
    if s2 < 0:
        l2, m2 = -l2, -m2
    s1 = sign_surd(t.a * l1, -m1, t.n)
    if s1 > 0:
        l1, m1 = -l1, -m1
    return Lattice2((l1, m1), (l2, m2))


def theta_alpha(L, t):
    """Slope theta = -(l1 - alpha m1)/(l2 - alpha m2) after normalization."""
    N = normalize_basis(L, t)
    (l1, m1), (l2, m2) = N.e1, N.e2
    a, b = t.a, t.b
    p = -(a * l1 * l2 - b * m1 * m2)
    q = -(l1 * m2 - l2 * m1)
    s = a * l2 * l2 - b * m2 * m2
    if s == 0:
        raise DegenerateSlope("denominator vanished")
    if s < 0:
        p, q, s = -p, -q, -s
    return Surd(p, q, t.n, s), N


def _lattice_chunk(t, eps, K, L, B, r, v_lo, v_hi):
    al = t.alpha
    rho = float(eps) * B ** (-1 / float(r))
    vmax = (K.numerator * B) // K.denominator
    total = 0
    step = 1 << 22
    zz = L.det == 1
    for s in range(v_lo, v_hi + 1, step):
        v = np.arange(s, min(v_hi, s + step - 1) + 1, dtype=np.int64)
        vf = v.astype(np.float64)
        av = al * vf
        ncand = int(rho * v_hi) + 2
        u0 = np.floor(av).astype(np.int64)
        for k in range(1, ncand + 1):
            u = u0 + k
            diff = (u.astype(np.float64) - av) - rho * vf
            # keep u with u - alpha v <= rho v, with slack for rounding
            keep = diff <= 1e-9 + 1e-14 * av
            if not keep.any():
                continue
            uu, vv = u[keep], v[keep]
            if not zz:
                inl = L.contains_array(uu, vv)
                uu, vv = uu[inl], vv[inl]
            cop = np.gcd(uu, vv) == 1
            for x, y in zip(uu[cop].tolist(), vv[cop].tolist()):
                if y > vmax:
                    continue
                if t.a * x * x > t.b * y * y and cmp_distance(t, x, y, eps, B, r) <= 0:
                    total += 1
    return total


def count_lattice_zoom(t, eps, K, L, B, r, threads=1):
    """Primitive (u, v) in L with 0 < u/v - alpha <= eps B^(-1/r) and v <= K B."""
    eps, K = as_fraction(eps), as_fraction(K)
    as_ratio(r)
    vmax = (K.numerator * B) // K.denominator
    if vmax < 1:
        return 0
    parts = _parallel.split_range(1, vmax, 4 * _parallel.resolve_threads(threads))
    return sum(_parallel.run_chunks(
        _lattice_chunk, [(t, eps, K, L, B, Fraction(r), lo, hi) for lo, hi in parts], threads))


def lattice_zoom_main_term(t, eps, K, L, B, r):
    r = float(as_fraction(r))
    if r <= 0.5:
        raise ValueError("main term needs r > 1/2")
    return theta_lambda(L)[2] * float(eps) * float(K) ** 2 / 2 * B ** (2 - 1 / r)


def check_theorem_conditions(t, eps, K, L, B, r):
    """Which of the range, size and determinant conditions hold."""
    r = float(as_fraction(r))
    eps, K = float(as_fraction(eps)), float(as_fraction(K))
    al2 = t.b / t.a
    U = (2 ** 21 * 162 * al2 * eps ** 2) ** (-2 / 5)
    expo = (4 / 5) * (1 / r - 1) - (3 / 5) * (2 - 1 / r)
    return {
        "cond0": 0.5 < r < 0.7,
        "cond4": K * K * t.b <= U * B ** expo,
        "cond5": t.b * L.det ** 2 <= K * K * B ** (2 - 1 / r),
    }


def liouville_xi_theta(t, L):
    return Fraction(1, 162 * t.b * L.det)
