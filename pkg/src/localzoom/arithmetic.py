"""Exact multiplicative functions and integer helpers."""

from fractions import Fraction
from math import gcd, isqrt

import numpy as np


def factorize(n):
    """Prime factorization of n as a tuple of (p, e), primes increasing."""
    if n < 1:
        raise ValueError("factorize needs n >= 1, got %r" % (n,))
    out = []
    for p in (2, 3, 5):
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
    # wheel mod 30 over the residues coprime to 30
    steps = (4, 2, 4, 2, 4, 6, 2, 6)
    p, i = 7, 0
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += steps[i]
        i = (i + 1) & 7
    if n > 1:
        out.append((n, 1))
    return tuple(out)


def _fac(n):
    return n if isinstance(n, tuple) else factorize(n)


def mobius(n):
    f = _fac(n)
    if any(e > 1 for _, e in f):
        return 0
    return -1 if len(f) % 2 else 1


def euler_phi(n):
    r = 1
    for p, e in _fac(n):
        r *= (p - 1) * p ** (e - 1)
    return r


def tau(n):
    r = 1
    for _, e in _fac(n):
        r *= e + 1
    return r


def phi_ratio(n):
    """phi(n)/n as a Fraction."""
    r = Fraction(1)
    for p, _ in _fac(n):
        r *= Fraction(p - 1, p)
    return r


def squarefree_decompose(n):
    """Return (core, root) with n = core * root**2 and core squarefree."""
    core, root = 1, 1
    for p, e in _fac(n):
        root *= p ** (e // 2)
        if e % 2:
            core *= p
    return core, root


def psi1(n):
    r = Fraction(1)
    for p, _ in _fac(n):
        r *= Fraction(p, p + 1)
    return r


def psi(n):
    """Sum over d | n of psi1(d) phi(d)/d, via Psi(p^k) = k + 1 - 2k/(p + 1)."""
    r = Fraction(1)
    for p, k in _fac(n):
        r *= k + 1 - Fraction(2 * k, p + 1)
    return r


def h_function(n):
    r = Fraction(1)
    for p, e in _fac(n):
        if e > 1:
            return Fraction(0)
        r *= Fraction(-2, p + 1)
    return r


def divisors(n):
    ds = [1]
    for p, e in _fac(n):
        ds = [d * p ** k for d in ds for k in range(e + 1)]
    return sorted(ds)


def squarefree_divisors(n):
    """Pairs (d, mu(d)) over squarefree divisors of n."""
    out = [(1, 1)]
    for p, _ in _fac(n):
        out += [(d * p, -m) for d, m in out]
    return out


def count_coprime(n, lo, hi):
    """How many v in [lo, hi] are coprime to n."""
    if hi < lo:
        return 0
    return sum(m * (hi // d - (lo - 1) // d) for d, m in squarefree_divisors(n))


def totient_sum(x):
    """Sum of phi(k) for k <= floor(x)."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("totient_sum needs x >= 0")
    n = x.numerator // x.denominator
    if n < 1:
        return 0
    if n < 2000:
        return sum(euler_phi(k) for k in range(1, n + 1))
    return int(phi_sieve(n)[1:].sum())


def is_square(n):
    return n >= 0 and isqrt(n) ** 2 == n


def iroot(n, k):
    """Floor of the k-th root of n >= 0."""
    if n < 0:
        raise ValueError("iroot of a negative number")
    if n < 2 or k == 1:
        return n
    if k == 2:
        return isqrt(n)
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x ** k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def ceil_root(n, k):
    """Smallest x >= 0 with x**k >= n."""
    if n <= 0:
        return 0
    x = iroot(n, k)
    return x if x ** k == n else x + 1


def ceil_div(a, b):
    return -(-a // b)


def kronecker(d, p):
    """Kronecker symbol (d/p) for a prime p."""
    if p == 2:
        if d % 2 == 0:
            return 0
        return 1 if d % 8 in (1, 7) else -1
    r = pow(d % p, (p - 1) // 2, p)
    if r == 0:
        return 0
    return 1 if r == 1 else -1


def spf_sieve(n):
    """Smallest prime factor table for 0..n (int64)."""
    spf = np.zeros(n + 1, dtype=np.int64)
    for p in range(2, isqrt(n) + 1):
        if spf[p] == 0:
            block = spf[p * p::p]
            block[block == 0] = p
    idx = np.nonzero(spf == 0)[0]
    spf[idx] = idx
    return spf


def phi_sieve(n):
    """Euler phi for 0..n as an int64 array."""
    phi = np.arange(n + 1, dtype=np.int64)
    for p in primes_upto(n):
        phi[p::p] -= phi[p::p] // p
    return phi


def primes_upto(n):
    if n < 2:
        return np.zeros(0, dtype=np.int64)
    s = np.ones(n + 1, dtype=bool)
    s[:2] = False
    for p in range(2, isqrt(n) + 1):
        if s[p]:
            s[p * p::p] = False
    return np.nonzero(s)[0]


def factor_with_table(n, spf):
    out = []
    while n > 1:
        p = int(spf[n])
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out.append((p, e))
    return tuple(out)


def coprime(a, b):
    return gcd(a, b) == 1
