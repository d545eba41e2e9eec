"""Psi-weighted sums over sectors of coprime pairs and the Euler products
that govern them."""

from decimal import Decimal, localcontext
from fractions import Fraction
from math import exp, fsum, gcd, log, pi, sqrt

import numpy as np

from .arithmetic import primes_upto, psi


class ParameterOutOfRange(ValueError):
    pass


def c1_factor_printed(p):
    """Local factor exactly as printed: it vanishes at p = 2."""
    p = Fraction(p)
    return (1 - 1 / p) ** 3 * (1 + 3 / p - 1 / p ** 2 - Fraction(18) / (p * (p + 2)))


def c1_factor(p):
    """Local factor with h(p) = -2/(p+1) and one divisor per linear form."""
    p = Fraction(p)
    return (1 - 1 / p) ** 3 * (1 + 3 / p - 1 / p ** 2 - Fraction(6) / (p * (p + 1)))


def _log_factor(ps):
    """log of the local factor divided by (1 - p^-2)^13, which is O(p^-3)."""
    pf = ps.astype(np.float64)
    inner = 3 / pf - 1 / pf ** 2 - 6 / (pf * (pf + 1))
    return 3 * np.log1p(-1 / pf) + np.log1p(inner) - 13 * np.log1p(-1 / pf ** 2)


def c1_constant(prime_cutoff, printed=False):
    """Euler product of the local factors.

    The factors are 1 - 13/p^2 + O(p^-3), so (6/pi^2)^13 is pulled out
    exactly and only the O(p^-3) remainder is truncated at prime_cutoff."""
    if prime_cutoff < 2:
        raise ValueError("cutoff must be at least 2")
    if printed:
        val = 1.0
        for p in primes_upto(prime_cutoff).tolist():
            val *= float(c1_factor_printed(p))
        return val
    ps = primes_upto(prime_cutoff)
    return exp(13 * log(6 / pi ** 2) + fsum(_log_factor(ps).tolist()))


def c1_truncated(prime_cutoff):
    """Plain truncated product, kept for comparison."""
    out = 1.0
    for p in primes_upto(prime_cutoff).tolist():
        out *= float(c1_factor(p))
    return out


def c2_constant(r, eta, prime_cutoff=10 ** 6):
    r, eta = Fraction(r), Fraction(eta)
    if not (2 < r < Fraction(144, 55)) or not (0 <= eta < Fraction(1, 35)):
        raise ParameterOutOfRange("need 2 < r < 144/55 and 0 <= eta < 1/35")
    return 9 / (2 * pi ** 2) * float(eta * (1 - 2 / r)) ** 3 * c1_constant(prime_cutoff)


def psi_table(n):
    """Psi(0..n) as float64 (index 0 unused)."""
    vals = np.ones(n + 1, dtype=np.float64)
    vals[0] = 0.0
    for p in primes_upto(n).tolist():
        pk, k = p, 1
        while pk <= n:
            # multiply in Psi(p^k)/Psi(p^(k-1)) on multiples of p^k
            cur = k + 1 - 2 * k / (p + 1)
            prev = k - 2 * (k - 1) / (p + 1)
            vals[pk::pk] *= cur / prev
            pk *= p
            k += 1
    return vals


def _sector(x1, X, t1, t2):
    """x2 range with t2 <= x2/x1 <= t1 and x2 <= X."""
    lo = -((-t2.numerator * x1) // t2.denominator)
    hi = min(X, (t1.numerator * x1) // t1.denominator)
    return lo, hi


def sum_psi_region(X, tau1, tau2, exact=None):
    """Sum of Psi(x1) Psi(x2) Psi(x2 - x1) over coprime pairs with
    max(x1, x2) <= X and tau2 <= x2/x1 <= tau1.

    Exact (a Fraction) for X <= 300 or when exact=True; otherwise a float
    accumulated with numpy."""
    t1, t2 = Fraction(tau1), Fraction(tau2)
    if not (t1 > t2 > 1):
        raise ValueError("need tau1 > tau2 > 1")
    if exact is None:
        exact = X <= 300
    if exact:
        total = Fraction(0)
        for x1 in range(1, X + 1):
            lo, hi = _sector(x1, X, t1, t2)
            for x2 in range(lo, hi + 1):
                if gcd(x1, x2) == 1:
                    total += psi(x1) * psi(x2) * psi(x2 - x1)
        return total
    table = psi_table(X)
    from .arithmetic import spf_sieve, factor_with_table
    spf = spf_sieve(X)
    acc = []
    for x1 in range(1, X + 1):
        lo, hi = _sector(x1, X, t1, t2)
        if lo > hi:
            continue
        a = table[lo:hi + 1]
        b = table[lo - x1:hi - x1 + 1]
        prod = a * b
        for p, _ in factor_with_table(x1, spf):
            start = (-lo) % p
            prod[start::p] = 0.0
        acc.append(table[x1] * float(prod.sum()))
    return fsum(acc)


def sum_psi_weighted(X, tau1, tau2):
    """Sum of Psi(x1) Psi(x2) Psi(x2 - x1) / (x2 sqrt(x1)) over the same sector.

    Returned as (groups, value): groups maps the squarefree core k of x1
    to the exact rational coefficient of 1/sqrt(k)."""
    t1, t2 = Fraction(tau1), Fraction(tau2)
    from .arithmetic import squarefree_decompose
    groups = {}
    for x1 in range(1, X + 1):
        lo, hi = _sector(x1, X, t1, t2)
        if lo > hi:
            continue
        k, root = squarefree_decompose(x1)
        part = Fraction(0)
        for x2 in range(lo, hi + 1):
            if gcd(x1, x2) == 1:
                part += psi(x2) * psi(x2 - x1) / x2
        groups[k] = groups.get(k, 0) + psi(x1) * part / root
    return groups, evaluate_surd_sum(groups)


def evaluate_surd_sum(groups, digits=50):
    """Sum of c / sqrt(k) in decimal arithmetic with the given precision."""
    with localcontext() as ctx:
        ctx.prec = digits
        tot = Decimal(0)
        for k, c in groups.items():
            tot += Decimal(c.numerator) / Decimal(c.denominator) / Decimal(k).sqrt()
    return float(tot)


def psi_region_main_term(X, tau1, tau2, prime_cutoff=10 ** 6):
    t1, t2 = float(Fraction(tau1)), float(Fraction(tau2))
    return c1_constant(prime_cutoff) / 2 * (1 / t2 - 1 / t1) * X ** 2 * log(X) ** 3


def psi_weighted_main_term(X, tau1, tau2, prime_cutoff=10 ** 6):
    t1, t2 = float(Fraction(tau1)), float(Fraction(tau2))
    return 3 * c1_constant(prime_cutoff) * (1 / sqrt(t2) - 1 / sqrt(t1)) * sqrt(X) * log(X) ** 3
