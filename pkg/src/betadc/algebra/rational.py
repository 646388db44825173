"""Exact rationals (backed by gmpy2.mpq) and p-local helpers."""

import math

import gmpy2
from gmpy2 import mpq, mpz

INF = math.inf


class NonIntegralError(ArithmeticError):
    """A coefficient that had to be p-integral was not."""

    def __init__(self, message, valuation=None, where=None):
        super().__init__(message)
        self.valuation = valuation
        self.where = where


def Q(num, den=1):
    """Build an exact rational. Accepts ints, mpq, or 'a/b' strings."""
    if isinstance(num, str):
        return mpq(num)
    return mpq(num, den)


def is_rational(x):
    return isinstance(x, (int, type(mpq(0)), type(mpz(0))))


def padic_valuation(q, p):
    """v_p(q), with +inf for zero."""
    q = mpq(q)
    if q == 0:
        return INF
    num, den = q.numerator, q.denominator
    v = 0
    if num % p == 0:
        _, e = gmpy2.remove(num, p)
        v += int(e)
    if den % p == 0:
        _, e = gmpy2.remove(den, p)
        v -= int(e)
    return v


def split_p(q, p):
    """Write q = p^v * u with u a p-adic unit; returns (v, u). Zero gives (inf, 0)."""
    q = mpq(q)
    v = padic_valuation(q, p)
    if v == INF:
        return INF, mpq(0)
    return v, q / mpq(p) ** v


def mod_pk(q, p, k):
    """Image of a p-integral rational in Z/p^k, as an int in [0, p^k)."""
    q = mpq(q)
    m = p ** k
    den = int(q.denominator)
    if den % p == 0:
        raise NonIntegralError(f"{q} is not {p}-integral", padic_valuation(q, p))
    return int(q.numerator) * pow(den, -1, m) % m


def fractional_part(q, p):
    """Canonical representative of q modulo Z_(p): a/p^m with 0 <= a < p^m."""
    q = mpq(q)
    v = padic_valuation(q, p)
    if v >= 0:
        return mpq(0)
    m = -v
    a = mod_pk(q * mpq(p) ** m, p, m)
    return mpq(a, p ** m)


def scalar_valuation_any(x, p):
    """p-adic valuation of a rational or Q(zeta) scalar."""
    from .cyclotomic import scalar_valuation

    return scalar_valuation(x, p)
