"""Hazewinkel generators and the rational logarithm of the p-typical
universal formal group law."""

from dataclasses import dataclass
from functools import lru_cache

from gmpy2 import mpq

from ..algebra.poly import Alphabet

# Enough generators for every degree the library works in.
DEFAULT_NMAX = {2: 5, 3: 4}


def default_nmax(p):
    return DEFAULT_NMAX.get(p, 3)


def gen_degree(p, i):
    return 2 * (p**i - 1)


@lru_cache(maxsize=None)
def bp_alphabet(p, nmax=None):
    """One alphabet holding vL_i, vR_i (the two tensor copies), v_i and t_i.

    Declared order gives the monomial precedence vL < vR < v < t.
    """
    nmax = nmax or default_nmax(p)
    names, degs = [], []
    for prefix in ("vL", "vR", "v", "t"):
        for i in range(1, nmax + 1):
            names.append(f"{prefix}{i}")
            degs.append(gen_degree(p, i))
    return Alphabet(names, degs, tag=f"BP(p={p},n={nmax})")


@dataclass(frozen=True)
class HazewinkelData:
    p: int
    nmax: int
    logs: tuple  # logs[0] = 1, logs[n] = l_n

    def l(self, n):
        return self.logs[n]

    def check_recursion(self):
        A = self.logs[0].alphabet
        v = [None] + [A.gen(f"v{i}") for i in range(1, self.nmax + 1)]
        for n in range(1, self.nmax + 1):
            rhs = A.zero()
            for i in range(n):
                rhs = rhs + self.logs[i] * v[n - i] ** (self.p**i)
            if self.logs[n] * self.p != rhs:
                return False
        return True


@lru_cache(maxsize=None)
def hazewinkel(p, nmax=None, prefix="v"):
    """l_1..l_nmax from p*l_n = sum_{i<n} l_i v_{n-i}^(p^i), l_0 = 1.

    `prefix` picks which copy of the generators the logs are written in
    (v, vL or vR).
    """
    A = bp_alphabet(p, None)
    nmax = nmax or default_nmax(p)
    if nmax < 1:
        raise ValueError("nmax must be at least 1")
    if nmax > default_nmax(p):
        raise ValueError(f"nmax={nmax} exceeds the generators available at p={p}")
    v = [None] + [A.gen(f"{prefix}{i}") for i in range(1, nmax + 1)]
    logs = [A.one()]
    for n in range(1, nmax + 1):
        acc = A.zero()
        for i in range(n):
            acc = acc + logs[i] * v[n - i] ** (p**i)
        logs.append(acc / mpq(p))
    return HazewinkelData(p, nmax, tuple(logs))


def log_series_coefficients(p, nmax=None, prefix="v"):
    """{p^i: l_i}; the p-typical logarithm is sum_i l_i x^(p^i)."""
    data = hazewinkel(p, nmax, prefix)
    return {p**i: data.logs[i] for i in range(len(data.logs))}


def l_polynomial(p, n, prefix="v"):
    return hazewinkel(p, None, prefix).logs[n]

