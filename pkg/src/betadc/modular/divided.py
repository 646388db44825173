"""Divided congruences: mixed-weight sums of modular forms with integral
joint q-expansion, the diamond action, the map rho and Katz's d_n."""

import threading
from functools import lru_cache

from gmpy2 import mpq

from ..algebra.cyclotomic import CyclotomicValue, ResidueValue, reduce_scalar
from ..algebra.poly import GradedPolynomial
from ..algebra.rational import NonIntegralError, padic_valuation
from ..bp.hopf import hopf
from .forms import modular_alphabet, orientation, q0
from .qexp import QExpansion, level1_generators, level3_rational_parts

DEFAULT_PRECISION = 200


def default_precision(top_weight=0):
    return max(DEFAULT_PRECISION, 4 * top_weight + 20)


class _MonomialTable:
    """Rational q-series of base monomials, filled on demand.

    Level 3: a1^i a3^j = (1+2z)^(i+j) * r1^i r3^j and only the rational factor
    is stored. Level 1: g2^i g3^j directly.
    """

    def __init__(self, level, N):
        self.level, self.N = level, N
        if level == 3:
            self.gens = level3_rational_parts(N)
        else:
            self.gens = level1_generators(N)
        self.cache = {(0, 0): QExpansion.constant(1, N)}
        self.lock = threading.Lock()

    def get(self, i, j):
        key = (i, j)
        val = self.cache.get(key)
        if val is not None:
            return val
        if j > 0:
            val = self.get(i, j - 1) * self.gens[1]
        else:
            val = self.get(i - 1, 0) * self.gens[0]
        with self.lock:
            self.cache.setdefault(key, val)
        return self.cache[key]


@lru_cache(maxsize=None)
def monomial_table(level, N):
    return _MonomialTable(level, N)


def _unit_power(m):
    """(1+2z)^m; (1+2z)^2 = -3."""
    base = mpq(-3) ** (m // 2)
    return CyclotomicValue(1, 2) * base if m % 2 else CyclotomicValue(base, 0)


def evaluate_components(poly, level, N):
    """q-expansion of a polynomial in base generators as two rational
    coefficient lists (the 1 and zeta components)."""
    A = poly.alphabet
    table = monomial_table(level, N)
    re = [mpq(0)] * N
    im = [mpq(0)] * N
    for k, c in poly.terms.items():
        i, j = A.unpack(k)
        series = table.get(i, j).coeffs
        if level == 3:
            s = CyclotomicValue.coerce(c) * _unit_power(i + j)
            sa, sb = s.a, s.b
        elif isinstance(c, CyclotomicValue):
            sa, sb = c.a, c.b
        else:
            sa, sb = mpq(c), mpq(0)
        if sa:
            for n in range(N):
                x = series[n]
                if x:
                    re[n] += sa * x
        if sb:
            for n in range(N):
                x = series[n]
                if x:
                    im[n] += sb * x
    return re, im


def evaluate(poly, level, N):
    re, im = evaluate_components(poly, level, N)
    if any(im):
        return QExpansion([CyclotomicValue(a, b) for a, b in zip(re, im)], N)
    return QExpansion(re, N)


class DividedCongruence:
    """Finite sum of forms f_i of weight i, kept symbolically; integrality
    refers to the joint q-expansion at a stated precision."""

    def __init__(self, parts, p, level):
        A = modular_alphabet(level)
        clean = {}
        for w, f in parts.items():
            if not isinstance(f, GradedPolynomial):
                f = A.one() * f
            if f:
                bad = [d for d in f.degrees() if d != 2 * w]
                if bad:
                    raise ValueError(f"weight-{w} part has terms of degree {bad}")
                clean[w] = f
        self.parts = clean
        self.p = p
        self.level = level

    @classmethod
    def from_poly(cls, poly, p, level):
        parts = {}
        for k, c in poly.terms.items():
            w = poly.alphabet.degree(k) // 2
            parts.setdefault(w, {})[k] = c
        return cls({w: GradedPolynomial(poly.alphabet, t) for w, t in parts.items()}, p, level)

    @classmethod
    def constant(cls, c, p, level):
        return cls({0: c}, p, level)

    @property
    def alphabet(self):
        return modular_alphabet(self.level)

    def total(self):
        out = self.alphabet.zero()
        for f in self.parts.values():
            out = out + f
        return out

    def weights(self):
        return sorted(self.parts)

    def _same(self, other):
        if not isinstance(other, DividedCongruence):
            return DividedCongruence.constant(other, self.p, self.level)
        if (other.p, other.level) != (self.p, self.level):
            raise ValueError("divided congruences over different (p, level)")
        return other

    def __add__(self, other):
        other = self._same(other)
        parts = dict(self.parts)
        for w, f in other.parts.items():
            parts[w] = parts[w] + f if w in parts else f
        return DividedCongruence(parts, self.p, self.level)

    __radd__ = __add__

    def __neg__(self):
        return DividedCongruence({w: -f for w, f in self.parts.items()}, self.p, self.level)

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, DividedCongruence):
            return DividedCongruence({w: f * other for w, f in self.parts.items()}, self.p, self.level)
        other = self._same(other)
        return DividedCongruence.from_poly(self.total() * other.total(), self.p, self.level)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return DividedCongruence({w: f / scalar for w, f in self.parts.items()}, self.p, self.level)

    def __pow__(self, e):
        return DividedCongruence.from_poly(self.total() ** e, self.p, self.level)

    def __eq__(self, other):
        if not isinstance(other, DividedCongruence):
            return NotImplemented
        return (self.p, self.level) == (other.p, other.level) and (self - other).is_zero()

    def __hash__(self):
        return hash((self.p, self.level, tuple(sorted(self.parts))))

    def is_zero(self):
        return not self.parts

    def qexp(self, N=DEFAULT_PRECISION):
        return evaluate(self.total(), self.level, N)

    def components(self, N=DEFAULT_PRECISION):
        return evaluate_components(self.total(), self.level, N)

    def min_valuation(self, N=DEFAULT_PRECISION):
        re, im = self.components(N)
        vals = [padic_valuation(c, self.p) for c in re + im if c]
        return min(vals) if vals else float("inf")

    def is_integral(self, N=DEFAULT_PRECISION):
        """Joint q-expansion p-integral through q^(N-1)."""
        return self.min_valuation(N) >= 0

    def reduce(self, N=DEFAULT_PRECISION):
        """Residue q-series; raises NonIntegralError if not integral."""
        from .igusa import ResidueSeries

        re, im = self.components(N)
        return ResidueSeries.from_components(re, im, self.p)

    def diamond(self, alpha):
        return diamond(alpha, self)

    def q0(self):
        return q0(self.total(), self.level)

    def __str__(self):
        if not self.parts:
            return "0"
        return " + ".join(f"[{w}]({f})" for w, f in sorted(self.parts.items()))

    __repr__ = __str__

    def to_json(self):
        return {
            "p": self.p,
            "level": self.level,
            "parts": {str(w): f.to_json() for w, f in sorted(self.parts.items())},
        }


def diamond(alpha, f):
    """[alpha] scales the weight-i part by alpha^i."""
    if alpha % f.p == 0:
        raise ValueError(f"{alpha} is not a {f.p}-adic unit")
    return DividedCongruence({w: g * mpq(alpha) ** w for w, g in f.parts.items()}, f.p, f.level)


# -- iota_2 and rho -----------------------------------------------------------
class _IotaCache:
    def __init__(self, orient):
        self.orient = orient
        self.right = {}
        self.left = {}
        self.lock = threading.Lock()


@lru_cache(maxsize=None)
def _iota_cache(orient):
    return _IotaCache(orient)


def _split_names(A):
    """Positions of vL_i and vR_i in the BP alphabet."""
    left, right = {}, {}
    for pos, name in enumerate(A.names):
        if name.startswith("vL"):
            left[pos] = int(name[2:])
        elif name.startswith("vR"):
            right[pos] = int(name[2:])
    return left, right


def iota2(x, orient, sign=-1):
    """sum c * sign*q0(alpha(left)) * alpha(right) over the monomials of x in
    the vL/vR alphabet; sign=-1 is the map -q0 (x) id."""
    A = x.alphabet
    left, right = _split_names(A)
    cache = _iota_cache(orient)
    level = orient.level
    base = orient.base
    out = base.zero()
    for k, c in x.terms.items():
        exps = A.unpack(k)
        lk, rk = [], []
        for pos, e in enumerate(exps):
            if not e:
                continue
            if pos in left:
                lk.append((left[pos], e))
            elif pos in right:
                rk.append((right[pos], e))
            else:
                raise ValueError(f"iota2 expects vL/vR monomials, got {A.monomial_str(k)}")
        lk, rk = tuple(lk), tuple(rk)
        ls = cache.left.get(lk)
        if ls is None:
            ls = CyclotomicValue(1, 0)
            for i, e in lk:
                ls = ls * CyclotomicValue.coerce(orient.q0_image(i)) ** e
            if ls.is_rational():
                ls = ls.a
            cache.left[lk] = ls
        rp = cache.right.get(rk)
        if rp is None:
            rp = base.one()
            for i, e in rk:
                rp = rp * orient.image(i) ** e
            cache.right[rk] = rp
        out = out + rp * (ls * c * sign)
    return out


def rho(g, orient, sign=-1):
    """(-q0 (x) id)(alpha (x) alpha)(phi^{-1}(g)) as a divided congruence."""
    H = hopf(orient.p)
    x = H.phi_inverse(g)
    return DividedCongruence.from_poly(iota2(x, orient, sign), orient.p, orient.level)


def T(n, orient):
    """T_n = rho(t_n)."""
    H = hopf(orient.p)
    return rho(H.t[n], orient)


def katz_d(nmax, orient):
    """d_0 = 1, sum_{i=0}^n d_{n-i}^{p^i} / p^i = a_{p^n} / p^n."""
    p, level = orient.p, orient.level
    d = [DividedCongruence.constant(1, p, level)]
    for n in range(1, nmax + 1):
        acc = DividedCongruence.from_poly(orient.log_images[n], p, level)
        for i in range(1, n + 1):
            acc = acc - (d[n - i] ** (p**i)) / mpq(p) ** i
        d.append(acc)
    return d


def hasse_check(orient, N=50):
    """alpha(v1)(q) == 1 mod p to precision N."""
    f = DividedCongruence.from_poly(orient.image(1), orient.p, orient.level)
    r = f.reduce(N)
    return r == r.one_like()
