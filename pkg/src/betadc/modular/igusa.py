"""Residue q-series over F_p(zeta), linear algebra over F_p, and the
structured description of classes in the mod-2 Igusa tower at level 3."""

from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from ..algebra.cyclotomic import ResidueValue
from ..algebra.rational import NonIntegralError, mod_pk
from .qexp import QExpansion, sigma_chi_table


class ResidueSeries:
    """sum (u_n + w_n zeta) q^n with u, w in F_p, zeta^2 + zeta + 1 = 0."""

    __slots__ = ("p", "u", "w")

    def __init__(self, p, u, w=None):
        self.p = p
        self.u = np.asarray(u, dtype=np.int64) % p
        self.w = np.zeros_like(self.u) if w is None else np.asarray(w, dtype=np.int64) % p
        if self.u.shape != self.w.shape:
            raise ValueError("component length mismatch")

    @classmethod
    def from_components(cls, re, im, p):
        def red(vals):
            out = []
            for n, c in enumerate(vals):
                try:
                    out.append(int(mod_pk(c, p, 1)) if c else 0)
                except NonIntegralError as exc:
                    raise NonIntegralError(
                        f"q^{n} coefficient {c} is not {p}-integral", exc.valuation, f"q^{n}"
                    ) from None
            return out

        return cls(p, red(re), red(im))

    @classmethod
    def from_qexp(cls, f, p):
        re, im = [], []
        for c in f.coeffs:
            if hasattr(c, "b"):
                re.append(c.a)
                im.append(c.b)
            else:
                re.append(c)
                im.append(0)
        return cls.from_components(re, im, p)

    @classmethod
    def constant(cls, c, p, N):
        c = _as_residue(c, p)
        u = np.zeros(N, dtype=np.int64)
        w = np.zeros(N, dtype=np.int64)
        u[0], w[0] = c.a, c.b
        return cls(p, u, w)

    @property
    def precision(self):
        return len(self.u)

    def one_like(self):
        return ResidueSeries.constant(1, self.p, self.precision)

    def _check(self, other):
        if other.p != self.p:
            raise ValueError("residue series over different primes")

    def _cut(self, other):
        n = min(self.precision, other.precision)
        return n

    def __add__(self, other):
        if not isinstance(other, ResidueSeries):
            other = ResidueSeries.constant(other, self.p, self.precision)
        self._check(other)
        n = self._cut(other)
        return ResidueSeries(self.p, self.u[:n] + other.u[:n], self.w[:n] + other.w[:n])

    __radd__ = __add__

    def __neg__(self):
        return ResidueSeries(self.p, -self.u, -self.w)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        p = self.p
        if not isinstance(other, ResidueSeries):
            c = _as_residue(other, p)
            # (u + w z)(a + b z) = ua - wb + (ub + wa - wb) z
            return ResidueSeries(p, self.u * c.a - self.w * c.b, self.u * c.b + self.w * c.a - self.w * c.b)
        self._check(other)
        n = self._cut(other)

        def conv(x, y):
            return np.convolve(x[:n], y[:n])[:n] % p

        uu = conv(self.u, other.u)
        if not self.w.any() and not other.w.any():
            return ResidueSeries(p, uu)
        ww = conv(self.w, other.w)
        uw = conv(self.u, other.w) + conv(self.w, other.u)
        return ResidueSeries(p, uu - ww, uw - ww)

    __rmul__ = __mul__

    def __pow__(self, e):
        result = self.one_like()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, ResidueSeries):
            return NotImplemented
        n = self._cut(other)
        return bool(np.array_equal(self.u[:n], other.u[:n]) and np.array_equal(self.w[:n], other.w[:n]))

    def __hash__(self):
        return hash((self.p, self.u.tobytes(), self.w.tobytes()))

    def truncate(self, N):
        return ResidueSeries(self.p, self.u[:N], self.w[:N])

    def is_zero(self):
        return not self.u.any() and not self.w.any()

    def is_rational(self):
        return not self.w.any()

    def __getitem__(self, n):
        return ResidueValue(int(self.u[n]), int(self.w[n]), self.p)

    def nonzero_positions(self):
        return [int(i) for i in np.nonzero(self.u | self.w)[0]]

    def to_qexp(self):
        return QExpansion([self[n] for n in range(self.precision)], self.precision)

    def digest(self):
        import hashlib

        h = hashlib.sha256()
        h.update(f"{self.p}:{self.precision}:".encode())
        h.update(self.u.astype(np.int64).tobytes())
        h.update(self.w.astype(np.int64).tobytes())
        return h.hexdigest()[:16]

    def to_json(self):
        return {"p": self.p, "precision": self.precision, "u": self.u.tolist(), "zeta": self.w.tolist()}

    def __repr__(self):
        shown = [f"({self[n]})q^{n}" for n in self.nonzero_positions()[:6]]
        return "ResidueSeries(" + (" + ".join(shown) or "0") + f" + O(q^{self.precision}))"


def _as_residue(c, p):
    if isinstance(c, ResidueValue):
        return c
    if hasattr(c, "b"):
        return ResidueValue(int(mod_pk(c.a, p, 1)), int(mod_pk(c.b, p, 1)), p)
    return ResidueValue(int(mod_pk(c, p, 1)), 0, p)


class FpSpan:
    """Reduced row echelon form of an F_p-subspace of F_p^N."""

    def __init__(self, p, N):
        self.p, self.N = p, N
        self.rows = []  # (pivot, vector) with vector[pivot] = 1
        self.labels = []

    def __len__(self):
        return len(self.rows)

    def _reduce(self, v):
        p = self.p
        v = np.asarray(v, dtype=np.int64)[: self.N] % p
        for piv, row in self.rows:
            c = v[piv]
            if c:
                v = (v - c * row) % p
        return v

    def add(self, v, label=None):
        v = self._reduce(v)
        nz = np.nonzero(v)[0]
        if not len(nz):
            return False
        piv = int(nz[0])
        inv = pow(int(v[piv]), -1, self.p)
        v = (v * inv) % self.p
        self.rows = [
            (q, (row - row[piv] * v) % self.p if row[piv] else row) for q, row in self.rows
        ]
        self.rows.append((piv, v))
        self.labels.append(label)
        return True

    def reduce(self, v):
        return self._reduce(v)

    def contains(self, v):
        return not self._reduce(v).any()

    def reduce_series(self, s):
        """Residual of an F_p(zeta) series; the span is F_p-rational so the
        two components reduce independently."""
        return ResidueSeries(s.p, self._reduce(s.u), self._reduce(s.w))

    def contains_series(self, s):
        return self.reduce_series(s).is_zero()

    def pivots(self):
        return [q for q, _ in self.rows]


# -- level 3, p = 2 -----------------------------------------------------------
@lru_cache(maxsize=None)
def t_series(N):
    """T mod 2: its q-expansion is sum sigma_0^chi(n) q^n."""
    s = sigma_chi_table(0, N)
    return ResidueSeries(2, [0] + [s[n] % 2 for n in range(1, N)])


@lru_cache(maxsize=None)
def a3_series(N):
    """a3 mod 2 = 1 + sum sigma_2^chi(n) q^n."""
    s = sigma_chi_table(2, N)
    return ResidueSeries(2, [1] + [s[n] % 2 for n in range(1, N)])


@lru_cache(maxsize=None)
def _t_powers(N, K):
    T = t_series(N)
    out = [T.one_like()]
    for _ in range(K):
        out.append(out[-1] * T)
    return tuple(out)


def _f2_poly_divmod_m(coeffs):
    """Expand an F_2 polynomial in T in powers of m = T^2 + T + 1:
    returns [(r0, r1)] with P = sum (r0 + r1 T) m^i."""
    c = [x % 2 for x in coeffs]
    out = []
    while any(c):
        # divide by T^2 + T + 1
        q = [0] * max(len(c) - 2, 0)
        r = list(c)
        for k in range(len(r) - 1, 1, -1):
            if r[k]:
                q[k - 2] ^= 1
                r[k] ^= 1
                r[k - 1] ^= 1
                r[k - 2] ^= 1
        out.append((r[0] if r else 0, r[1] if len(r) > 1 else 0))
        c = q
    return out


@dataclass
class IgusaClass:
    series: ResidueSeries
    structured: dict = None  # (i, j) -> ResidueValue, meaning a3^i T^j
    tower_level: int = 2
    certificate: dict = field(default_factory=dict)
    residual: ResidueSeries = None

    @property
    def in_span(self):
        return self.structured is not None

    def __str__(self):
        if self.structured is None:
            return "not in span to this precision"
        return structured_str(self.structured)


def _coeff_str(c):
    s = str(c)
    return f"({s})" if "+" in s else s


def monomial_str(i, j):
    parts = []
    if i:
        parts.append("a3" if i == 1 else f"a3^{i}")
    if j:
        parts.append("T")
    return "*".join(parts) or "1"


def structured_str(form):
    if not form:
        return "0"
    terms = []
    for (i, j) in sorted(form, key=lambda k: (-k[0], -k[1])):
        c = form[(i, j)]
        m = monomial_str(i, j)
        if c == 1:
            terms.append(m)
        else:
            terms.append(f"{_coeff_str(c)}*{m}" if m != "1" else _coeff_str(c))
    return " + ".join(terms)


def structured_series(form, N):
    a3, T = a3_series(N), t_series(N)
    out = ResidueSeries(2, np.zeros(N, dtype=np.int64))
    for (i, j), c in form.items():
        out = out + (a3**i) * (T**j) * c
    return out


def degree_bound(topological_degree):
    return topological_degree // 2 + 4


def t_reduce(x, K):
    """Greedy elimination of x against T^0..T^K. Linear in x; returns the
    T-polynomial (u and zeta components, as bit lists) and the residual."""
    N = x.precision
    if K >= N:
        raise ValueError(f"precision {N} too small for T-degree {K}")
    powers = _t_powers(N, K)
    r_u, r_w = x.u.copy() % 2, x.w.copy() % 2
    pu, pw = [0] * (K + 1), [0] * (K + 1)
    for k in range(K + 1):
        if r_u[k]:
            r_u = (r_u + powers[k].u) % 2
            pu[k] = 1
        if r_w[k]:
            r_w = (r_w + powers[k].u) % 2
            pw[k] = 1
    return pu, pw, ResidueSeries(2, r_u, r_w)


def t_poly_to_form(pu, pw):
    form = {}
    for comp, poly in ((0, pu), (1, pw)):
        for i, (r0, r1) in enumerate(_f2_poly_divmod_m(poly)):
            for j, bit in ((0, r0), (1, r1)):
                if bit:
                    c = form.get((i, j), ResidueValue(0, 0, 2))
                    form[(i, j)] = c + (ResidueValue(1, 0, 2) if comp == 0 else ResidueValue(0, 1, 2))
    return {k: v for k, v in form.items() if v}


def igusa_express(x, bound=None, topological_degree=None):
    """Write a mod-2 residue series as an F_4-combination of a3^i T^j (j <= 1).

    T has q-valuation 1 with leading coefficient 1, so the powers T^k are
    triangular; x is first written as a polynomial in T and then expanded in
    powers of a3 = T^2 + T + 1.
    """
    if x.p != 2:
        raise ValueError("igusa_express works mod 2")
    if bound is None:
        bound = degree_bound(topological_degree or 0)
    pu, pw, residual = t_reduce(x, 2 * bound + 1)
    cert = {"bound": bound, "precision": x.precision}
    if not residual.is_zero():
        return IgusaClass(x, None, residual=residual, certificate=cert)
    return IgusaClass(x, t_poly_to_form(pu, pw), certificate=cert)
