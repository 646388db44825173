"""The subgroup modulo which an f-invariant is defined: constants plus the
reductions of integral combinations (g - q0(g)) with g a form of the top
weight, together with the correction step that makes p * iota_2(x) integral."""

import threading
from functools import lru_cache

import numpy as np
from gmpy2 import mpq

from ..algebra.rational import NonIntegralError, mod_pk, padic_valuation
from ..modular.divided import monomial_table
from ..algebra.cyclotomic import ResidueValue
from ..modular.igusa import FpSpan, ResidueSeries, igusa_express, t_poly_to_form, t_reduce


def weight_monomials(level, k):
    """Exponents (i, j) of the base monomials of weight k."""
    if level == 3:
        return [(k - 3 * j, j) for j in range(k // 3 + 1)]
    return [(i, j) for j in range(k // 6 + 1) for i in range(k // 4 + 1) if 4 * i + 6 * j == k]


def _val(row, p):
    vals = [padic_valuation(c, p) for c in row if c]
    return min(vals) if vals else None


def _normalize(row, p):
    v = _val(row, p)
    if v is None:
        return None
    if v:
        s = mpq(p) ** (-v)
        row = [c * s for c in row]
    return row


def _reduce_row(row, p):
    return np.array([int(mod_pk(c, p, 1)) if c else 0 for c in row], dtype=np.int64)


def _mod_p_dependency(mats, p):
    """A nonzero c in F_p^m with sum c_i row_i = 0 mod p, or None."""
    m = len(mats)
    if not m:
        return None
    M = np.array(mats, dtype=np.int64) % p
    aug = np.concatenate([M, np.eye(m, dtype=np.int64)], axis=1)
    ncols = M.shape[1]
    r = 0
    for col in range(ncols):
        piv = None
        for i in range(r, m):
            if aug[i, col] % p:
                piv = i
                break
        if piv is None:
            continue
        aug[[r, piv]] = aug[[piv, r]]
        inv = pow(int(aug[r, col]), -1, p)
        aug[r] = (aug[r] * inv) % p
        for i in range(m):
            if i != r and aug[i, col]:
                aug[i] = (aug[i] - aug[i, col] * aug[r]) % p
        r += 1
        if r == m:
            return None
    if r < m:
        return [int(c) for c in aug[r, ncols:]]
    return None


def saturate(rows, p):
    """Z_(p)-basis of (Q-span of rows) intersected with Z_(p)^N, assuming the
    rows are Q-independent. Returns rows whose reductions mod p are
    independent."""
    rows = [r for r in (_normalize(list(r), p) for r in rows) if r is not None]
    while True:
        dep = _mod_p_dependency([_reduce_row(r, p) for r in rows], p)
        if dep is None:
            return rows
        N = len(rows[0])
        new = [mpq(0)] * N
        for c, r in zip(dep, rows):
            if c:
                for n in range(N):
                    if r[n]:
                        new[n] += c * r[n]
        new = [x / p for x in new]
        drop = next(i for i, c in enumerate(dep) if c)
        norm = _normalize(new, p)
        if norm is None:
            rows.pop(drop)  # exact rational dependency
        else:
            rows[drop] = norm


def _solve_square(A, b):
    """Solve lam * A = b over Q (A square, list of rows)."""
    m = len(A)
    # transpose: A^T lam^T = b^T
    M = [[mpq(A[j][i]) for j in range(m)] + [mpq(b[i])] for i in range(m)]
    for col in range(m):
        piv = next(r for r in range(col, m) if M[r][col])
        M[col], M[piv] = M[piv], M[col]
        inv = 1 / M[col][col]
        M[col] = [x * inv for x in M[col]]
        for r in range(m):
            if r != col and M[r][col]:
                f = M[r][col]
                M[r] = [x - f * y for x, y in zip(M[r], M[col])]
    return [M[i][m] for i in range(m)]


class Ambiguity:
    """Constants plus reductions of integral top-weight forms, to precision N."""

    def __init__(self, p, level, k, N):
        self.p, self.level, self.k, self.N = p, level, k, N
        table = monomial_table(level, N)
        self.monomials = weight_monomials(level, k)
        raw = []
        for i, j in self.monomials:
            s = list(table.get(i, j).coeffs)
            s[0] = mpq(0)
            raw.append(s)
        self.saturated = saturate(raw, p) if raw else []
        self.reductions = [_reduce_row(r, p) for r in self.saturated]
        self.span = FpSpan(p, N)
        e0 = np.zeros(N, dtype=np.int64)
        e0[0] = 1
        self.span.add(e0, "1")
        for idx, v in enumerate(self.reductions):
            if not self.span.add(v, f"form{idx}"):
                raise AssertionError("saturated rows are dependent mod p")
        self._pivots = FpSpan(p, N)
        for v in self.reductions:
            self._pivots.add(v)
        self._structured = None
        self._lock = threading.Lock()

    @property
    def size(self):
        return len(self.span)

    def enlargement(self):
        """How many saturated generators are not reductions of monomials."""
        naive = FpSpan(self.p, self.N)
        for i, j in self.monomials:
            s = list(monomial_table(self.level, self.N).get(i, j).coeffs)
            s[0] = mpq(0)
            v = _normalize(s, self.p)
            if v is not None:
                naive.add(_reduce_row(v, self.p))
        return len(self.reductions) - len(naive)

    def basis_series(self):
        out = []
        e0 = np.zeros(self.N, dtype=np.int64)
        e0[0] = 1
        out.append(ResidueSeries(self.p, e0))
        out.extend(ResidueSeries(self.p, v) for v in self.reductions)
        return out

    def _structured_echelon(self, bound):
        """Echelon of [residual_i | e_i] over F_2, where residual_i is the part
        of the i-th basis vector outside the span of T^0..T^K."""
        with self._lock:
            if self._structured is not None and self._structured[0] == bound:
                return self._structured[1:]
            K = 2 * bound + 1
            basis = self.basis_series()
            m = len(basis)
            polys, ech = [], FpSpan(2, self.N + m)
            for idx, s in enumerate(basis):
                pu, _, res = t_reduce(s, K)
                polys.append(pu)
                e = np.zeros(m, dtype=np.int64)
                e[idx] = 1
                ech.add(np.concatenate([res.u, e]))
            inter = []
            for piv, row in ech.rows:
                if piv >= self.N:  # residual part vanished: lies in the T-span
                    combo = row[self.N :]
                    poly = [0] * (K + 1)
                    for idx, c in enumerate(combo):
                        if c:
                            poly = [(a + b) % 2 for a, b in zip(poly, polys[idx])]
                    inter.append(t_poly_to_form(poly, [0] * (K + 1)))
            self._structured = (bound, ech, inter)
            return ech, inter

    def structured_intersection(self, bound):
        """Structured forms spanning (ambiguity) meet (a3^i T^j span)."""
        return self._structured_echelon(bound)[1]

    def structure(self, x, bound):
        """A structured representative of x modulo the ambiguity, or the
        IgusaClass reporting the residual when none exists."""
        ech, _ = self._structured_echelon(bound)
        K = 2 * bound + 1
        basis = self.basis_series()
        m = len(basis)
        shift = ResidueSeries(2, np.zeros(self.N, dtype=np.int64))
        comps = []
        for comp in (x.u, x.w):
            _, _, res = t_reduce(ResidueSeries(2, comp), K)
            v = ech.reduce(np.concatenate([res.u, np.zeros(m, dtype=np.int64)]))
            if v[: self.N].any():
                return igusa_express(x, bound=bound)
            comps.append(v[self.N :] % 2)
        for idx, s in enumerate(basis):
            cu, cw = int(comps[0][idx]), int(comps[1][idx])
            if cu or cw:
                shift = shift + s * ResidueValue(cu, cw, 2)
        # v = [res_x | 0] - sum c_j row_j, so res_x + sum comps_i res_i = 0 mod 2
        return igusa_express(x + shift, bound=bound)

    def normal_form(self, form, bound):
        """Reduce a structured form modulo the structured ambiguity, clearing
        the lowest monomials first."""
        inter = self.structured_intersection(bound)
        order = sorted({k for f in inter for k in f} | set(form))
        index = {k: n for n, k in enumerate(order)}

        def vec(f):
            u = np.zeros(len(order), dtype=np.int64)
            w = np.zeros(len(order), dtype=np.int64)
            for k, c in f.items():
                u[index[k]], w[index[k]] = c.a, c.b
            return u, w

        span = FpSpan(2, len(order))
        for f in inter:
            span.add(vec(f)[0])
        u, w = vec(form)
        u, w = span.reduce(u), span.reduce(w)
        out = {}
        for n, k in enumerate(order):
            c = ResidueValue(int(u[n]), int(w[n]), 2)
            if c:
                out[k] = c
        return out

    def contains(self, s):
        return self.span.contains_series(s)

    def reduce(self, s):
        return self.span.reduce_series(s)

    def correct(self, y):
        """Given a rational list y (constant slot ignored), find lam with
        y - lam * S integral in positions >= 1. Returns (residual, lam)."""
        p = self.p
        y = [mpq(0)] + [mpq(c) for c in y[1 : self.N]]
        if not self.saturated:
            return y, []
        piv = self._pivots.pivots()
        A = [[row[c] for c in piv] for row in self.saturated]
        lam = _solve_square(A, [y[c] for c in piv])
        res = list(y)
        for l, row in zip(lam, self.saturated):
            if l:
                for n in range(1, self.N):
                    if row[n]:
                        res[n] -= l * row[n]
        for n, c in enumerate(res):
            if c and padic_valuation(c, p) < 0:
                raise NonIntegralError(
                    f"no top-weight correction makes the q^{n} coefficient integral ({c})",
                    padic_valuation(c, p),
                    f"q^{n}",
                )
        return res, lam


_cache = {}
_cache_lock = threading.Lock()


def ambiguity(p, level, k, N):
    key = (p, level, k, N)
    with _cache_lock:
        hit = _cache.get(key)
    if hit is None:
        hit = Ambiguity(p, level, k, N)
        with _cache_lock:
            hit = _cache.setdefault(key, hit)
    return hit
