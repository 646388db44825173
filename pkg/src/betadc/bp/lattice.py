"""The quotient (BP_Q (x) BP_Q)^(2k) / (BP_2k BP + pure tensors).

Coordinates are the mixed monomials vL^a vR^b (a, b both nonempty); pure
tensors are dropped on entry. The lattice is the Z_(p)-span of the
projections of phi^{-1}(m), m running over Gamma-monomials of degree 2k.
It is put into echelon form over Z_(p), with pivots normalized to exact
powers of p, so reduction of a vector is
canonical: a coordinate with pivot p^e ends up in [0, p^e) with a
p-power denominator.
"""

from dataclasses import dataclass, field
import threading

import numpy as np
from gmpy2 import mpq

from ..algebra.poly import GradedPolynomial
from ..algebra.rational import mod_pk, padic_valuation
from .hopf import hopf

LATTICE_FORMAT_VERSION = 1


def _is_left(name):
    return name.startswith("vL")


def _is_right(name):
    return name.startswith("vR")


def mixed_monomials(A, degree, names=None):
    """Tensor monomials of the given degree with both a left and a right part."""
    pool = names or [n for n in A.names if _is_left(n) or _is_right(n)]
    left = [A.index[n] for n in pool if _is_left(n)]
    right = [A.index[n] for n in pool if _is_right(n)]
    out = []
    for key in A.monomials_of_degree(degree, pool):
        exps = A.unpack(key)
        if any(exps[i] for i in left) and any(exps[i] for i in right):
            out.append(key)
    return out


def is_pure(A, key):
    exps = A.unpack(key)
    has_l = has_r = False
    for name, e in zip(A.names, exps):
        if e:
            if _is_left(name):
                has_l = True
            elif _is_right(name):
                has_r = True
            else:
                raise ValueError(f"{name} is not a tensor generator")
    return not (has_l and has_r)


class IntegralLatticeBasis:
    """Echelon basis of the projected lattice in one degree.

    With M the largest p-power in the generators' denominators, the lattice
    scaled by p^M sits between p^M Z_(p)^n and Z_(p)^n (integral tensors lie
    in BP_*BP), so it is determined by its image mod p^M. The echelon form is
    computed there; a pivot p^e leaves p^(M-e) * row with a zero pivot entry,
    which is fed back into the pool so the result is a true generating set.
    Columns without a pivot implicitly have pivot p^M.
    """

    def __init__(self, p, degree, coords, generators, labels=None):
        self.p = p
        self.degree = degree
        self.coords = list(coords)
        self.position = {k: i for i, k in enumerate(self.coords)}
        self.generators = list(generators)  # GradedPolynomial columns (unprojected)
        self.labels = list(labels) if labels is not None else [None] * len(self.generators)
        self.denominator_exponent = max(
            [g.max_denominator_exponent(p) for g in self.generators] + [0]
        )
        self.rows = self._echelon()
        self.pivots = {c: (e, row) for c, e, row in self.rows}

    # rational vectors are dicts position -> mpq
    def _vector(self, poly):
        vec = {}
        for k, c in poly.terms.items():
            i = self.position.get(k)
            if i is not None:
                vec[i] = c
            elif not is_pure(poly.alphabet, k):
                raise ValueError(
                    f"monomial {poly.alphabet.monomial_str(k)} is outside the coordinate set"
                )
        return vec

    def _scaled_rows(self):
        p, M = self.p, self.denominator_exponent
        scale = mpq(p) ** M
        out = []
        for g in self.generators:
            row = [0] * len(self.coords)
            for i, x in self._vector(g).items():
                row[i] = mod_pk(x * scale, p, M) if M else 0
            out.append(row)
        return out

    def _echelon(self):
        p, M = self.p, self.denominator_exponent
        n = len(self.coords)
        if M == 0 or n == 0:
            return []
        mod = p**M
        dtype = np.int64 if mod * mod < 2**62 else object
        active = np.array(self._scaled_rows(), dtype=dtype).reshape(-1, n) % mod
        active = active[np.any(active != 0, axis=1)]
        rows = []
        for c in range(n):
            if active.shape[0] == 0:
                break
            col = active[:, c]
            nz = np.nonzero(col)[0]
            if nz.size == 0:
                continue
            vals = _valuations(col[nz], p, M)
            k = int(np.argmin(vals))
            r, e = int(nz[k]), int(vals[k])
            pe = p**e
            piv = active[r].copy()
            unit = int(piv[c]) // pe
            piv = (piv * pow(unit, -1, mod)) % mod
            active = np.delete(active, r, axis=0)
            factors = active[:, c] // pe
            if np.any(factors):
                active = (active - factors[:, None] * piv[None, :]) % mod
            if e:
                extra = (piv * (p ** (M - e))) % mod
                if np.any(extra):
                    active = np.vstack([active, extra[None, :]])
            active = active[np.any(active != 0, axis=1)]
            sparse = [(j, int(x)) for j, x in enumerate(piv) if x]
            rows.append((c, e, sparse))
        return rows

    @property
    def rank(self):
        """Number of explicit pivots (columns without one carry p^M)."""
        return len(self.rows)

    def pivot_exponent(self, c):
        """Exponent of the pivot in unscaled coordinates (<= 0)."""
        entry = self.pivots.get(c)
        return (entry[0] if entry else self.denominator_exponent) - self.denominator_exponent

    def reduce_vector(self, vec):
        p, M = self.p, self.denominator_exponent
        S = M
        for x in vec.values():
            v = padic_valuation(x, p)
            if v < 0:
                S = max(S, -int(v))
        mod = p**S
        scale = mpq(p) ** S
        w = {j: mod_pk(x * scale, p, S) for j, x in vec.items()}
        shift = p ** (S - M)
        for c, e, row in self.rows:
            y = w.get(c)
            if not y:
                continue
            lam = y // (p**e * shift)
            if lam:
                f = lam * shift
                for j, r in row:
                    w[j] = (w.get(j, 0) - f * r) % mod
        return {j: mpq(x) / scale for j, x in w.items() if x}

    def reduce(self, poly):
        """Canonical representative (mixed monomials only) of the class of poly."""
        vec = self.reduce_vector(self._vector(poly))
        return GradedPolynomial(poly.alphabet, {self.coords[i]: c for i, c in vec.items()})

    def scaled_matrix(self):
        """Coordinates of the generating columns times p^M, as exact integers."""
        scale = mpq(self.p) ** self.denominator_exponent
        out = []
        for g in self.generators:
            vec = self._vector(g)
            col = []
            for i in range(len(self.coords)):
                x = vec.get(i, 0) * scale
                if x.denominator % self.p == 0:
                    raise AssertionError("scaling failed to clear p-denominators")
                col.append(x)
            out.append(col)
        return out

    def to_json(self):
        A = self.generators[0].alphabet if self.generators else None
        unpack = A.unpack if A else (lambda k: k)
        return {
            "version": LATTICE_FORMAT_VERSION,
            "p": self.p,
            "degree": self.degree,
            "denominator_exponent": self.denominator_exponent,
            "coords": [list(unpack(k)) for k in self.coords],
            "rows": [[c, e, row] for c, e, row in self.rows],
        }


@dataclass(frozen=True)
class TensorCoset:
    degree: int
    p: int
    representative: GradedPolynomial
    order_exponent: int
    lattice: IntegralLatticeBasis = field(repr=False, compare=False)
    source: GradedPolynomial = field(default=None, repr=False, compare=False)

    @property
    def order(self):
        return self.p**self.order_exponent

    def is_zero(self):
        return not self.representative

    def __add__(self, other):
        if other.lattice is not self.lattice:
            raise ValueError("cosets live in different quotients")
        return reduce_in(self.lattice, self.representative + other.representative)

    def scale(self, n):
        return reduce_in(self.lattice, self.representative * n)

    def __eq__(self, other):
        if not isinstance(other, TensorCoset):
            return NotImplemented
        return (self.p, self.degree, self.representative) == (
            other.p,
            other.degree,
            other.representative,
        )

    def __hash__(self):
        return hash((self.p, self.degree, self.representative))

    def __str__(self):
        return f"[{self.representative}] (order {self.order})"


def reduce_in(lattice, x):
    """Coset of x in the quotient described by `lattice`."""
    A = x.alphabet
    mixed = x.filter(lambda k: not is_pure(A, k))
    rep = lattice.reduce(mixed)
    m = 0
    probe = rep
    p = lattice.p
    while probe:
        m += 1
        if m > 64 + lattice.denominator_exponent:
            raise ArithmeticError("class order not found")
        probe = lattice.reduce(rep * (p**m))
    return TensorCoset(lattice.degree, p, rep, m, lattice, x)


def _valuations(values, p, cap):
    vals = np.zeros(len(values), dtype=np.int64)
    cur = values.copy()
    for _ in range(cap):
        mask = (cur % p == 0) & (cur != 0)
        if not mask.any():
            break
        vals[mask] += 1
        cur = np.where(mask, cur // p, cur)
    return vals


_cache = {}
_cache_lock = threading.Lock()


def lattice_basis(p, degree):
    """Echelon basis of phi^{-1}(Gamma_degree), projected to mixed monomials."""
    key = ("full", p, degree)
    with _cache_lock:
        lat = _cache.get(key)
        if lat is None:
            h = hopf(p)
            A = h.A
            gamma_names = [n for n in A.names if n[0] in "vt" and not (_is_left(n) or _is_right(n))]
            monos = A.monomials_of_degree(degree, gamma_names)
            gens = [h.phi_inverse(GradedPolynomial(A, {m: mpq(1)})) for m in monos]
            lat = IntegralLatticeBasis(p, degree, mixed_monomials(A, degree), gens, monos)
            _cache[key] = lat
    return lat


def b_lattice(p, degree, left=("vL1", "vL2"), right=("vR1",), extra=()):
    """Quotient on the sub-alphabet left + right, with relations
    phi^{-1}(v^a t1^k) (v's drawn from `left`) and any extra relation
    polynomials supplied by the caller."""
    key = ("B", p, degree, tuple(left), tuple(right), tuple(g.dumps() for g in extra))
    with _cache_lock:
        lat = _cache.get(key)
        if lat is None:
            h = hopf(p)
            A = h.A
            gamma_names = ["v" + n[2:] for n in left] + ["t1"]
            monos = A.monomials_of_degree(degree, gamma_names)
            gens = [h.phi_inverse(GradedPolynomial(A, {m: mpq(1)})) for m in monos]
            gens += list(extra)
            lat = IntegralLatticeBasis(
                p, degree, mixed_monomials(A, degree, list(left) + list(right)), gens, monos
            )
            _cache[key] = lat
    return lat


def coset_reduce(x, p, degree=None):
    if degree is None:
        ds = x.degrees()
        if len(ds) > 1:
            raise ValueError(f"inhomogeneous input with degrees {ds}")
        degree = ds[0] if ds else 0
    elif x and x.degrees() != [degree]:
        raise ValueError(f"input is not homogeneous of degree {degree}")
    return reduce_in(lattice_basis(p, degree), x)
