"""Chern-number criteria for the Kervaire invariant in dimensions 4 and 8.

The genus Q(x) = x/exp(x) of the 2-typical formal group gives, for a bundle
with Chern classes c_j, the class Pi = prod_l Q(x_l). Its components
Pi^(2i), tensored left against right, give K^(2k); reducing K in the quotient
B_(2^n) and reading the v1^(2^(n-2)) (x) v1^(2^(n-2)) coefficient against the
denominator 2^(2^(n-1)) yields a parity polynomial in Chern numbers.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product

from gmpy2 import mpq

from .algebra.poly import Alphabet, GradedPolynomial
from .algebra.rational import padic_valuation
from .algebra.series import TruncatedSeries
from .bp.hazewinkel import bp_alphabet, gen_degree, hazewinkel
from .bp.hopf import hopf
from .bp.lattice import b_lattice, is_pure

P = 2
NV = 4  # v1..v4 suffice through cohomological degree 16
B_NAMES = ("vL1", "vL2", "vR1")


class UnsupportedDimension(ValueError):
    pass


class IncompleteChernData(ValueError):
    pass


@lru_cache(maxsize=None)
def chern_alphabet(m):
    """v1..v4 (BP degrees) and c1..cm (degree -2j, so Q is homogeneous)."""
    names = [f"v{i}" for i in range(1, NV + 1)] + [f"c{j}" for j in range(1, m + 1)]
    degs = [gen_degree(P, i) for i in range(1, NV + 1)] + [-2 * j for j in range(1, m + 1)]
    return Alphabet(names, degs, tag=f"Chern(m={m})")


def _to(alphabet, poly):
    return poly.substitute({}, target=alphabet, check_degrees=False)


def genus_Q(m, alphabet=None):
    """Q(x) = x / exp(x) mod x^m, coefficients in the v's."""
    if m < 2:
        raise ValueError("precision must be at least 2")
    A = alphabet or chern_alphabet(1)
    logs = hazewinkel(P, NV).logs
    # exp is needed mod x^(m+1) so that exp(x)/x is known mod x^m
    coeffs = [A.zero()] * (m + 1)
    i = 0
    while 2**i <= m and i < len(logs):
        coeffs[2**i] = _to(A, logs[i])
        i += 1
    log = TruncatedSeries(coeffs, m + 1, A.zero())
    return log.reverse().shift_down(1).inverse()


def newton_power_sums(m, alphabet):
    """p_1..p_m in terms of c_1..c_m."""
    c = [None] + [alphabet.gen(f"c{j}") for j in range(1, m + 1)]
    ps = [None]
    for k in range(1, m + 1):
        acc = c[k] * (k * (-1) ** (k - 1))
        for i in range(1, k):
            acc = acc + c[i] * ps[k - i] * (-1) ** (i - 1)
        ps.append(acc)
    return ps


def elementary_from_power_sums(ps, alphabet, m):
    """Inverse Newton: k e_k = sum_{i=1}^k (-1)^(i-1) e_{k-i} p_i."""
    e = [alphabet.one()]
    for k in range(1, m + 1):
        acc = alphabet.zero()
        for i in range(1, k + 1):
            acc = acc + e[k - i] * ps[i] * (-1) ** (i - 1)
        e.append(acc / k)
    return e


@dataclass(frozen=True)
class SymmetricExpansion:
    degree: int  # 2i
    terms: dict = field(hash=False)  # c-exponent tuple (len i) -> polynomial in v's (BP alphabet)

    def coefficient(self, cexp):
        cexp = tuple(cexp) + (0,) * (self.degree // 2 - len(cexp))
        return self.terms.get(cexp)

    def __str__(self):
        out = []
        for cexp, poly in sorted(self.terms.items()):
            mono = "*".join(
                (f"c{j + 1}" if e == 1 else f"c{j + 1}^{e}") for j, e in enumerate(cexp) if e
            )
            out.append(f"({poly})*{mono}")
        return " + ".join(out) or "0"


@lru_cache(maxsize=None)
def _pi_table(imax):
    A = chern_alphabet(imax)
    logQ = genus_Q(imax + 1, A).log()
    ps = newton_power_sums(imax, A)
    u = [A.zero()] + [logQ[j] * ps[j] for j in range(1, imax + 1)]
    Pi = TruncatedSeries(u, imax + 1, A.zero()).exp()
    return A, Pi


def pi_component(two_i, p=2, imax=8):
    """Pi^(2i) in the c-basis with v-polynomial coefficients."""
    if p != 2:
        raise ValueError("the genus is 2-typical")
    if two_i % 2 or two_i < 0:
        raise ValueError("degree must be even and nonnegative")
    i = two_i // 2
    if i > imax:
        raise ValueError(f"degree {two_i} beyond the configured bound {2 * imax}")
    A, Pi = _pi_table(max(imax, i))
    B = bp_alphabet(P)
    nv = NV
    terms = {}
    for k, c in Pi[i].terms.items():
        exps = A.unpack(k)
        vexp, cexp = exps[:nv], exps[nv:]
        key = tuple(cexp[:i]) if i else ()
        mono = B.monomial({f"v{j + 1}": e for j, e in enumerate(vexp) if e}, c)
        terms[key] = terms[key] + mono if key in terms else mono
    return SymmetricExpansion(two_i, {k: v for k, v in terms.items() if v})


def _rename(poly, side):
    B = poly.alphabet
    return poly.rename(B, {f"v{i}": f"{side}{i}" for i in range(1, NV + 1)})


def k_class(dimension):
    """K^(dim) = sum_{0<i<k} Pi^(2i)(c0) (x) Pi^(2k-2i)(c1), dim = 2k, keyed by
    (c0-exponents, c1-exponents) with mixed vL/vR polynomial values."""
    k = dimension // 2
    out = {}
    for i in range(1, k):
        left, right = pi_component(2 * i), pi_component(2 * (k - i))
        for (c0, f), (c1, g) in product(left.terms.items(), right.terms.items()):
            key = (_pad(c0, k), _pad(c1, k))
            val = _rename(f, "vL") * _rename(g, "vR")
            out[key] = out[key] + val if key in out else val
    return {key: v for key, v in out.items() if v}


def _pad(cexp, k):
    return tuple(cexp) + (0,) * (k - len(cexp))


def _is_b_monomial(A, key):
    allowed = {A.index[n] for n in B_NAMES}
    return all(not e or pos in allowed for pos, e in enumerate(A.unpack(key)))


def _extension_pool(dimension):
    """phi^{-1} of Gamma-monomials in v1, v2, t1, t2 that involve t2."""
    H = hopf(P)
    A = H.A
    monos = [m for m in A.monomials_of_degree(dimension, ["v1", "v2", "t1", "t2"]) if A.exponent(m, "t2")]
    return [(A.monomial_str(m), H.phi_inverse(GradedPolynomial(A, {m: mpq(1)}))) for m in monos]


def _non_b(poly):
    A = poly.alphabet
    return {k: c for k, c in poly.terms.items() if not is_pure(A, k) and not _is_b_monomial(A, k)}


class _DVREchelon:
    """Echelon over Z_(2) of full vectors, pivoting on the non-B coordinates."""

    def __init__(self, pool):
        self.rows = []  # (pivot key, pivot valuation, full poly normalized to pivot 2^e)
        self.kernel = []  # (label, full poly) with vanishing non-B part
        for label, g in pool:
            self._insert(label, g)

    def _insert(self, label, g):
        g = self._reduce(g)
        nb = _non_b(g)
        if not nb:
            if g:
                self.kernel.append((label, g))
            return
        key = min(nb, key=lambda k: (padic_valuation(nb[k], P), k))
        e = padic_valuation(nb[key], P)
        g = g * (mpq(2) ** e / nb[key])
        new_rows = []
        for pk, pe, row in self.rows:
            c = row.terms.get(key)
            if c and padic_valuation(c, P) >= e:
                row = row - g * (c / mpq(2) ** e)
            new_rows.append((pk, pe, row))
        self.rows = new_rows + [(key, e, g)]

    def _reduce(self, g):
        for key, e, row in self.rows:
            c = g.terms.get(key)
            if c and padic_valuation(c, P) >= e:
                g = g - row * (c / mpq(2) ** e)
        return g

    def eliminate(self, x):
        """x + (integral combination of rows) with no non-B part, or the
        obstruction: the non-B monomials that remain."""
        for _ in range(len(self.rows) + 1):
            x = self._reduce(x)
        return x, _non_b(x)


@dataclass
class ChernReduction:
    dimension: int
    polynomial: dict  # (c0 exps, c1 exps) -> 1, over F_2
    complete: bool
    unresolved: list  # non-B monomials that could not be removed
    pool: list  # labels of the Gamma-monomials used
    ambiguous: bool  # some kernel combination of the pool has odd projection
    denominator: int


def _projection(dimension):
    n = dimension.bit_length() - 1
    if 2**n != dimension or n < 2:
        raise UnsupportedDimension(f"dimension {dimension} is not a power of 2 (>= 4)")
    B = bp_alphabet(P)
    e = 2 ** (n - 2)
    key = B.key_of({"vL1": e, "vR1": e})
    denom = 2 ** (2 ** (n - 1))
    return n, key, denom


def _check_b_relations(dimension, key, denom):
    lat = b_lattice(P, dimension)
    for g in lat.generators:
        val = g.terms.get(key, mpq(0)) * denom
        if padic_valuation(val, P) < 1 and val:
            raise AssertionError(f"B-relation {g} has odd Kervaire coefficient")


def chern_reduction(dimension):
    n, key, denom = _projection(dimension)
    _check_b_relations(dimension, key, denom)
    pool = _extension_pool(dimension)
    ech = _DVREchelon(pool)
    ambiguous = False
    for _, g in ech.kernel:
        val = g.terms.get(key, mpq(0)) * denom
        if val and padic_valuation(val, P) < 1:
            ambiguous = True
    out, unresolved = {}, set()
    B = bp_alphabet(P)
    for ckey, x in sorted(k_class(dimension).items()):
        y, rest = ech.eliminate(x)
        if rest:
            unresolved.update(B.monomial_str(k) for k in rest)
            continue
        val = y.terms.get(key, mpq(0)) * denom
        if val and padic_valuation(val, P) < 0:
            raise ArithmeticError(f"Kervaire coefficient {val} of {ckey} is not integral")
        if val and padic_valuation(val, P) == 0:
            out[ckey] = 1
    return ChernReduction(
        dimension,
        out,
        not unresolved,
        sorted(unresolved),
        [label for label, _ in pool],
        ambiguous,
        denom,
    )


def kervaire_chern_polynomial(dimension):
    if dimension not in (4, 8):
        raise UnsupportedDimension(
            f"dimension {dimension}: use chern_reduction for the experimental diagnostic"
        )
    red = chern_reduction(dimension)
    if not red.complete or red.ambiguous:
        raise ArithmeticError(f"B-reduction incomplete in dimension {dimension}: {red.unresolved}")
    return red.polynomial


def monomial_name(side, cexp):
    parts = []
    for j, e in enumerate(cexp):
        if e:
            parts.append(f"c{j + 1}^({side})" + (f"^{e}" if e > 1 else ""))
    return "*".join(parts)


def chern_number_name(ckey):
    """e.g. 'c1^(0)*c1^(1)^3' for the Chern number of a monomial pair."""
    return "*".join(x for x in (monomial_name(0, ckey[0]), monomial_name(1, ckey[1])) if x)


def polynomial_str(poly):
    return " + ".join(chern_number_name(k) for k in sorted(poly)) or "0"


@dataclass
class ChernData:
    dimension: int
    values: dict  # Chern-number name -> integer

    def required(self):
        return [chern_number_name(k) for k in sorted(kervaire_chern_polynomial(self.dimension))]


def evaluate_manifold(data):
    poly = kervaire_chern_polynomial(data.dimension)
    names = [chern_number_name(k) for k in sorted(poly)]
    missing = [n for n in names if n not in data.values]
    if missing:
        raise IncompleteChernData(f"missing Chern numbers: {missing}")
    total = sum(int(data.values[n]) for n in names)
    return {
        "dimension": data.dimension,
        "polynomial": polynomial_str(poly),
        "value": total,
        "parity": total % 2,
        "verdict": "kervaire-one" if total % 2 else "bounds-framed",
    }
