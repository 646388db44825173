import random
from fractions import Fraction

import pytest
import sympy
from gmpy2 import mpq

from betadc.bp.beta import (
    InvalidIndices,
    UnsupportedIndices,
    alpha1_alpha_t_representative,
    beta_construction,
    beta_representative,
    beta_t_cocycle,
    invariance_check,
    x_sequence,
)
from betadc.bp.cobar import cobar_alphabet, contracting_homotopy, differential
from betadc.bp.hazewinkel import bp_alphabet, hazewinkel
from betadc.bp.hopf import hopf
from betadc.bp.lattice import coset_reduce, lattice_basis

from .helpers import random_homogeneous, random_poly, _mixed


def to_sympy(poly, symbols):
    A = poly.alphabet
    out = 0
    for k, c in poly.terms.items():
        term = sympy.Rational(int(c.numerator), int(c.denominator))
        for name, e in zip(A.names, A.unpack(k)):
            if e:
                term *= symbols[name] ** e
        out += term
    return sympy.expand(out)


# -- Hazewinkel generators and the right unit ----------------------------------
def test_hazewinkel_base_cases():
    for p in (2, 3, 5):
        A = bp_alphabet(p)
        assert hazewinkel(p).l(1) == A.gen("v1") / p
        assert hazewinkel(p).check_recursion()
    A = bp_alphabet(2)
    assert hazewinkel(2).l(2) == A.gen("v2") / 2 + A.gen("v1") ** 3 / 4


def _sympy_eta(p, nmax):
    """Independent right unit from eta_R(l_n) = sum_i l_i t_(n-i)^(p^i)."""
    v = [None] + list(sympy.symbols(f"v1:{nmax + 1}"))
    t = [1] + list(sympy.symbols(f"t1:{nmax + 1}"))
    logs = [sympy.Integer(1)]
    for n in range(1, nmax + 1):
        logs.append(sympy.expand(sum(logs[i] * v[n - i] ** (p**i) for i in range(n)) / p))
    eta_log = [sympy.expand(sum(logs[i] * t[n - i] ** (p**i) for i in range(n + 1))) for n in range(nmax + 1)]
    eta = [None]
    for n in range(1, nmax + 1):
        val = p * eta_log[n] - sum(eta_log[i] * eta[n - i] ** (p**i) for i in range(1, n))
        eta.append(sympy.expand(val))
    syms = {f"v{i}": v[i] for i in range(1, nmax + 1)}
    syms.update({f"t{i}": t[i] for i in range(1, nmax + 1)})
    return eta, syms


@pytest.mark.parametrize("p,nmax", [(2, 3), (3, 2), (5, 2)])
def test_right_unit_against_sympy(p, nmax):
    eta, syms = _sympy_eta(p, nmax)
    H = hopf(p)
    for n in range(1, nmax + 1):
        assert sympy.expand(to_sympy(H.eta_R_gen(n), syms) - eta[n]) == 0


@pytest.mark.parametrize("p", [2, 3, 5])
def test_right_unit_quoted_values(p):
    H = hopf(p)
    v1, v2, t1 = H.v[1], H.v[2], H.t[1]
    assert H.eta_R_gen(1) == v1 + t1 * p
    assert not (H.eta_R_gen(2) - (v2 + v1 * t1**p - v1**p * t1)).reduce_mod(p)
    assert H.eta_R(H.A.one()).image == H.A.one()


def test_right_unit_is_multiplicative():
    H = hopf(2)
    rng = random.Random(4)
    for _ in range(25):
        x = random_poly(rng, H.A, terms=3, max_exp=2, names=["v1", "v2"])
        y = random_poly(rng, H.A, terms=3, max_exp=2, names=["v1", "v2"])
        assert H.eta_R(x * y).image == H.eta_R(x).image * H.eta_R(y).image


def test_right_unit_modulus():
    H = hopf(2)
    img = H.eta_R(H.v[1], modulus=2).image
    assert img == H.v[1]


# -- phi and its inverse ---------------------------------------------------------
def test_phi_inverse_t1_and_left_linearity():
    for p in (2, 3, 5):
        H = hopf(p)
        A = H.A
        want = (A.gen("vR1") - A.gen("vL1")) / p
        assert H.phi_inverse(H.t[1]) == want
        assert H.phi_inverse(H.v[1] * H.t[1]) == A.gen("vL1") * want
        assert H.phi(A.gen("vL1")) == H.v[1]
        assert H.phi(A.gen("vR1")) == H.v[1] + H.t[1] * p


def test_phi_round_trip_small_monomials():
    H = hopf(2)
    A = H.A
    for a in range(7):
        for b in range(7 - a):
            for c in range(7 - a - b):
                g = A.monomial({"t1": a, "t2": b, "v1": c})
                assert H.phi(H.phi_inverse(g)) == g


def test_phi_inverse_round_trip_on_tensors():
    for p, top in ((2, 24), (5, 64)):
        H = hopf(p)
        A = H.A
        names = [n for n in A.names if n.startswith(("vL", "vR"))]
        for d in range(2, top + 1, 2):
            for m in A.monomials_of_degree(d, names):
                x = A.monomial(dict(zip(A.names, A.unpack(m))))
                assert H.phi_inverse(H.phi(x)) == x


def test_phi_inverse_t2():
    H = hopf(2)
    A = H.A
    L1, L2, R1, R2 = (A.gen(n) for n in ("vL1", "vL2", "vR1", "vR2"))
    derived = R2 / 2 - L2 / 2 + R1**3 / 4 - L1 * R1**2 / 8 + L1**2 * R1 / 4 - L1**3 * mpq(3, 8)
    assert H.phi_inverse(H.t[2]) == derived
    printed = derived + L2 / 2 - L2  # the printed "(v2 (x) 1)/1"
    assert H.phi(printed) != H.t[2]


def test_phi_inverse_t1_t2():
    H = hopf(2)
    A = H.A
    x = H.phi_inverse(H.t[1] * H.t[2])
    assert x.coefficient({"vL1": 1, "vR2": 1}) == mpq(-1, 4)
    assert x.coefficient({"vL1": 2, "vR1": 2}) == mpq(3, 16)
    # the printed -1/16 differs by vL1^2 vR1^2 / 4, which is zero in the quotient
    assert coset_reduce(A.gen("vL1") ** 2 * A.gen("vR1") ** 2 / 4, 2, 8).is_zero()


# -- the lattice -------------------------------------------------------------------
class _Oracle:
    """Z_(p)-echelon with Python Fractions: pivot on minimal valuation."""

    def __init__(self, p, rows):
        self.p = p
        self.rows = []
        pool = [r[:] for r in rows if any(r)]
        n = len(rows[0]) if rows else 0
        for c in range(n):
            cands = [r for r in pool if r[c]]
            if not cands:
                continue
            piv = min(cands, key=lambda r: self._val(r[c]))
            pool.remove(piv)
            pool = [[a - (r[c] / piv[c]) * b for a, b in zip(r, piv)] if r[c] else r for r in pool]
            pool = [r for r in pool if any(r)]
            self.rows.append((c, piv))

    def _val(self, q):
        return padic(q, self.p)

    def contains(self, x):
        x = x[:]
        for c, row in self.rows:
            if x[c]:
                f = x[c] / row[c]
                if self._val(f) < 0:
                    return False
                x = [a - f * b for a, b in zip(x, row)]
        return not any(x)


def padic(q, p):
    q = Fraction(q)
    v, num, den = 0, q.numerator, q.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


def _vec(lat, poly):
    out = [Fraction(0)] * len(lat.coords)
    for i, c in lat._vector(poly).items():
        out[i] = Fraction(int(c.numerator), int(c.denominator))
    return out


@pytest.mark.parametrize("degree", [4, 8, 12])
def test_lattice_against_fraction_oracle(degree):
    lat = lattice_basis(2, degree)
    oracle = _Oracle(2, [_vec(lat, g) for g in lat.generators])
    A = bp_alphabet(2)
    rng = random.Random(degree)
    nontrivial = 0
    for _ in range(60):
        x = _mixed(random_homogeneous(rng, A, degree, ["vL1", "vL2", "vR1", "vR2"], den_exp=5))
        c = coset_reduce(x, 2, degree)
        member = oracle.contains(_vec(lat, x))
        assert c.is_zero() == member
        m = 0
        while not oracle.contains([a * 2**m for a in _vec(lat, x)]):
            m += 1
        assert c.order == 2**m
        nontrivial += m > 0
    assert nontrivial > 10


def test_quoted_memberships():
    A = bp_alphabet(2)
    L1, R1 = A.gen("vL1"), A.gen("vR1")
    assert coset_reduce(L1 * R1 / 2, 2, 4).is_zero()
    assert coset_reduce(L1 * R1 / 4, 2, 4).order == 2
    assert coset_reduce(L1**2 * R1**2 / 8, 2, 8).is_zero()
    assert coset_reduce(L1 * R1**3 * 7 - L1**2 * R1**2, 2, 8).is_zero()


def test_degree_zero_quotient_trivial():
    A = bp_alphabet(2)
    assert coset_reduce(A.one() / 2, 2, 0).is_zero()


# -- beta representatives ------------------------------------------------------------
def test_x_sequence():
    H = hopf(2)
    v1, v2 = H.v[1], H.v[2]
    assert x_sequence(0) == v2
    assert x_sequence(2) == v2**4 - v1**3 * v2**3
    assert x_sequence(3) == (v2**4 - v1**3 * v2**3) ** 2


def test_invariance_checks():
    for p in (2, 3, 5):
        H = hopf(p)
        assert invariance_check(H.v[2], p, 1, 1)
        assert invariance_check(H.v[1], p, 1, 0)
        assert not invariance_check(H.v[2], p, 1, 2)
    assert invariance_check(x_sequence(2), 2, 1, 4)


def test_beta_22_equals_printed_coset():
    A = bp_alphabet(2)
    L1, R1 = A.gen("vL1"), A.gen("vR1")
    printed = -L1 * R1**3 / 8 + L1**2 * R1**2 * mpq(5, 16) - L1**3 * R1 * mpq(3, 8)
    b = beta_representative(2, 2, 1, 2)
    assert coset_reduce(printed, 2, 8) == b
    assert b.order == 2


def test_beta_cocycles_match_closed_formula():
    for t, p in ((3, 2), (1, 5), (2, 5)):
        z = beta_construction(t, 1, 1, p).z
        assert not (z - beta_t_cocycle(t, p)).reduce_mod(p)


def test_beta_44_cocycle():
    H = hopf(2)
    v1, v2, t1 = H.v[1], H.v[2], H.t[1]
    printed = (
        v1 * v2**2 * t1 + v2**2 * t1**2 + v1**3 * v2 * t1**2 + v1**5 * t1**3
        + v1 * v2 * t1**4 + v1**3 * t1**5 + v1**2 * t1**6 + t1**8
    )
    assert not (beta_construction(4, 4, 1, 2).z - printed).reduce_mod(2)


def test_unreduced_construction_keeps_the_cochain():
    full = beta_construction(2, 2, 1, 2)
    raw = beta_construction(2, 2, 1, 2, reduce=False)
    assert raw.coset.source == full.coset.source
    assert raw.coset.order_exponent == 1


def test_refusals():
    with pytest.raises(UnsupportedIndices, match="r>1 unsupported"):
        beta_representative(1, 1, 2, 5)
    with pytest.raises(InvalidIndices):
        beta_representative(1, 2, 1, 2)  # (2, v1^2, v2) is not invariant
    with pytest.raises(InvalidIndices):
        alpha1_alpha_t_representative(2)


def test_alpha1_alpha_t():
    A = bp_alphabet(2)
    L1, R1 = A.gen("vL1"), A.gen("vR1")
    c1 = alpha1_alpha_t_representative(1)
    assert c1 == coset_reduce(L1 * R1 / 4, 2, 4) and c1.order == 2
    c3 = alpha1_alpha_t_representative(3)
    assert c3 == coset_reduce(L1 * R1**3 / 4, 2, 8)
    assert (c3 + c3).is_zero()


# -- cobar complex ----------------------------------------------------------------------
@pytest.mark.parametrize("n", [1, 2])
def test_contracting_homotopy(n):
    rng = random.Random(n)
    A = cobar_alphabet(2, n + 1)
    for _ in range(50):
        x = random_poly(rng, A, terms=3, max_exp=2)
        lhs = differential(contracting_homotopy(x, n), n - 1) + contracting_homotopy(differential(x, n), n + 1)
        assert lhs == x


def test_d_squared_zero():
    rng = random.Random(9)
    for n in range(3):
        A = cobar_alphabet(2, n + 1)
        for _ in range(30):
            x = random_poly(rng, A, terms=3, max_exp=2)
            assert differential(differential(x, n), n + 1).is_zero()
