"""Greek-letter representatives on the 2-line.

beta_{t,s,r} comes from the invariant ideal (p^r, v_1^s, x_n^{t'}) with
t = p^n t': lift x to y, form d(y) = eta_R(y) - y mod p^r, divide by v_1^s to
get a cocycle z, lift z to w and take the class of phi^{-1}(w)/p^r in the
rational tensor square modulo integral and pure tensors.
"""

from dataclasses import dataclass

from gmpy2 import mpq

from ..algebra.poly import GradedPolynomial
from .hopf import hopf
from .lattice import TensorCoset, coset_reduce


class InvalidIndices(ValueError):
    pass


class UnsupportedIndices(InvalidIndices):
    pass


def x_sequence(n, p=2):
    """x_0 = v2, x_1 = v2^2, x_2 = v2^4 - v1^3 v2^3, x_n = x_{n-1}^2 (p = 2)."""
    if p != 2:
        if n == 0:
            return hopf(p).v[2]
        raise UnsupportedIndices(f"x_{n} is only implemented at p=2")
    if n < 0:
        raise InvalidIndices("n must be non-negative")
    h = hopf(2)
    v1, v2 = h.v[1], h.v[2]
    if n == 0:
        return v2
    if n == 1:
        return v2**2
    x = v2**4 - v1**3 * v2**3
    for _ in range(n - 2):
        x = x * x
    return x


def split_index(t, p):
    n, tp = 0, t
    while tp % p == 0:
        tp //= p
        n += 1
    return n, tp


@dataclass(frozen=True)
class InvarianceCertificate:
    holds: bool
    p_cofactor: GradedPolynomial = None  # A with eta_R(x) - x = p^r A + v1^s B
    v1_cofactor: GradedPolynomial = None  # B, coefficients in [0, p^r)
    reason: str = ""

    def __bool__(self):
        return self.holds


def invariance_check(x, p, r=1, s=0):
    """Is eta_R(x) - x in (p^r, v1^s) Gamma? s = 0 means the ideal (p^r) alone."""
    h = hopf(p)
    diff = h.eta_R(x).image - x
    pr = p**r
    reduced = diff.reduce_mod(p, r)
    if s:
        try:
            B = reduced.divide_by_monomial({"v1": s})
        except ArithmeticError as exc:
            return InvarianceCertificate(False, reason=str(exc))
        rest = diff - B * h.v[1] ** s
    else:
        if reduced:
            return InvarianceCertificate(False, reason=f"eta_R(x) - x = {reduced} mod {pr}")
        B = h.A.zero()
        rest = diff
    A = rest / mpq(pr)
    if not A.is_p_integral(p):
        return InvarianceCertificate(False, reason="p-part of the decomposition is not integral")
    assert diff == A * pr + B * h.v[1] ** s
    return InvarianceCertificate(True, A, B)


@dataclass(frozen=True)
class BetaConstruction:
    t: int
    s: int
    r: int
    p: int
    x: GradedPolynomial
    z: GradedPolynomial  # cocycle in Gamma / p^r, coefficients in [0, p^r)
    raw: GradedPolynomial  # phi^{-1}(w) / p^r
    coset: TensorCoset


def beta_construction(t, s, r=1, p=2, reduce=True):
    """With reduce=False the full-lattice normal form is skipped (it dominates
    the cost in large degrees); the coset then carries the raw cochain as its
    representative and the order p^r of the construction."""
    if min(t, s, r) < 1:
        raise InvalidIndices("t, s, r must be positive")
    if r > 1:
        raise UnsupportedIndices("r>1 unsupported")
    n, tp = split_index(t, p)
    x = x_sequence(n, p) ** tp
    cert = invariance_check(x, p, r, s)
    if not cert:
        raise InvalidIndices(f"(p^{r}, v1^{s}, x) is not invariant for beta_{t},{s}: {cert.reason}")
    h = hopf(p)
    # y = x already has coefficients in [0, p^r) for every x we build
    y = x.reduce_mod(p, r)
    dy = (h.eta_R(y).image - y).reduce_mod(p, r)
    z = dy.divide_by_monomial({"v1": s})
    w = z  # lift with coefficients in [0, p^r)
    raw = h.phi_inverse(w) / mpq(p**r)
    degree = w.degree()
    if reduce:
        coset = coset_reduce(raw, p, degree)
    else:
        coset = TensorCoset(degree, p, raw, r, None, raw)
    return BetaConstruction(t, s, r, p, x, z, raw, coset)


def beta_representative(t, s, r=1, p=2):
    return beta_construction(t, s, r, p).coset


def beta_t_cocycle(t, p):
    """sum_{i=1}^t C(t,i) v2^(t-i) v1^(i-1) t1^i (t1^(p-1) - v1^(p-1))^i."""
    from math import comb

    h = hopf(p)
    v1, v2, t1 = h.v[1], h.v[2], h.t[1]
    out = h.A.zero()
    for i in range(1, t + 1):
        out = out + v2 ** (t - i) * v1 ** (i - 1) * t1**i * (t1 ** (p - 1) - v1 ** (p - 1)) ** i * comb(t, i)
    return out


def alpha1_alpha_t_representative(t, p=2):
    """Class of (vL1 vR1^t) / 4."""
    if p != 2:
        raise UnsupportedIndices("alpha_1 alpha_t representatives are implemented at p=2")
    if t < 1 or t % 2 == 0:
        raise InvalidIndices("t must be odd and positive")
    h = hopf(2)
    x = h.vL[1] * h.vR[1] ** t / mpq(4)
    return coset_reduce(x, 2, 2 + 2 * t)
