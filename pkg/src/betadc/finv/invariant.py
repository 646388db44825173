"""The f-invariant of Ext^2 classes: representative -> (alpha (x) alpha) ->
iota_2 -> times p^r -> reduction mod p, modulo the top-weight ambiguity."""

from dataclasses import dataclass, field
from math import gcd

import numpy as np
from gmpy2 import mpq

from ..algebra.cyclotomic import ResidueValue
from ..bp.beta import InvalidIndices, alpha1_alpha_t_representative, beta_representative
from ..modular.divided import DEFAULT_PRECISION, DividedCongruence, iota2
from ..modular.igusa import (
    ResidueSeries,
    a3_series,
    degree_bound,
    structured_series,
    structured_str,
    t_series,
)
from .ambiguity import ambiguity


class PipelineError(ArithmeticError):
    pass


@dataclass
class FClass:
    degree: int
    p: int
    level: int
    series: ResidueSeries  # the psi-image with constant term 0
    ambiguity: object = field(repr=False)
    structured: dict = None  # a structured representative mod ambiguity
    divided: DividedCongruence = field(default=None, repr=False)
    label: str = ""
    correction: tuple = ()

    @property
    def weight(self):
        return self.degree // 2

    @property
    def precision(self):
        return self.series.precision

    def __sub__(self, other):
        return self.series - other.series

    def equals(self, other):
        """Equality modulo the ambiguity, to the joint precision."""
        if (self.p, self.level, self.degree) != (other.p, other.level, other.degree):
            return False
        return self.ambiguity.contains(self.series - other.series)

    def is_zero(self):
        return self.ambiguity.contains(self.series)

    def normal_form(self):
        if self.structured is None:
            return None
        return self.ambiguity.normal_form(self.structured, degree_bound(self.degree))

    def structured_text(self):
        if self.structured is None:
            return None
        return structured_str(self.structured)

    def to_json(self):
        nf = self.normal_form()
        return {
            "label": self.label,
            "degree": self.degree,
            "prime": self.p,
            "level": self.level,
            "structured": self.structured_text(),
            "normal_form": None if nf is None else structured_str(nf),
            "series_digest": self.series.digest(),
            "nonzero_coefficients": self.series.nonzero_positions()[:40],
            "precision": self.precision,
            "ambiguity_basis_size": self.ambiguity.size,
        }

    def __str__(self):
        s = self.structured_text()
        if s is not None:
            return s
        return repr(self.series)


def _finish(series, degree, p, level, N, label, divided=None, correction=()):
    if series.precision != N:
        series = series.truncate(N)
    amb = ambiguity(p, level, degree // 2, N)
    structured = None
    if (p, level) == (2, 3):
        ig = amb.structure(series, degree_bound(degree))
        if ig.in_span:
            structured = ig.structured
    return FClass(degree, p, level, series, amb, structured, divided, label, correction)


def f_invariant(coset, orient, N=DEFAULT_PRECISION, label=""):
    """psi-image of a TensorCoset: p^r * iota_2((alpha (x) alpha)(x)), corrected
    by a top-weight form so that its nonconstant part is integral, mod p."""
    if coset.degree % 2:
        raise ValueError("odd degree")
    if coset.p != orient.p:
        raise ValueError(f"coset at p={coset.p} but orientation at p={orient.p}")
    p = orient.p
    r = coset.order_exponent
    x = coset.source if coset.source is not None else coset.representative
    if r == 0:
        zero = ResidueSeries(p, np.zeros(N, dtype=np.int64))
        return _finish(zero, coset.degree, p, orient.level, N, label)
    dc = DividedCongruence.from_poly(iota2(x, orient), p, orient.level) * mpq(p) ** r
    re, im = dc.components(N)
    amb = ambiguity(p, orient.level, coset.degree // 2, N)
    try:
        re_fixed, lam_re = amb.correct(re)
        im_fixed, lam_im = amb.correct(im)
    except ArithmeticError as exc:
        raise PipelineError(f"psi-image is not integral modulo top-weight forms: {exc}") from exc
    re_fixed[0] = im_fixed[0] = mpq(0)
    series = ResidueSeries.from_components(re_fixed, im_fixed, p)
    return _finish(series, coset.degree, p, orient.level, N, label, dc, (tuple(lam_re), tuple(lam_im)))


# -- closed forms -----------------------------------------------------------
def _hasse_T(orient, N):
    """T = (alpha(v1) - q0(alpha(v1))) / p mod p."""
    f = DividedCongruence.from_poly(orient.image(1), orient.p, orient.level)
    f = (f - f.q0()) / orient.p
    return f.reduce(N)


def beta_degree(t, s, p):
    return 2 * t * (p * p - 1) - 2 * s * (p - 1)


def closed_form_beta_t(t, orient, N=DEFAULT_PRECISION):
    """b^t - (T^p - T + b)^t."""
    p = orient.p
    if gcd(t, p) != 1:
        raise InvalidIndices(f"t={t} must be prime to p={p}")
    T = _hasse_T(orient, N)
    b = orient.b
    inner = T**p - T + b
    series = ResidueSeries.constant(b**t if t else 1, p, N) - inner**t
    return _finish(series, beta_degree(t, 1, p), p, orient.level, N, f"beta_{t}")


def _f2_pow(poly, s):
    """poly (set of a3-exponents, F_2 coefficients) to the s-th power."""
    out = {0}
    for _ in range(s):
        nxt = set()
        for a in out:
            for b in poly:
                nxt ^= {a + b}
        out = nxt
    return out


def kervaire_family_form(s, n):
    """Structured closed form of f(beta_{s 2^n, 2^n}) at p=2, level 3."""
    if s % 2 == 0 or s < 1 or n < 0:
        raise InvalidIndices("s must be odd and positive, n >= 0")
    if (s, n) == (1, 0):
        raise InvalidIndices("(s, n) = (1, 0) is excluded")
    if n == 0:
        exps = {0} ^ {s}
    elif n == 1:
        exps = {0} ^ {2 * s}
    else:
        exps = _f2_pow({2**n, 3 * 2 ** (n - 2)}, s)
    one = ResidueValue(1, 0, 2)
    return {(e, 0): one for e in exps}


def closed_form_kervaire_family(s, n, N=DEFAULT_PRECISION):
    form = kervaire_family_form(s, n)
    series = structured_series(form, N)
    degree = beta_degree(s * 2**n, 2**n, 2)
    out = _finish(series, degree, 2, 3, N, f"beta_{{{s * 2**n},{2**n}}}")
    out.structured = form
    return out


def closed_form_alpha1_alpha(t, N=DEFAULT_PRECISION):
    """f(alpha_1 alpha_t) = T."""
    form = {(0, 1): ResidueValue(1, 0, 2)}
    out = _finish(t_series(N), 2 + 2 * t, 2, 3, N, f"alpha1*alpha{t}")
    out.structured = form
    return out


# -- the catalog ---------------------------------------------------------------
@dataclass
class Ext2Generator:
    name: str
    kind: str  # "alpha1alpha" or "beta"
    indices: tuple  # (t,) or (s, i) meaning beta_{s 2^i, 2^i}
    degree: int

    def closed_form(self, N=DEFAULT_PRECISION):
        if self.kind == "alpha1alpha":
            return closed_form_alpha1_alpha(self.indices[0], N)
        s, i = self.indices
        return closed_form_kervaire_family(s, i, N)

    def representative(self):
        if self.kind == "alpha1alpha":
            return alpha1_alpha_t_representative(self.indices[0], 2)
        s, i = self.indices
        return beta_representative(s * 2**i, 2**i, 1, 2)

    @property
    def is_kervaire(self):
        return self.kind == "beta" and self.indices[0] == 1


def ext2_catalog(n):
    """Generators of Ext^{2, 2^n} at p = 2."""
    if n < 2:
        raise InvalidIndices("n must be at least 2")
    t = 2 ** (n - 1) - 1
    out = [Ext2Generator(f"alpha1*alpha{t}", "alpha1alpha", (t,), 2**n)]
    for m in range(1, n, 2):
        i = n - m - 1
        s = (2**m + 1) // 3
        if (s, i) == (1, 0):
            continue
        out.append(Ext2Generator(f"beta_{{{s * 2**i},{2**i}}}", "beta", (s, i), 2**n))
    return out


def kervaire_projection(c, n):
    """The coefficient of a3^(2^(n-2)) in a structured representative, as a bit."""
    if c.structured is None:
        raise ValueError("kervaire_projection needs a structured class")
    if (c.p, c.level) != (2, 3):
        raise ValueError("kervaire_projection lives at p=2, level 3")
    if c.degree != 2**n or n < 3:
        raise ValueError(f"class of degree {c.degree} is not in Ext^(2,2^{n}) with n >= 3")
    key = (2 ** (n - 2), 0)
    for f in c.ambiguity.structured_intersection(degree_bound(c.degree)):
        if f.get(key):
            raise AssertionError(f"ambiguity touches a3^{2 ** (n - 2)} in degree {c.degree}")
    coef = c.structured.get(key, ResidueValue(0, 0, 2))
    return 1 if coef else 0
