"""Weierstrass models over rings of modular forms, their formal logarithms,
and the resulting orientations of BP."""

from dataclasses import dataclass, field
from functools import lru_cache

from gmpy2 import mpq

from ..algebra.cyclotomic import reduce_scalar
from ..algebra.poly import Alphabet, GradedPolynomial
from ..algebra.series import TruncatedSeries
from ..bp.hazewinkel import gen_degree
from .qexp import CUSP_A1_INF, CUSP_A3_INF


class UnsupportedOrientation(ValueError):
    pass


class FormalGroupError(ArithmeticError):
    pass


@lru_cache(maxsize=None)
def modular_alphabet(level):
    """Topological degree is twice the weight."""
    if level == 3:
        return Alphabet(["a1", "a3"], [2, 6], tag="MF(Gamma1(3))")
    if level == 1:
        return Alphabet(["g2", "g3"], [8, 12], tag="MF(SL2(Z))")
    raise UnsupportedOrientation(f"unsupported level {level}")


def weight(key_degree):
    return key_degree // 2


def cusp_values(level):
    """q^0 of the base generators at the cusp infinity."""
    if level == 3:
        return {"a1": CUSP_A1_INF, "a3": CUSP_A3_INF}
    return {"g2": mpq(1, 12), "g3": mpq(-1, 216)}


def q0(poly, level):
    """Constant term of the q-expansion of a polynomial in base generators."""
    vals = cusp_values(level)
    A = poly.alphabet
    total = mpq(0)
    for k, c in poly.terms.items():
        term = c
        for name, e in zip(A.names, A.unpack(k)):
            if e:
                term = term * vals[name] ** e
        total = total + term
    return total


@dataclass(frozen=True)
class WeierstrassModel:
    """y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6 over a ring of forms.

    The formal parameter is z = -x/y. ``scale`` rescales it to t = z/scale
    (and divides the invariant differential by scale) before reading off the
    normalized a_n, so that a_n = scale^(n-1) * b_n with b_n the raw
    coefficients of omega/dz.
    """

    level: int
    a1: GradedPolynomial
    a2: GradedPolynomial
    a3: GradedPolynomial
    a4: GradedPolynomial
    a6: GradedPolynomial
    scale: int = 1

    @property
    def base(self):
        return self.a1.alphabet

    def b_invariants(self):
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + a2 * 4
        b4 = a1 * a3 + a4 * 2
        b6 = a3 * a3 + a6 * 4
        b8 = a1 * a1 * a6 + a2 * a6 * 4 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    def discriminant(self):
        b2, b4, b6, b8 = self.b_invariants()
        return -(b2 * b2 * b8) - b4 * b4 * b4 * 8 - b6 * b6 * 27 + b2 * b4 * b6 * 9


def level3_model():
    A = modular_alphabet(3)
    z = A.zero()
    return WeierstrassModel(3, A.gen("a1"), z, A.gen("a3"), z, z, scale=1)


def level1_model():
    """Y^2 = x^3 - (g2/4) x - g3/4, i.e. Y^2 = 4X^3 - g2 X - g3 after Y -> 2Y.

    With scale -2 this gives a5 = -8 g2 and unnormalized a11 = -2520 g2 g3.
    """
    A = modular_alphabet(1)
    z = A.zero()
    return WeierstrassModel(1, z, z, z, A.gen("g2") * mpq(-1, 4), A.gen("g3") * mpq(-1, 4), scale=-2)


@dataclass(frozen=True)
class FormalLogData:
    model: WeierstrassModel
    a: tuple  # a[n] for 1 <= n <= nmax, a[0] unused (None)

    @property
    def nmax(self):
        return len(self.a) - 1

    def coefficient(self, n):
        if not 1 <= n <= self.nmax:
            raise IndexError(f"a_{n} not computed (nmax={self.nmax})")
        return self.a[n]

    def unnormalized(self, n):
        """The coefficient before dividing omega by the parameter scale."""
        return self.coefficient(n) * self.model.scale

    def log_series(self):
        """sum a_n t^n / n."""
        A = self.model.base
        coeffs = [A.zero()] + [self.a[n] / n for n in range(1, self.nmax + 1)]
        return TruncatedSeries(coeffs, self.nmax + 1, A.zero())


def formal_log(model, nmax):
    """Coefficients a_1..a_nmax of the invariant differential in t."""
    if nmax < 1:
        raise ValueError("nmax must be at least 1")
    A = model.base
    zero, one = A.zero(), A.one()
    N = nmax + 1
    zvar = TruncatedSeries.variable(N, one)

    def zpow(k):
        return TruncatedSeries([zero] * k + [one], N, zero)

    # w = z^3 u with u = 1 + a1 z u + a2 z^2 u + a3 z^3 u^2 + a4 z^4 u^2 + a6 z^6 u^3
    u = TruncatedSeries.constant(one, N)
    for _ in range(N + 1):
        u2 = u * u
        nxt = (
            1
            + zvar * u * model.a1
            + zpow(2) * u * model.a2
            + zpow(3) * u2 * model.a3
            + zpow(4) * u2 * model.a4
            + zpow(6) * u2 * u * model.a6
        )
        if nxt == u:
            break
        u = nxt
    else:
        raise FormalGroupError("fixed-point iteration for w(z) did not stabilize")
    num = (zvar * u.derivative().shift_up(0).truncate(N - 1) * u.truncate(N - 1).inverse()).truncate(N - 1)
    num = num + 2
    den = (zvar.truncate(N - 1) * model.a1 + zpow(3).truncate(N - 1) * u.truncate(N - 1) * model.a3) * -1 + 2
    omega = num * den.inverse()  # omega/dz, known mod z^(N-1) = z^nmax
    s = model.scale
    a = [None] + [omega[n - 1] * mpq(s) ** (n - 1) for n in range(1, nmax + 1)]
    if a[1] != one:
        raise FormalGroupError(f"normalization failed: a_1 = {a[1]}")
    for n in range(1, nmax + 1):
        if a[n] and any(d != 2 * (n - 1) for d in a[n].degrees()):
            raise FormalGroupError(f"a_{n} is not of weight {n - 1}")
    return FormalLogData(model, tuple(a))


@lru_cache(maxsize=None)
def _formal_log_cached(level, nmax):
    model = level3_model() if level == 3 else level1_model()
    return formal_log(model, nmax)


def supported(p, level):
    return (p, level) == (2, 3) or (level == 1 and p >= 5 and _is_prime(p))


def _is_prime(n):
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def eisenstein_lift(p):
    """E_{p-1} as a polynomial in g2, g3 (for the primes where it is a monomial)."""
    A = modular_alphabet(1)
    g2, g3 = A.gen("g2"), A.gen("g3")
    table = {5: g2 * 12, 7: g3 * -216, 11: g2 * g3 * -2592}
    if p not in table:
        raise UnsupportedOrientation(f"Eisenstein override not available at p={p}")
    return table[p]


@dataclass(frozen=True)
class Orientation:
    p: int
    level: int
    nmax: int
    images: dict = field(hash=False)  # n -> alpha(v_n)
    log_images: dict = field(hash=False)  # n -> alpha(l_n)
    flavor: str = "default"

    @property
    def base(self):
        return modular_alphabet(self.level)

    def image(self, n):
        if n not in self.images:
            raise UnsupportedOrientation(f"alpha(v{n}) not computed (nmax={self.nmax})")
        return self.images[n]

    @property
    def a(self):
        """q^0(alpha(v1))."""
        return q0(self.images[1], self.level)

    @property
    def b(self):
        """q^0(alpha(v2)) reduced mod p."""
        return reduce_scalar(q0(self.images[2], self.level), self.p)

    def q0_image(self, n):
        return q0(self.image(n), self.level)

    def apply(self, x, names=None):
        """alpha on a polynomial in v's (names maps generator name -> index)."""
        names = names or {f"v{i}": i for i in range(1, self.nmax + 1)}
        A = x.alphabet
        mapping = {}
        for nm in A.names:
            if nm in names:
                mapping[nm] = self.image(names[nm])
        used = set(x.variables())
        stray = [n for n in used if n not in mapping]
        if stray:
            raise UnsupportedOrientation(f"alpha undefined on {sorted(stray)}")
        mapping = {k: v for k, v in mapping.items() if k in used}
        return x.substitute(mapping, target=self.base, check_degrees=False)


def _solve_images(p, logs, nmax):
    """v_n = p l_n - sum_{i=1}^{n-1} l_i v_{n-i}^{p^i}."""
    images = {}
    for n in range(1, nmax + 1):
        v = logs[n] * p
        for i in range(1, n):
            v = v - logs[i] * images[n - i] ** (p**i)
        if not v.is_p_integral(p):
            raise FormalGroupError(f"alpha(v{n}) = {v} is not {p}-integral")
        images[n] = v
    return images


@lru_cache(maxsize=None)
def orientation(p, level, nmax=None, flavor="default"):
    if not supported(p, level):
        raise UnsupportedOrientation(f"unsupported (p, level) = ({p}, {level})")
    if nmax is None:
        nmax = 3 if level == 3 else 2
    data = _formal_log_cached(level, p**nmax)
    logs = {n: data.coefficient(p**n) / mpq(p) ** n for n in range(1, nmax + 1)}
    images = _solve_images(p, logs, nmax)
    if flavor == "eisenstein":
        if level != 1:
            raise UnsupportedOrientation("the Eisenstein override applies at level 1")
        images = dict(images)
        images[1] = eisenstein_lift(p)
    elif flavor != "default":
        raise UnsupportedOrientation(f"unknown orientation flavor {flavor!r}")
    for n, img in images.items():
        if img and any(d != gen_degree(p, n) for d in img.degrees()):
            raise FormalGroupError(f"alpha(v{n}) has the wrong degree")
    return Orientation(p, level, nmax, images, logs, flavor)


def formal_log_data(level, nmax):
    return _formal_log_cached(level, nmax)
