"""The Hopf algebroid (BP_*, BP_*BP): right unit and the isomorphism
phi: BP_Q (x) BP_Q -> BP_*BP (x) Q, a (x) b |-> a * eta_R(b).

Everything lives in the single alphabet of `bp_alphabet(p)`: v_i and t_i
describe Gamma, vL_i and vR_i the two tensor factors.
"""

from dataclasses import dataclass
from functools import lru_cache
import threading


from ..algebra.poly import GradedPolynomial
from ..algebra.rational import NonIntegralError
from .hazewinkel import bp_alphabet, default_nmax, hazewinkel


class HopfAlgebroid:
    """Lazily computed structure maps at a prime p (one instance per p)."""

    def __init__(self, p):
        self.p = p
        self.nmax = default_nmax(p)
        self.A = bp_alphabet(p)
        A = self.A
        self.v = [None] + [A.gen(f"v{i}") for i in range(1, self.nmax + 1)]
        self.t = [A.one()] + [A.gen(f"t{i}") for i in range(1, self.nmax + 1)]
        self.vL = [None] + [A.gen(f"vL{i}") for i in range(1, self.nmax + 1)]
        self.vR = [None] + [A.gen(f"vR{i}") for i in range(1, self.nmax + 1)]
        self.logs = hazewinkel(p, self.nmax, "v").logs
        self.logs_L = hazewinkel(p, self.nmax, "vL").logs
        self.logs_R = hazewinkel(p, self.nmax, "vR").logs
        self._eta = {}
        self._eta_log = {}
        self._T = {0: A.one()}
        self._lock = threading.RLock()
        self._phi_mono = {}
        self._phi_inv_mono = {}

    # -- right unit --------------------------------------------------------
    def eta_R_log(self, n):
        """eta_R(l_n) = sum_{i=0}^n l_i t_{n-i}^(p^i)."""
        val = self._eta_log.get(n)
        if val is None:
            val = self.A.zero()
            for i in range(n + 1):
                val = val + self.logs[i] * self.t[n - i] ** (self.p**i)
            self._eta_log[n] = val
        return val

    def eta_R_gen(self, n):
        """eta_R(v_n), solved from p*l_n = sum l_i v_{n-i}^(p^i) applied to
        eta_R, then checked to be integral."""
        if n > self.nmax:
            raise ValueError(f"v{n} is beyond the generators available at p={self.p}")
        val = self._eta.get(n)
        if val is not None:
            return val
        with self._lock:
            p = self.p
            val = self.eta_R_log(n) * p
            for i in range(1, n):
                val = val - self.eta_R_log(i) * self.eta_R_gen(n - i) ** (p**i)
            if not val.is_p_integral(p):
                raise NonIntegralError(f"eta_R(v{n}) came out non-integral: recursion bug")
            self._eta[n] = val
        return val

    def eta_R(self, x, modulus=None):
        """Right unit on a polynomial in the v's. With modulus p^r the
        coefficients are reduced into [0, p^r)."""
        self._require(x, ("v",))
        mapping = {f"v{i}": self.eta_R_gen(i) for i in self._used_indices(x, "v")}
        image = x.substitute(mapping)
        if modulus is not None:
            r = _exponent_of(modulus, self.p)
            image = image.reduce_mod(self.p, r)
        return RightUnitImage(x, image, modulus)

    # -- phi and its inverse ---------------------------------------------
    def T(self, n):
        """phi^{-1}(t_n) = lR_n - sum_{i=1}^n lL_i T_{n-i}^(p^i)."""
        val = self._T.get(n)
        if val is None:
            p = self.p
            val = self.logs_R[n]
            for i in range(1, n + 1):
                val = val - self.logs_L[i] * self.T(n - i) ** (p**i)
            self._T[n] = val
        return val

    def phi_inverse(self, g):
        """Gamma (x) Q -> BP_Q (x) BP_Q: v_i -> vL_i, t_i -> T_i."""
        self._require(g, ("v", "t"))
        return self._map_monomials(g, self._phi_inv_mono, self._phi_inv_gen)

    def phi(self, x):
        """BP_Q (x) BP_Q -> Gamma (x) Q: vL_i -> v_i, vR_i -> eta_R(v_i)."""
        self._require(x, ("vL", "vR"))
        return self._map_monomials(x, self._phi_mono, self._phi_gen)

    def _phi_inv_gen(self, name):
        if name.startswith("v"):
            return self.vL[int(name[1:])]
        return self.T(int(name[1:]))

    def _phi_gen(self, name):
        if name.startswith("vL"):
            return self.v[int(name[2:])]
        return self.eta_R_gen(int(name[2:]))

    def _map_monomials(self, poly, memo, gen_image):
        A = self.A
        acc = {}
        for key, c in poly.terms.items():
            img = self._mono_image(key, memo, gen_image)
            for k, cc in img.terms.items():
                v = acc.get(k)
                acc[k] = cc * c if v is None else v + cc * c
        return GradedPolynomial(A, acc)

    def _mono_image(self, key, memo, gen_image):
        # multiplicative with memo: strip one generator at a time
        if key == 0:
            return self.A.one()
        val = memo.get(key)
        if val is not None:
            return val
        A = self.A
        exps = A.unpack(key)
        i = next(j for j, e in enumerate(exps) if e)
        gkey = A.key_of({A.names[i]: 1})
        val = self._mono_image(key - gkey, memo, gen_image) * gen_image(A.names[i])
        memo[key] = val
        return val

    # -- helpers -----------------------------------------------------------
    def _used_indices(self, x, prefix):
        out = []
        for name in x.variables():
            if name.startswith(prefix) and name[len(prefix):].isdigit():
                out.append(int(name[len(prefix):]))
        return sorted(out)

    def _require(self, x, prefixes):
        if x.alphabet != self.A:
            raise ValueError(f"expected a polynomial over {self.A!r}")
        for name in x.variables():
            base = name.rstrip("0123456789")
            if base not in prefixes:
                raise ValueError(f"generator {name} not allowed here (expected {prefixes})")


@dataclass(frozen=True)
class RightUnitImage:
    source: GradedPolynomial
    image: GradedPolynomial
    modulus: object = None


def _exponent_of(modulus, p):
    r, m = 0, int(modulus)
    while m % p == 0:
        m //= p
        r += 1
    if m != 1 or r == 0:
        raise ValueError(f"modulus {modulus} is not a positive power of {p}")
    return r


@lru_cache(maxsize=None)
def hopf(p):
    return HopfAlgebroid(p)


def eta_R(x, p, modulus=None):
    return hopf(p).eta_R(x, modulus)


def phi(x, p):
    return hopf(p).phi(x)


def phi_inverse(g, p):
    return hopf(p).phi_inverse(g)


def gens(p):
    """Convenience: (v, t, vL, vR) generator lists, index 0 unused."""
    h = hopf(p)
    return h.v, h.t, h.vL, h.vR


