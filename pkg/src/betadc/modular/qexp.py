"""q-expansions with exact coefficients and an explicit precision."""

from functools import lru_cache

from gmpy2 import mpq

from ..algebra.cyclotomic import CyclotomicValue, ResidueValue, reduce_scalar
from ..algebra.rational import NonIntegralError, scalar_valuation_any

ZERO = mpq(0)


def chi3(d):
    """The nontrivial character mod 3."""
    r = d % 3
    return 0 if r == 0 else (1 if r == 1 else -1)


def sigma_chi(k, n):
    if n < 1:
        raise ValueError("n must be positive")
    return sum(chi3(d) * d**k for d in range(1, n + 1) if n % d == 0)


def sigma_chi_table(k, N):
    """[sigma_k^chi(n) for n < N], index 0 set to 0."""
    out = [0] * N
    for d in range(1, N):
        c = chi3(d)
        if not c:
            continue
        term = c * d**k
        for m in range(d, N, d):
            out[m] += term
    return out


def sigma_table(k, N):
    out = [0] * N
    for d in range(1, N):
        term = d**k
        for m in range(d, N, d):
            out[m] += term
    return out


def _is_rational(c):
    return not isinstance(c, (CyclotomicValue, ResidueValue))


class QExpansion:
    """sum_{n < precision} c_n q^n; coefficients are mpq, CyclotomicValue or
    ResidueValue."""

    __slots__ = ("coeffs", "precision")

    def __init__(self, coeffs, precision=None):
        coeffs = [mpq(c) if isinstance(c, int) else c for c in coeffs]
        if precision is None:
            precision = len(coeffs)
        coeffs = coeffs[:precision]
        if len(coeffs) < precision:
            pad = coeffs[0] * 0 if coeffs else ZERO
            coeffs += [pad] * (precision - len(coeffs))
        self.coeffs = coeffs
        self.precision = precision

    @classmethod
    def constant(cls, c, N):
        c = mpq(c) if isinstance(c, int) else c
        return cls([c] + [c * 0] * (N - 1), N)

    def q0(self):
        return self.coeffs[0]

    def __getitem__(self, n):
        return self.coeffs[n]

    def __len__(self):
        return self.precision

    def _joint(self, other):
        return min(self.precision, other.precision)

    def __add__(self, other):
        if not isinstance(other, QExpansion):
            out = list(self.coeffs)
            out[0] = out[0] + other
            return QExpansion(out, self.precision)
        n = self._joint(other)
        a, b = self.coeffs, other.coeffs
        return QExpansion([a[i] + b[i] for i in range(n)], n)

    __radd__ = __add__

    def __neg__(self):
        return QExpansion([-c for c in self.coeffs], self.precision)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, QExpansion):
            if isinstance(other, int):
                other = mpq(other)
            return QExpansion([c * other for c in self.coeffs], self.precision)
        n = self._joint(other)
        a, b = self.coeffs, other.coeffs
        nza = [(i, a[i]) for i in range(n) if a[i]]
        nzb = [(j, b[j]) for j in range(n) if b[j]]
        out = [None] * n
        for i, x in nza:
            lim = n - i
            for j, y in nzb:
                if j >= lim:
                    break
                k = i + j
                out[k] = x * y if out[k] is None else out[k] + x * y
        zero = (a[0] * 0) if n else ZERO
        return QExpansion([zero if c is None else c for c in out], n)

    __rmul__ = __mul__

    def __truediv__(self, scalar):
        return QExpansion([c / scalar for c in self.coeffs], self.precision)

    def __pow__(self, e):
        if e < 0:
            raise ValueError("negative power")
        result = QExpansion.constant(self.coeffs[0] * 0 + 1, self.precision)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, QExpansion):
            return NotImplemented
        n = self._joint(other)
        return all(self.coeffs[i] == other.coeffs[i] for i in range(n))

    def __hash__(self):
        return hash(tuple(self.coeffs))

    def truncate(self, N):
        if N > self.precision:
            raise ValueError("cannot raise precision")
        return QExpansion(self.coeffs[:N], N)

    def min_valuation(self, p, start=0):
        vals = [scalar_valuation_any(c, p) for c in self.coeffs[start:] if c]
        return min(vals) if vals else float("inf")

    def is_integral(self, p, start=0):
        return self.min_valuation(p, start) >= 0

    def reduce(self, p):
        """Coefficientwise reduction into the residue field."""
        out = []
        for n, c in enumerate(self.coeffs):
            try:
                out.append(reduce_scalar(c, p))
            except NonIntegralError as exc:
                raise NonIntegralError(
                    f"q^{n} coefficient {c} is not {p}-integral", exc.valuation, f"q^{n}"
                ) from None
        return QExpansion(out, self.precision)

    def is_zero(self):
        return not any(self.coeffs)

    def to_json(self):
        def enc(c):
            if isinstance(c, CyclotomicValue):
                return [str(c.a), str(c.b)]
            if isinstance(c, ResidueValue):
                return [c.a, c.b]
            return str(c)

        domain = "rational"
        if any(isinstance(c, CyclotomicValue) for c in self.coeffs):
            domain = "Q(zeta)"
        elif self.coeffs and isinstance(self.coeffs[0], ResidueValue):
            domain = f"F_{self.coeffs[0].p}(zeta)"
        return {"precision": self.precision, "domain": domain, "coefficients": [enc(c) for c in self.coeffs]}

    def __repr__(self):
        shown = " + ".join(f"({c})q^{n}" for n, c in enumerate(self.coeffs[:5]) if c)
        return f"QExpansion({shown or 0} + O(q^{self.precision}))"


# -- the two levels ---------------------------------------------------------
ZETA_UNIT = CyclotomicValue(1, 2)  # 1 + 2 zeta, squares to -3


@lru_cache(maxsize=None)
def level3_rational_parts(N):
    """(r1, r3) with a1 = (1+2z) r1 and a3 = (1+2z) r3."""
    s0 = sigma_chi_table(0, N)
    s2 = sigma_chi_table(2, N)
    r1 = QExpansion([mpq(1)] + [mpq(6 * s0[n]) for n in range(1, N)], N)
    r3 = QExpansion([mpq(-1, 9)] + [mpq(s2[n]) for n in range(1, N)], N)
    return r1, r3


@lru_cache(maxsize=None)
def eisenstein(k, N):
    """E_4 and E_6 (level one)."""
    if k == 4:
        c = 240
    elif k == 6:
        c = -504
    else:
        raise ValueError("only E4 and E6 are provided")
    s = sigma_table(k - 1, N)
    return QExpansion([mpq(1)] + [mpq(c * s[n]) for n in range(1, N)], N)


@lru_cache(maxsize=None)
def level1_generators(N):
    """(g2, g3) = (E4/12, -E6/216)."""
    return eisenstein(4, N) / mpq(12), eisenstein(6, N) * mpq(-1, 216)


# Stored cusp values at infinity (and a3 at the cusp 0).
CUSP_A1_INF = ZETA_UNIT
CUSP_A3_INF = ZETA_UNIT * mpq(-1, 9)
CUSP_A3_ZERO = mpq(0)


def q_expansions(level, N):
    """Base generator expansions: {'a1','a3'} at level 3, {'g2','g3'} at level 1."""
    if N < 2:
        raise ValueError("precision must be at least 2")
    if level == 3:
        r1, r3 = level3_rational_parts(N)
        return {"a1": r1 * ZETA_UNIT, "a3": r3 * ZETA_UNIT}
    if level == 1:
        g2, g3 = level1_generators(N)
        return {"g2": g2, "g3": g3}
    raise ValueError(f"unsupported level {level}")
