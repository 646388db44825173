"""Q(zeta) for a primitive cube root of unity, and its residue fields.

Elements are a + b*zeta with zeta^2 = -1 - zeta. For primes p = 2 mod 3 the
prime stays inert, so the p-adic valuation is min(v(a), v(b)) and reduction
lands in F_p(zeta) = F_{p^2}; for p = 2 this is F_4.
"""

from gmpy2 import mpq, mpz

from .rational import INF, NonIntegralError, mod_pk, padic_valuation

_MPQ = type(mpq(0))
_SCALARS = (int, _MPQ, type(mpz(0)))


def _q(x):
    return x if isinstance(x, _MPQ) else mpq(x)


class CyclotomicValue:
    __slots__ = ("a", "b")

    def __init__(self, a=0, b=0):
        object.__setattr__(self, "a", _q(a))
        object.__setattr__(self, "b", _q(b))

    def __setattr__(self, name, value):
        raise AttributeError("CyclotomicValue is immutable")

    @classmethod
    def zeta(cls):
        return cls(0, 1)

    @staticmethod
    def coerce(x):
        if isinstance(x, CyclotomicValue):
            return x
        if isinstance(x, ResidueValue):
            raise TypeError("cannot lift a residue to Q(zeta)")
        return CyclotomicValue(x, 0)

    def __add__(self, other):
        if isinstance(other, CyclotomicValue):
            return CyclotomicValue(self.a + other.a, self.b + other.b)
        if not isinstance(other, _SCALARS):
            return NotImplemented
        return CyclotomicValue(self.a + other, self.b)

    __radd__ = __add__

    def __neg__(self):
        return CyclotomicValue(-self.a, -self.b)

    def __sub__(self, other):
        if not isinstance(other, (CyclotomicValue,) + _SCALARS):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        if not isinstance(other, _SCALARS):
            return NotImplemented
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, CyclotomicValue):
            a, b, c, d = self.a, self.b, other.a, other.b
            bd = b * d
            # (a + b z)(c + d z) = ac + (ad + bc) z + bd z^2,  z^2 = -1 - z
            return CyclotomicValue(a * c - bd, a * d + b * c - bd)
        if not isinstance(other, _SCALARS):
            return NotImplemented
        other = _q(other)
        return CyclotomicValue(self.a * other, self.b * other)

    __rmul__ = __mul__

    def conjugate(self):
        # zeta -> zeta^2 = -1 - zeta
        return CyclotomicValue(self.a - self.b, -self.b)

    def norm(self):
        return self.a * self.a - self.a * self.b + self.b * self.b

    def inverse(self):
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in Q(zeta)")
        c = self.conjugate()
        return CyclotomicValue(c.a / n, c.b / n)

    def __truediv__(self, other):
        if isinstance(other, CyclotomicValue):
            return self * other.inverse()
        if not isinstance(other, _SCALARS):
            return NotImplemented
        other = _q(other)
        return CyclotomicValue(self.a / other, self.b / other)

    def __rtruediv__(self, other):
        return CyclotomicValue.coerce(other) * self.inverse()

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = CyclotomicValue(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, CyclotomicValue):
            return self.a == other.a and self.b == other.b
        if isinstance(other, ResidueValue):
            return NotImplemented
        try:
            return self.b == 0 and self.a == other
        except TypeError:
            return NotImplemented

    def __hash__(self):
        if self.b == 0:
            return hash(self.a)
        return hash((self.a, self.b))

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def is_rational(self):
        return self.b == 0

    def valuation(self, p):
        if p % 3 != 2:
            raise ValueError(f"valuation on Q(zeta) implemented for inert primes only, got {p}")
        return min(padic_valuation(self.a, p), padic_valuation(self.b, p))

    def __repr__(self):
        return f"CyclotomicValue({self.a}, {self.b})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return f"{self.b}*z"
        sign = "+" if self.b > 0 else "-"
        return f"({self.a} {sign} {abs(self.b)}*z)"


class ResidueValue:
    """Element a + b*zeta_bar of F_p[zeta]/(zeta^2 + zeta + 1).

    For p = 2 this is F_4. With b == 0 it doubles as an element of F_p.
    """

    __slots__ = ("a", "b", "p")

    def __init__(self, a, b=0, p=2):
        object.__setattr__(self, "a", int(a) % p)
        object.__setattr__(self, "b", int(b) % p)
        object.__setattr__(self, "p", p)

    def __setattr__(self, name, value):
        raise AttributeError("ResidueValue is immutable")

    def _other(self, other):
        if isinstance(other, ResidueValue):
            if other.p != self.p:
                raise ValueError("residue characteristic mismatch")
            return other
        if isinstance(other, int):
            return ResidueValue(other, 0, self.p)
        if isinstance(other, _MPQ):
            return ResidueValue(mod_pk(other, self.p, 1), 0, self.p)
        return NotImplemented

    def __add__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return ResidueValue(self.a + other.a, self.b + other.b, self.p)

    __radd__ = __add__

    def __neg__(self):
        return ResidueValue(-self.a, -self.b, self.p)

    def __sub__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        return ResidueValue(self.a - other.a, self.b - other.b, self.p)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._other(other)
        if other is NotImplemented:
            return other
        a, b, c, d = self.a, self.b, other.a, other.b
        bd = b * d
        return ResidueValue(a * c - bd, a * d + b * c - bd, self.p)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = ResidueValue(1, 0, self.p)
        base = self
        if n < 0:
            base = base.inverse()
            n = -n
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        n = (self.a * self.a - self.a * self.b + self.b * self.b) % self.p
        if n == 0:
            raise ZeroDivisionError("inverse of zero residue")
        ninv = pow(n, -1, self.p)
        return ResidueValue((self.a - self.b) * ninv, -self.b * ninv, self.p)

    def __truediv__(self, other):
        other = self._other(other)
        return self * other.inverse()

    def __eq__(self, other):
        if isinstance(other, ResidueValue):
            return (self.a, self.b, self.p) == (other.a, other.b, other.p)
        if isinstance(other, int):
            return self.b == 0 and self.a == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.a, self.b, self.p))

    def __bool__(self):
        return bool(self.a or self.b)

    def __repr__(self):
        return f"ResidueValue({self.a}, {self.b}, p={self.p})"

    def __str__(self):
        if self.b == 0:
            return str(self.a)
        if self.a == 0:
            return "z" if self.b == 1 else f"{self.b}*z"
        return f"({self.a}+{'' if self.b == 1 else str(self.b) + '*'}z)"


def reduce_scalar(x, p):
    """Reduce a p-integral rational or Q(zeta) value to the residue field."""
    if isinstance(x, ResidueValue):
        return x
    if isinstance(x, CyclotomicValue):
        v = x.valuation(p) if x else INF
        if v < 0:
            raise NonIntegralError(f"{x} is not {p}-integral", v)
        return ResidueValue(mod_pk(x.a, p, 1), mod_pk(x.b, p, 1), p)
    v = padic_valuation(x, p)
    if v < 0:
        raise NonIntegralError(f"{x} is not {p}-integral", v)
    return ResidueValue(mod_pk(x, p, 1), 0, p)


def scalar_valuation(x, p):
    if isinstance(x, CyclotomicValue):
        return x.valuation(p) if x else INF
    return padic_valuation(x, p)
