"""Truncated power series in one variable with exact coefficients.

Coefficients may be scalars (mpq, CyclotomicValue) or GradedPolynomial; the
series variable is implicit. ``precision`` N means the coefficients of
x^0 .. x^(N-1) are trusted, i.e. the series is known modulo x^N.
"""

from gmpy2 import mpq


class SeriesError(ValueError):
    pass


def _is_zero(c):
    return not c


class TruncatedSeries:
    __slots__ = ("coeffs", "precision", "zero")

    def __init__(self, coeffs, precision=None, zero=None):
        coeffs = [mpq(c) if isinstance(c, int) else c for c in coeffs]
        if precision is None:
            precision = len(coeffs)
        if zero is None:
            if coeffs:
                zero = coeffs[0] * 0
            else:
                zero = mpq(0)
        coeffs = coeffs[:precision]
        coeffs += [zero] * (precision - len(coeffs))
        self.coeffs = tuple(coeffs)
        self.precision = precision
        self.zero = zero

    @classmethod
    def variable(cls, precision, one=mpq(1)):
        zero = one * 0
        return cls([zero, one], precision, zero)

    @classmethod
    def constant(cls, c, precision):
        c = mpq(c) if isinstance(c, int) else c
        return cls([c], precision, c * 0)

    def __getitem__(self, n):
        if n >= self.precision:
            raise SeriesError(f"coefficient x^{n} beyond precision {self.precision}")
        return self.coeffs[n]

    def __len__(self):
        return self.precision

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        n = min(self.precision, other.precision)
        return all(self.coeffs[i] == other.coeffs[i] for i in range(n))

    def __hash__(self):
        return hash(self.coeffs)

    def truncate(self, precision):
        if precision > self.precision:
            raise SeriesError("cannot raise precision")
        return TruncatedSeries(self.coeffs[:precision], precision, self.zero)

    def __add__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries((self.coeffs[0] + other,) + self.coeffs[1:], self.precision, self.zero)
        n = min(self.precision, other.precision)
        return TruncatedSeries([self.coeffs[i] + other.coeffs[i] for i in range(n)], n, self.zero)

    __radd__ = __add__

    def __neg__(self):
        return TruncatedSeries([-c for c in self.coeffs], self.precision, self.zero)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return TruncatedSeries([c * other for c in self.coeffs], self.precision, self.zero)
        n = min(self.precision, other.precision)
        a, b = self.coeffs, other.coeffs
        nz_a = [(i, a[i]) for i in range(n) if not _is_zero(a[i])]
        nz_b = [(j, b[j]) for j in range(n) if not _is_zero(b[j])]
        out = [None] * n
        for i, ca in nz_a:
            for j, cb in nz_b:
                k = i + j
                if k >= n:
                    break
                out[k] = ca * cb if out[k] is None else out[k] + ca * cb
        zero = self.zero
        return TruncatedSeries([zero if c is None else c for c in out], n, zero)

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, other):
        if isinstance(other, TruncatedSeries):
            return self * other.inverse()
        return TruncatedSeries([c / other for c in self.coeffs], self.precision, self.zero)

    def __pow__(self, n):
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncatedSeries.constant(self.coeffs[0] * 0 + 1, self.precision)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def valuation(self):
        for i, c in enumerate(self.coeffs):
            if not _is_zero(c):
                return i
        return self.precision

    def shift_down(self, k):
        """Divide by x^k; the first k coefficients must vanish."""
        if any(not _is_zero(c) for c in self.coeffs[:k]):
            raise SeriesError(f"series not divisible by x^{k}")
        return TruncatedSeries(self.coeffs[k:], self.precision - k, self.zero)

    def shift_up(self, k):
        return TruncatedSeries([self.zero] * k + list(self.coeffs), self.precision + k, self.zero)

    def inverse(self):
        """Multiplicative inverse; the constant term must be invertible."""
        c0 = self.coeffs[0]
        if _is_zero(c0):
            raise SeriesError("series with zero constant term is not invertible")
        inv0 = _scalar_inverse(c0)
        n = self.precision
        out = [inv0]
        for k in range(1, n):
            acc = None
            for i in range(1, k + 1):
                a = self.coeffs[i]
                if _is_zero(a):
                    continue
                t = a * out[k - i]
                acc = t if acc is None else acc + t
            out.append(self.zero if acc is None else -(acc * inv0))
        return TruncatedSeries(out, n, self.zero)

    def compose(self, inner):
        """self(inner(x)); inner must have zero constant term."""
        if not _is_zero(inner.coeffs[0]):
            raise SeriesError("composition needs an inner series with zero constant term")
        n = min(self.precision, inner.precision)
        result = TruncatedSeries.constant(self.coeffs[0], n)
        power = TruncatedSeries.constant(self.coeffs[0] * 0 + 1, n)
        inner = inner.truncate(n)
        for k in range(1, n):
            power = power * inner
            c = self.coeffs[k]
            if not _is_zero(c):
                result = result + power * c
        return result

    def derivative(self):
        return TruncatedSeries(
            [self.coeffs[k] * k for k in range(1, self.precision)], self.precision - 1, self.zero
        )

    def integral(self):
        return TruncatedSeries(
            [self.zero] + [self.coeffs[k] / (k + 1) for k in range(self.precision)],
            self.precision + 1,
            self.zero,
        )

    def reverse(self):
        """Compositional inverse of f = x + O(x^2), by Lagrange inversion:
        [x^n] g = (1/n) [x^(n-1)] (x / f)^n."""
        if self.precision < 2:
            raise SeriesError("reversion needs precision >= 2")
        if not _is_zero(self.coeffs[0]):
            raise SeriesError("reversion needs zero constant term")
        if self.coeffs[1] != 1:
            raise SeriesError("reversion needs leading coefficient 1")
        n = self.precision
        h = self.shift_down(1).inverse()  # x / f, known mod x^(n-1)
        out = [self.zero, self.coeffs[1]]
        power = h
        for k in range(2, n):
            power = power * h
            out.append(power.coeffs[k - 1] / k)
        return TruncatedSeries(out, n, self.zero)

    def log(self):
        """log(f) for f with constant term 1."""
        if self.coeffs[0] != 1:
            raise SeriesError("log needs constant term 1")
        return (self.derivative() * self.truncate(self.precision - 1).inverse()).integral()

    def exp(self):
        """exp(f) for f with zero constant term (coefficients over a Q-algebra)."""
        if not _is_zero(self.coeffs[0]):
            raise SeriesError("exp needs zero constant term")
        n = self.precision
        one = self.coeffs[0] * 0 + 1
        out = [one]
        # g' = f' g  =>  k g_k = sum_{i=1}^k i f_i g_{k-i}
        for k in range(1, n):
            acc = None
            for i in range(1, k + 1):
                fi = self.coeffs[i]
                if _is_zero(fi):
                    continue
                t = fi * out[k - i] * i
                acc = t if acc is None else acc + t
            out.append(self.zero if acc is None else acc / k)
        return TruncatedSeries(out, n, self.zero)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.precision > 6 else ""
        return f"TruncatedSeries([{shown}{more}], precision={self.precision})"


def _scalar_inverse(c):
    if hasattr(c, "inverse"):
        return c.inverse()
    if hasattr(c, "terms"):
        if len(c.terms) != 1 or 0 not in c.terms:
            raise SeriesError("only constant polynomial leading terms are invertible")
        inv = 1 / c.terms[0]
        return c * 0 + inv
    return 1 / mpq(c)
