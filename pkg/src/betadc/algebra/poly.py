"""Sparse graded polynomials over exact coefficient rings.

Monomials are packed into a single int (16 bits per generator) so that
monomial multiplication is integer addition. The alphabet owns the packing
and the topological degree of each generator.
"""

import json

from gmpy2 import mpq

from .cyclotomic import CyclotomicValue, ResidueValue, reduce_scalar
from .rational import NonIntegralError, mod_pk

BITS = 16
MASK = (1 << BITS) - 1
FORMAT_VERSION = 1


class AlphabetMismatch(TypeError):
    pass


class DegreeError(ValueError):
    pass


class Alphabet:
    """Ordered generator names with topological degrees.

    The declared order is the generator precedence used for the graded
    lexicographic monomial order.
    """

    def __init__(self, names, degrees, tag=""):
        if len(names) != len(degrees):
            raise ValueError("names and degrees differ in length")
        self.names = tuple(names)
        self.degrees = tuple(int(d) for d in degrees)
        self.tag = tag
        self.index = {n: i for i, n in enumerate(self.names)}
        if len(self.index) != len(self.names):
            raise ValueError("duplicate generator names")
        self._deg_cache = {}

    def __eq__(self, other):
        return isinstance(other, Alphabet) and (self.names, self.degrees) == (other.names, other.degrees)

    def __hash__(self):
        return hash((self.names, self.degrees))

    def __repr__(self):
        return f"Alphabet({self.tag or list(self.names)})"

    def __len__(self):
        return len(self.names)

    def pack(self, exps):
        key = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MASK:
                raise ValueError(f"exponent {e} out of range")
            key |= int(e) << (BITS * i)
        return key

    def unpack(self, key):
        return tuple((key >> (BITS * i)) & MASK for i in range(len(self.names)))

    def key_of(self, powers):
        """Packed key from a {name: exponent} mapping."""
        key = 0
        for name, e in powers.items():
            if e:
                key += int(e) << (BITS * self.index[name])
        return key

    def exponent(self, key, name):
        return (key >> (BITS * self.index[name])) & MASK

    def degree(self, key):
        d = self._deg_cache.get(key)
        if d is None:
            d = 0
            k = key
            for deg in self.degrees:
                d += (k & MASK) * deg
                k >>= BITS
            self._deg_cache[key] = d
        return d

    def sort_key(self, key):
        # graded lex; earlier generators in the declared order take precedence
        exps = self.unpack(key)
        return (self.degree(key), tuple(-e for e in exps))

    def gen(self, name):
        return GradedPolynomial(self, {self.key_of({name: 1}): mpq(1)})

    def one(self):
        return GradedPolynomial(self, {0: mpq(1)})

    def zero(self):
        return GradedPolynomial(self, {})

    def monomial(self, powers, coeff=1):
        c = coeff if not isinstance(coeff, int) else mpq(coeff)
        return GradedPolynomial(self, {self.key_of(powers): c})

    def monomial_str(self, key):
        parts = []
        for name, e in zip(self.names, self.unpack(key)):
            if e == 1:
                parts.append(name)
            elif e > 1:
                parts.append(f"{name}^{e}")
        return "*".join(parts) if parts else "1"

    def monomials_of_degree(self, degree, names=None):
        """All packed monomials of the given topological degree, optionally
        restricted to a subset of generators."""
        idx = [self.index[n] for n in (names if names is not None else self.names)]
        idx = [i for i in idx if self.degrees[i] > 0]
        out = []

        def rec(pos, remaining, key):
            if remaining == 0:
                out.append(key)
                return
            if pos == len(idx):
                return
            i = idx[pos]
            d = self.degrees[i]
            e = 0
            while e * d <= remaining:
                rec(pos + 1, remaining - e * d, key + (e << (BITS * i)))
                e += 1

        if degree < 0:
            return []
        rec(0, degree, 0)
        return sorted(out, key=self.sort_key)

    def to_json(self):
        return [[n, d] for n, d in zip(self.names, self.degrees)]

    @classmethod
    def from_json(cls, data, tag=""):
        return cls([n for n, _ in data], [d for _, d in data], tag)


def _coeff_to_json(c):
    if isinstance(c, CyclotomicValue):
        return {"a": str(c.a), "b": str(c.b)}
    if isinstance(c, ResidueValue):
        return {"res": [c.a, c.b], "p": c.p}
    return str(mpq(c))


def _coeff_from_json(d):
    if isinstance(d, dict):
        if "res" in d:
            return ResidueValue(d["res"][0], d["res"][1], d["p"])
        return CyclotomicValue(mpq(d["a"]), mpq(d["b"]))
    return mpq(d)


def _as_coeff(c):
    return mpq(c) if isinstance(c, int) else c


class GradedPolynomial:
    """Immutable sparse polynomial: packed monomial -> nonzero coefficient."""

    __slots__ = ("alphabet", "terms")

    def __init__(self, alphabet, terms=None):
        self.alphabet = alphabet
        if terms:
            self.terms = {k: c for k, c in terms.items() if c}
        else:
            self.terms = {}

    @classmethod
    def _raw(cls, alphabet, terms):
        obj = cls.__new__(cls)
        obj.alphabet = alphabet
        obj.terms = terms
        return obj

    # -- ring operations ----------------------------------------------
    def _check(self, other):
        if other.alphabet is not self.alphabet and other.alphabet != self.alphabet:
            raise AlphabetMismatch(f"{self.alphabet!r} vs {other.alphabet!r}")

    def _lift(self, other):
        if isinstance(other, GradedPolynomial):
            self._check(other)
            return other
        other = _as_coeff(other)
        return GradedPolynomial._raw(self.alphabet, {0: other} if other else {})

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k)
            if v is None:
                out[k] = c
            else:
                s = v + c
                if s:
                    out[k] = s
                else:
                    del out[k]
        return GradedPolynomial._raw(self.alphabet, out)

    __radd__ = __add__

    def __neg__(self):
        return GradedPolynomial._raw(self.alphabet, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, GradedPolynomial):
            other = _as_coeff(other)
            if not other:
                return GradedPolynomial._raw(self.alphabet, {})
            return GradedPolynomial._raw(
                self.alphabet, {k: c * other for k, c in self.terms.items() if c * other}
            )
        self._check(other)
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                v = get(k)
                out[k] = ca * cb if v is None else v + ca * cb
        return GradedPolynomial._raw(self.alphabet, {k: c for k, c in out.items() if c})

    def __rmul__(self, other):
        return self * other

    def __truediv__(self, scalar):
        if isinstance(scalar, GradedPolynomial):
            raise TypeError("use divide_exact for polynomial division")
        s = _as_coeff(scalar)
        return GradedPolynomial._raw(self.alphabet, {k: c / s for k, c in self.terms.items()})

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power")
        result = self.alphabet.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, GradedPolynomial):
            if other.alphabet != self.alphabet:
                return False
            return self.terms == other.terms
        other = _as_coeff(other)
        if not other:
            return not self.terms
        return self.terms == {0: other}

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self):
        return not self.terms

    def __len__(self):
        return len(self.terms)

    # -- structure ------------------------------------------------------
    def coefficient(self, powers):
        key = powers if isinstance(powers, int) else self.alphabet.key_of(powers)
        return self.terms.get(key, mpq(0))

    def constant_term(self):
        return self.terms.get(0, mpq(0))

    def degrees(self):
        return sorted({self.alphabet.degree(k) for k in self.terms})

    def is_homogeneous(self):
        return len(self.degrees()) <= 1

    def degree(self):
        ds = self.degrees()
        if len(ds) > 1:
            raise DegreeError(f"inhomogeneous polynomial with degrees {ds}")
        return ds[0] if ds else None

    def homogeneous_component(self, degree):
        deg = self.alphabet.degree
        return GradedPolynomial._raw(
            self.alphabet, {k: c for k, c in self.terms.items() if deg(k) == degree}
        )

    def items(self):
        """(exponent tuple, coefficient) pairs in canonical monomial order."""
        unpack = self.alphabet.unpack
        for k in sorted(self.terms, key=self.alphabet.sort_key):
            yield unpack(k), self.terms[k]

    def sorted_keys(self):
        return sorted(self.terms, key=self.alphabet.sort_key)

    def variables(self):
        used = set()
        for k in self.terms:
            for name, e in zip(self.alphabet.names, self.alphabet.unpack(k)):
                if e:
                    used.add(name)
        return used

    def filter(self, predicate):
        """Keep terms whose packed key satisfies the predicate."""
        return GradedPolynomial._raw(self.alphabet, {k: c for k, c in self.terms.items() if predicate(k)})

    def map_coefficients(self, fn):
        return GradedPolynomial(self.alphabet, {k: fn(c) for k, c in self.terms.items()})

    def substitute(self, mapping, target=None, check_degrees=True):
        """Ring map sending each generator to a polynomial in `target`.

        Generators absent from `mapping` map to the same-named generator of
        the target alphabet.
        """
        target = target or self.alphabet
        src = self.alphabet
        images = []
        for i, name in enumerate(src.names):
            if name in mapping:
                img = mapping[name]
                if not isinstance(img, GradedPolynomial):
                    img = GradedPolynomial(target, {0: _as_coeff(img)})
                elif img.alphabet != target:
                    raise AlphabetMismatch(f"image of {name} lives in {img.alphabet!r}")
            elif name in target.index:
                img = target.gen(name)
            else:
                img = None
            if check_degrees and img is not None and img.terms:
                for d in img.degrees():
                    if d != src.degrees[i]:
                        raise DegreeError(
                            f"{name} has degree {src.degrees[i]} but its image has degree {d}"
                        )
            images.append(img)
        cache = {}

        def power(i, e):
            key = (i, e)
            val = cache.get(key)
            if val is None:
                if images[i] is None:
                    raise AlphabetMismatch(f"no image for generator {src.names[i]}")
                val = images[i] if e == 1 else power(i, e - 1) * images[i]
                cache[key] = val
            return val

        acc = {}
        for k, c in self.terms.items():
            term = None
            for i, e in enumerate(src.unpack(k)):
                if e:
                    term = power(i, e) if term is None else term * power(i, e)
            if term is None:
                acc[0] = acc.get(0, 0) + c
                continue
            for kk, cc in term.terms.items():
                v = acc.get(kk)
                acc[kk] = cc * c if v is None else v + cc * c
        return GradedPolynomial(target, acc)

    def rename(self, target, names_map):
        """Move monomials to another alphabet by renaming generators."""
        src = self.alphabet
        pos = [target.index[names_map.get(n, n)] for n in src.names]
        out = {}
        for k, c in self.terms.items():
            kk = 0
            for i, e in enumerate(src.unpack(k)):
                if e:
                    kk += e << (BITS * pos[i])
            out[kk] = out.get(kk, 0) + c
        return GradedPolynomial(target, out)

    def divide_by_monomial(self, powers):
        """Exact division by a monomial; raises if some term is not divisible."""
        mkey = self.alphabet.key_of(powers)
        mexps = self.alphabet.unpack(mkey)
        out = {}
        for k, c in self.terms.items():
            exps = self.alphabet.unpack(k)
            if any(e < m for e, m in zip(exps, mexps)):
                raise ArithmeticError(
                    f"term {self.alphabet.monomial_str(k)} not divisible by {self.alphabet.monomial_str(mkey)}"
                )
            out[k - mkey] = c
        return GradedPolynomial._raw(self.alphabet, out)

    # -- p-local ----------------------------------------------------------
    def min_valuation(self, p):
        from .cyclotomic import scalar_valuation

        vals = [scalar_valuation(c, p) for c in self.terms.values()]
        return min(vals) if vals else float("inf")

    def is_p_integral(self, p):
        return self.min_valuation(p) >= 0

    def reduce_mod(self, p, r=1):
        """Coefficients reduced into [0, p^r) (rational, p-integral input)."""
        out = {}
        for k, c in self.terms.items():
            try:
                out[k] = mpq(mod_pk(c, p, r))
            except NonIntegralError as exc:
                raise NonIntegralError(
                    f"coefficient {c} of {self.alphabet.monomial_str(k)} is not {p}-integral",
                    exc.valuation,
                    self.alphabet.monomial_str(k),
                ) from None
        return GradedPolynomial(self.alphabet, out)

    def reduce_residue(self, p):
        """Coefficientwise reduction into the residue field."""
        out = {}
        for k, c in self.terms.items():
            try:
                out[k] = reduce_scalar(c, p)
            except NonIntegralError as exc:
                raise NonIntegralError(
                    f"coefficient {c} of {self.alphabet.monomial_str(k)} has valuation {exc.valuation}",
                    exc.valuation,
                    self.alphabet.monomial_str(k),
                ) from None
        return GradedPolynomial(self.alphabet, out)

    # -- serialization ----------------------------------------------------
    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"GradedPolynomial({self.to_text()})"

    def to_text(self):
        if not self.terms:
            return "0"
        parts = []
        for k in self.sorted_keys():
            c = self.terms[k]
            mono = self.alphabet.monomial_str(k)
            if mono == "1":
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{c}*{mono}")
        text = " + ".join(parts)
        return text.replace("+ -", "- ")

    def to_json(self):
        return {
            "version": FORMAT_VERSION,
            "alphabet": self.alphabet.to_json(),
            "terms": [[list(self.alphabet.unpack(k)), _coeff_to_json(self.terms[k])] for k in self.sorted_keys()],
        }

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    @classmethod
    def from_json(cls, data, alphabet=None):
        if data.get("version") != FORMAT_VERSION:
            raise ValueError(f"unsupported polynomial format version {data.get('version')}")
        alpha = Alphabet.from_json(data["alphabet"])
        if alphabet is not None:
            if alphabet != alpha:
                raise AlphabetMismatch("serialized alphabet differs from the requested one")
            alpha = alphabet
        return cls(alpha, {alpha.pack(e): _coeff_from_json(c) for e, c in data["terms"]})

    def max_denominator_exponent(self, p):
        v = self.min_valuation(p)
        return 0 if v == float("inf") or v >= 0 else -int(v)
