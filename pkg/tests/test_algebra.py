import math
import random
from fractions import Fraction

import pytest
from gmpy2 import mpq

from betadc.algebra.cyclotomic import CyclotomicValue, ResidueValue, reduce_scalar
from betadc.algebra.poly import Alphabet, GradedPolynomial
from betadc.algebra.rational import NonIntegralError, fractional_part, mod_pk, padic_valuation
from betadc.algebra.series import TruncatedSeries
from betadc.bp.hazewinkel import bp_alphabet

from .helpers import random_poly


# -- rationals ----------------------------------------------------------------
def test_valuation_examples():
    assert padic_valuation(0, 5) == math.inf
    assert padic_valuation(mpq(1, 4), 2) == -2
    assert padic_valuation(mpq(-4900, 3**10), 3) == -10


def test_valuation_is_additive():
    rng = random.Random(3)
    for _ in range(300):
        a = mpq(rng.randint(1, 10**6), rng.randint(1, 10**6))
        b = mpq(rng.randint(-10**6, -1), rng.randint(1, 10**6))
        for p in (2, 3, 5):
            assert padic_valuation(a * b, p) == padic_valuation(a, p) + padic_valuation(b, p)


def test_mod_pk_and_fractional_part():
    assert mod_pk(mpq(1, 3), 2, 3) == 3  # 3*3 = 9 = 1 mod 8
    assert fractional_part(mpq(5, 4), 2) == mpq(1, 4)
    with pytest.raises(NonIntegralError):
        mod_pk(mpq(1, 2), 2, 1)


# -- Z[zeta] and F_4 ----------------------------------------------------------
def _complex(z):
    w = complex(-0.5, math.sqrt(3) / 2)
    return float(z.a) + float(z.b) * w


def test_cyclotomic_relations():
    zeta = CyclotomicValue.zeta()
    assert zeta * zeta + zeta + 1 == 0
    assert (1 + zeta * 2) ** 2 == -3
    assert zeta**3 == 1


def test_cyclotomic_matches_complex_oracle():
    rng = random.Random(11)
    for _ in range(200):
        x = CyclotomicValue(mpq(rng.randint(-9, 9), rng.randint(1, 5)), rng.randint(-9, 9))
        y = CyclotomicValue(rng.randint(-9, 9), mpq(rng.randint(-9, 9), rng.randint(1, 5)))
        for got, want in ((x * y, _complex(x) * _complex(y)), (x + y, _complex(x) + _complex(y))):
            assert abs(_complex(got) - want) < 1e-9
        if y:
            assert abs(_complex(x / y) - _complex(x) / _complex(y)) < 1e-9


def test_residue_field_f4():
    z = ResidueValue(0, 1, 2)
    one = ResidueValue(1, 0, 2)
    assert z * z == one + z
    elems = [ResidueValue(a, b, 2) for a in (0, 1) for b in (0, 1)]
    for x in elems:
        if x:
            assert x * x.inverse() == one
        for y in elems:
            assert x * y == y * x


def test_reduction_mod_2():
    assert reduce_scalar(CyclotomicValue(1, 2), 2) == ResidueValue(1, 0, 2)
    assert reduce_scalar(mpq(-1, 9), 2) == ResidueValue(1, 0, 2)
    with pytest.raises(NonIntegralError):
        reduce_scalar(mpq(1, 2), 2)


def test_reduction_commutes_with_ring_ops():
    rng = random.Random(5)
    for _ in range(200):
        x = CyclotomicValue(mpq(rng.randint(-20, 20), 2 * rng.randint(0, 4) + 1), rng.randint(-20, 20))
        y = CyclotomicValue(rng.randint(-20, 20), mpq(rng.randint(-20, 20), 3))
        rx, ry = reduce_scalar(x, 2), reduce_scalar(y, 2)
        assert reduce_scalar(x * y, 2) == rx * ry
        assert reduce_scalar(x + y, 2) == rx + ry


# -- polynomials ----------------------------------------------------------------
def test_poly_degrees():
    A = bp_alphabet(2)
    v1 = A.gen("v1")
    assert (v1 * v1).degrees() == [2 * 2 * (2 - 1)]


def test_substitute_degree_bookkeeping():
    A = bp_alphabet(2)
    M = Alphabet(["a1", "a3"], [2, 6])
    x = A.gen("v2") + A.gen("v1") ** 3
    img = x.substitute({"v1": M.gen("a1"), "v2": M.gen("a3")}, target=M)
    assert img == M.gen("a3") + M.gen("a1") ** 3
    assert img.degrees() == [6]


def test_discriminant_product():
    from betadc.modular.forms import level3_model

    M = Alphabet(["a1", "a3"], [2, 6])
    a1, a3 = M.gen("a1"), M.gen("a3")
    delta = (a1**3 - a3 * 27) * a3**3
    got = level3_model().discriminant()
    assert got.substitute({}, target=M, check_degrees=False) == delta


def _evaluate(poly, point):
    """Oracle: evaluate term by term with Python Fractions."""
    A = poly.alphabet
    total = Fraction(0)
    for k, c in poly.terms.items():
        term = Fraction(int(c.numerator), int(c.denominator))
        for name, e in zip(A.names, A.unpack(k)):
            term *= point[name] ** e
        total += term
    return total


def test_ring_operations_match_evaluation():
    A = Alphabet(["x", "y", "z"], [2, 4, 6])
    rng = random.Random(7)
    for _ in range(100):
        f, g = random_poly(rng, A), random_poly(rng, A)
        pt = {n: Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for n in A.names}
        assert _evaluate(f * g, pt) == _evaluate(f, pt) * _evaluate(g, pt)
        assert _evaluate(f - g, pt) == _evaluate(f, pt) - _evaluate(g, pt)
        img = f.substitute({"x": g}, check_degrees=False)
        pt2 = dict(pt, x=_evaluate(g, pt))
        assert _evaluate(img, pt) == _evaluate(f, pt2)


def test_json_round_trip():
    A = bp_alphabet(2)
    f = A.gen("vL1") * A.gen("vR1") ** 3 / 8 - A.gen("v2") * mpq(5, 16)
    assert GradedPolynomial.from_json(f.to_json(), A) == f


def test_reduce_mod_rejects_denominators():
    A = bp_alphabet(2)
    with pytest.raises(NonIntegralError):
        (A.gen("v1") / 2).reduce_mod(2)


# -- series -----------------------------------------------------------------------
def test_reverse_identity():
    x = TruncatedSeries.variable(8)
    assert x.reverse() == x


def test_reverse_catalan_oracle():
    # f = x + x^2 is inverted by g = (sqrt(1+4x) - 1)/2 = sum (-1)^(n-1) C_(n-1) x^n
    f = TruncatedSeries([mpq(0), mpq(1), mpq(1)] + [mpq(0)] * 9, 12)
    g = f.reverse()
    for n in range(1, 12):
        catalan = math.comb(2 * (n - 1), n - 1) // n
        assert g[n] == (-1) ** (n - 1) * catalan


def test_reverse_two_typical_log():
    A = Alphabet(["l1", "l2"], [0, 0])
    l1, l2 = A.gen("l1"), A.gen("l2")
    z = A.zero()
    f = TruncatedSeries([z, A.one(), l1, z, l2], 5, z)
    g = f.reverse()
    assert g[2] == -l1
    assert g[3] == l1**2 * 2
    assert g[4] == -(l1**3 * 5 + l2)


def test_log_exp_round_trip():
    rng = random.Random(2)
    for _ in range(30):
        coeffs = [mpq(0)] + [mpq(rng.randint(-5, 5), rng.randint(1, 5)) for _ in range(9)]
        f = TruncatedSeries(coeffs, 10)
        assert f.exp().log() == f
