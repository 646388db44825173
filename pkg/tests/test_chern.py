import random
from itertools import combinations
from math import prod

import pytest
from gmpy2 import mpq

from betadc.bp.hazewinkel import bp_alphabet
from betadc.chern import (
    ChernData,
    IncompleteChernData,
    UnsupportedDimension,
    chern_alphabet,
    chern_reduction,
    elementary_from_power_sums,
    evaluate_manifold,
    genus_Q,
    kervaire_chern_polynomial,
    newton_power_sums,
    pi_component,
)

A = bp_alphabet(2)
v1, v2 = A.gen("v1"), A.gen("v2")


def elementary(xs, j):
    return sum(prod(c) for c in combinations(xs, j)) if j else 1


# -- the genus -------------------------------------------------------------------
def test_genus_low_coefficients():
    Q = genus_Q(5, A)
    l1 = v1 / 2
    l2 = v2 / 2 + v1**3 / 4
    assert Q[0] == A.one()
    assert Q[1] == l1
    assert Q[2] == -(l1**2)
    assert Q[3] == l1**3 * 2 + l2


def test_genus_of_additive_law():
    Q = genus_Q(8, A)
    for k in range(1, 8):
        assert Q[k].constant_term() == 0


# -- Pi components ------------------------------------------------------------------
def test_pi_quoted_components():
    assert pi_component(2).terms == {(1,): v1 / 2}
    assert pi_component(4).terms == {(0, 1): v1**2 * mpq(3, 4), (2, 0): -(v1**2) / 4}
    pi6 = pi_component(6)
    assert pi6.coefficient((3, 0, 0)) == v1**3 / 2 + v2 / 2
    assert pi6.coefficient((1, 1, 0)) == v1**3 * mpq(-13, 8) - v2 * mpq(3, 2)
    assert pi6.coefficient((0, 0, 1)) == v1**3 * 2 + v2 * mpq(3, 2)


def _brute(i, xs, Q):
    """Degree-i part of prod_l Q(x_l), by expanding the product directly."""
    total = A.zero()

    def rec(pos, left, acc):
        nonlocal total
        if pos == len(xs):
            if left == 0:
                total = total + acc
            return
        for k in range(left + 1):
            rec(pos + 1, left - k, acc * Q[k] * (xs[pos] ** k))

    rec(0, i, A.one())
    return total


@pytest.mark.parametrize("i", [1, 2, 3, 4])
def test_pi_against_product_expansion(i):
    Q = genus_Q(i + 1, A)
    pi = pi_component(2 * i)
    rng = random.Random(i)
    for m in (i, i + 1):
        for _ in range(4):
            xs = [rng.randint(-4, 4) for _ in range(m)]
            e = [elementary(xs, j) for j in range(i + 1)]
            got = A.zero()
            for cexp, coeff in pi.terms.items():
                got = got + coeff * prod(e[j + 1] ** k for j, k in enumerate(cexp))
            assert got == _brute(i, xs, Q)


# -- Newton identities ----------------------------------------------------------------
def test_newton_round_trip():
    m = 8
    C = chern_alphabet(m)
    ps = newton_power_sums(m, C)
    es = elementary_from_power_sums(ps, C, m)
    for k in range(1, m + 1):
        assert es[k] == C.gen(f"c{k}")
    rng = random.Random(1)
    for _ in range(20):
        xs = [rng.randint(-5, 5) for _ in range(m)]
        point = {f"c{j}": elementary(xs, j) for j in range(1, m + 1)}
        for k in range(1, m + 1):
            val = ps[k].substitute(point, target=C, check_degrees=False)
            assert val == C.one() * sum(x**k for x in xs)


# -- Kervaire polynomials -------------------------------------------------------------------
def key(c0, c1, width):
    pad = lambda t: tuple(t) + (0,) * (width - len(t))
    return (pad(c0), pad(c1))


def test_dimension_4_polynomial():
    assert kervaire_chern_polynomial(4) == {key((1,), (1,), 2): 1}


def test_dimension_8_polynomial():
    # c1(c1'^3 + c1'c2' + c3') + (c2 + c1^2)(c2' + c1'^2)
    want = {
        key((1,), (3,), 4): 1,
        key((1,), (1, 1), 4): 1,
        key((1,), (0, 0, 1), 4): 1,
        key((0, 1), (0, 1), 4): 1,
        key((0, 1), (2,), 4): 1,
        key((2,), (0, 1), 4): 1,
        key((2,), (2,), 4): 1,
    }
    assert kervaire_chern_polynomial(8) == want


def test_dimension_8_reduction_details():
    red = chern_reduction(8)
    assert red.complete and not red.ambiguous
    assert red.denominator == 16


def test_dimension_16_is_a_diagnostic_only():
    red = chern_reduction(16)
    assert not red.complete and red.unresolved
    with pytest.raises(UnsupportedDimension):
        kervaire_chern_polynomial(16)
    with pytest.raises(UnsupportedDimension):
        chern_reduction(6)


# -- manifolds ------------------------------------------------------------------------------
def test_evaluate_dimension_4():
    d = ChernData(4, {"c1^(0)*c1^(1)": 1})
    assert d.required() == ["c1^(0)*c1^(1)"]
    assert evaluate_manifold(d)["verdict"] == "kervaire-one"
    assert evaluate_manifold(ChernData(4, {"c1^(0)*c1^(1)": 0}))["verdict"] == "bounds-framed"


def test_evaluate_dimension_8():
    names = ChernData(8, {}).required()
    assert len(names) == 7
    zeros = {n: 0 for n in names}
    assert evaluate_manifold(ChernData(8, zeros))["verdict"] == "bounds-framed"
    two = dict(zeros, **{names[0]: 1, names[1]: 1})
    out = evaluate_manifold(ChernData(8, two))
    assert out["value"] == 2 and out["verdict"] == "bounds-framed"
    odd = dict(zeros, **{names[2]: 3})
    assert evaluate_manifold(ChernData(8, odd))["verdict"] == "kervaire-one"


def test_evaluate_missing_data():
    with pytest.raises(IncompleteChernData):
        evaluate_manifold(ChernData(8, {}))
