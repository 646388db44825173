"""Random generators and property checks shared by the unit tests and the
acceptance run."""

import random

from gmpy2 import mpq

from betadc.algebra.poly import GradedPolynomial
from betadc.algebra.series import TruncatedSeries

SEED = 20240


def random_rational(rng, span=9, den=4):
    return mpq(rng.randint(-span, span), rng.randint(1, den))


def random_poly(rng, A, terms=4, max_exp=3, names=None):
    names = names or A.names
    out = {}
    for _ in range(rng.randint(1, terms)):
        powers = {n: rng.randint(0, max_exp) for n in rng.sample(names, rng.randint(1, len(names)))}
        key = A.key_of({n: e for n, e in powers.items() if e})
        out[key] = out.get(key, 0) + random_rational(rng)
    return GradedPolynomial(A, out)


def random_homogeneous(rng, A, degree, names, terms=3, den_exp=3, p=2):
    """Random combination of monomials of one degree with p-power denominators."""
    monos = A.monomials_of_degree(degree, names)
    out = {}
    for k in rng.sample(monos, min(terms, len(monos))):
        out[k] = mpq(rng.randint(-15, 15), p ** rng.randint(0, den_exp))
    return GradedPolynomial(A, out)


# -- the five property suites ---------------------------------------------------
def ring_axioms(cases, seed=SEED):
    from betadc.algebra.poly import Alphabet

    A = Alphabet(["x", "y", "z"], [2, 4, 6])
    rng = random.Random(seed)
    bad = 0
    for _ in range(cases):
        f, g, h = (random_poly(rng, A) for _ in range(3))
        ok = (
            (f * g) * h == f * (g * h)
            and f * (g + h) == f * g + f * h
            and f * g == g * f
            and f + g == g + f
            and (f + g) + h == f + (g + h)
            and (f - f).is_zero()
        )
        bad += not ok
    return bad


def reversion_round_trips(cases, seed=SEED, precision=9):
    rng = random.Random(seed)
    bad = 0
    for _ in range(cases):
        coeffs = [mpq(0), mpq(1)] + [random_rational(rng) for _ in range(precision - 2)]
        f = TruncatedSeries(coeffs, precision)
        g = f.reverse()
        x = TruncatedSeries.variable(precision)
        ok = f.compose(g) == x and g.compose(f) == x and g.reverse() == f
        bad += not ok
    return bad


def coset_idempotence(cases, seed=SEED, degrees=(4, 8, 12)):
    from betadc.bp.hazewinkel import bp_alphabet
    from betadc.bp.lattice import coset_reduce, lattice_basis

    A = bp_alphabet(2)
    names = ["vL1", "vL2", "vR1", "vR2"]
    rng = random.Random(seed)
    bad = 0
    for i in range(cases):
        d = degrees[i % len(degrees)]
        lat = lattice_basis(2, d)
        x = _mixed(random_homogeneous(rng, A, d, names, den_exp=4))
        y = _mixed(random_homogeneous(rng, A, d, names, den_exp=4))
        cx = coset_reduce(x, 2, d)
        # a random lattice element: integral combination of the generators
        g = A.zero()
        for gen in rng.sample(lat.generators, min(3, len(lat.generators))):
            g = g + gen * rng.randint(-3, 3)
        ok = (
            coset_reduce(cx.representative, 2, d) == cx
            and coset_reduce(x + g, 2, d) == cx
            and coset_reduce(x + y, 2, d) == cx + coset_reduce(y, 2, d)
            and cx.scale(cx.order).is_zero()
            and (cx.order == 1 or not cx.scale(cx.order // 2).is_zero())
        )
        bad += not ok
    return bad


def _mixed(x):
    from betadc.bp.lattice import is_pure

    return x.filter(lambda k: not is_pure(x.alphabet, k))


def cobar_d_squared(cases, seed=SEED):
    from betadc.bp.cobar import cobar_alphabet, differential, quotient_differential, sigma_reduce

    rng = random.Random(seed)
    bad = 0
    for i in range(cases):
        n = i % 3
        A = cobar_alphabet(2, n + 1)
        x = random_poly(rng, A, terms=3, max_exp=2)
        ok = differential(differential(x, n), n + 1).is_zero()
        if n >= 1:
            # on D/Sigma: [a0 (x) .. (x) an] -> [1 (x) a0 (x) ..]; twice gives 1 (x) 1 (x) .., which lies in Sigma
            q = quotient_differential(quotient_differential(sigma_reduce(x, n), n), n + 1)
            ok = ok and q.is_zero()
        bad += not ok
    return bad


def diamond_composition(cases, seed=SEED):
    from betadc.modular.divided import DividedCongruence, diamond
    from betadc.modular.forms import modular_alphabet

    rng = random.Random(seed)
    bad = 0
    for i in range(cases):
        level, p = ((3, 2), (1, 5))[i % 2]
        A = modular_alphabet(level)
        f = DividedCongruence.from_poly(random_poly(rng, A, terms=4, max_exp=3), p, level)
        a, b = _unit(rng, p), _unit(rng, p)
        ok = diamond(a, diamond(b, f)) == diamond(a * b, f) and diamond(1, f) == f
        bad += not ok
    return bad


def _unit(rng, p):
    while True:
        a = rng.randint(-50, 50)
        if a % p:
            return a


PROPERTY_SUITES = {
    "ring axioms": ring_axioms,
    "series reversion round trips": reversion_round_trips,
    "coset idempotence": coset_idempotence,
    "d o d = 0": cobar_d_squared,
    "diamond action composition": diamond_composition,
}
