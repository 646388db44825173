import numpy as np
import pytest
from gmpy2 import mpq

from betadc.algebra.cyclotomic import ResidueValue
from betadc.bp.beta import InvalidIndices, alpha1_alpha_t_representative, beta_construction, beta_representative
from betadc.finv import (
    closed_form_alpha1_alpha,
    closed_form_beta_t,
    closed_form_kervaire_family,
    ext2_catalog,
    f_invariant,
    kervaire_projection,
)
from betadc.finv.ambiguity import ambiguity, weight_monomials
from betadc.finv.invariant import kervaire_family_form
from betadc.modular.forms import orientation
from betadc.modular.igusa import ResidueSeries, structured_series, t_series

N = 200
ONE = ResidueValue(1, 0, 2)


def form(*exps):
    return {(e, 0): ONE for e in exps}


# -- closed forms ------------------------------------------------------------------
def test_kervaire_family_forms():
    assert kervaire_family_form(1, 2) == form(4, 3)
    assert kervaire_family_form(1, 3) == form(8, 6)
    assert kervaire_family_form(3, 1) == form(0, 6)
    assert kervaire_family_form(3, 0) == form(0, 3)
    # (a3^4 + a3^3)^3 over F_2
    assert kervaire_family_form(3, 2) == form(12, 11, 10, 9)
    with pytest.raises(InvalidIndices):
        kervaire_family_form(1, 0)
    with pytest.raises(InvalidIndices):
        kervaire_family_form(2, 1)


def test_squaring_structure():
    a = structured_series(kervaire_family_form(1, 2), N)
    b = structured_series(kervaire_family_form(1, 3), N)
    assert a * a == b


def test_beta_t_at_one():
    o = orientation(2, 3)
    c = closed_form_beta_t(1, o, N)
    T = t_series(N)
    assert c.series == T - T * T
    with pytest.raises(InvalidIndices):
        closed_form_beta_t(2, o, N)


def test_beta_s_closed_form():
    o = orientation(2, 3)
    c = closed_form_beta_t(3, o, N)
    assert c.equals(closed_form_kervaire_family(3, 0, N))


# -- the catalog ---------------------------------------------------------------------
def test_catalog_examples():
    names = lambda n: [g.name for g in ext2_catalog(n)]
    assert names(3) == ["alpha1*alpha3", "beta_{2,2}"]
    assert sorted(names(4)) == sorted(["alpha1*alpha7", "beta_{4,4}", "beta_{3,1}"])
    assert sorted(names(8)) == sorted(
        ["alpha1*alpha127", "beta_{64,64}", "beta_{48,16}", "beta_{44,4}", "beta_{43,1}"]
    )
    for n in range(3, 12):
        assert len(ext2_catalog(n)) == n // 2 + 1
        assert sum(g.is_kervaire for g in ext2_catalog(n)) == 1


# -- the pipeline ----------------------------------------------------------------------
@pytest.mark.parametrize("n", [3, 4, 5])
def test_pipeline_matches_closed_forms(n):
    o = orientation(2, 3)
    for g in ext2_catalog(n):
        fi = f_invariant(g.representative(), o, N)
        assert fi.equals(g.closed_form(N)), g.name
        assert fi.structured is not None


def test_beta_22_structured():
    o = orientation(2, 3)
    fi = f_invariant(beta_representative(2, 2, 1, 2), o, N)
    assert fi.equals(closed_form_kervaire_family(1, 1, N))
    diff = structured_series(fi.normal_form(), N) - structured_series(form(0, 2), N)
    assert fi.ambiguity.contains(diff)


def test_beta_44_normal_form():
    o = orientation(2, 3)
    fi = f_invariant(beta_representative(4, 4, 1, 2), o, N)
    assert fi.normal_form() == form(4, 3)


def test_alpha1_alpha_t_is_T():
    o = orientation(2, 3)
    for t in (3, 7):
        fi = f_invariant(alpha1_alpha_t_representative(t), o, N)
        assert fi.equals(closed_form_alpha1_alpha(t, N))


def test_multiplicativity_s3():
    # beta_{12,4} from x_2^3; the lattice normal form is skipped in degree 64
    o = orientation(2, 3)
    c = beta_construction(12, 4, 1, 2, reduce=False).coset
    assert c.degree == 64
    assert f_invariant(c, o, N).equals(closed_form_kervaire_family(3, 2, N))


def test_classes_are_two_torsion():
    o = orientation(2, 3)
    fi = f_invariant(beta_representative(2, 2, 1, 2), o, N)
    assert (fi.series + fi.series).is_zero()


def test_zero_class():
    o = orientation(2, 3)
    from betadc.bp.hazewinkel import bp_alphabet
    from betadc.bp.lattice import coset_reduce

    A = bp_alphabet(2)
    zero = coset_reduce(A.gen("vL1") ** 2 * A.gen("vR1") ** 2 / 8, 2, 8)
    fi = f_invariant(zero, o, N)
    assert fi.is_zero()
    assert kervaire_projection(fi, 3) == 0


def test_kervaire_projection():
    o = orientation(2, 3)
    for n in (3, 4, 5):
        for g in ext2_catalog(n):
            bit = kervaire_projection(f_invariant(g.representative(), o, N), n)
            assert bit == (1 if g.is_kervaire else 0), g.name


def test_kervaire_projection_rejects_wrong_degree():
    c = closed_form_kervaire_family(1, 2, N)
    with pytest.raises(ValueError):
        kervaire_projection(c, 5)


# -- the ambiguity subgroup ------------------------------------------------------------------
def test_weight_monomials():
    assert set(weight_monomials(3, 4)) == {(4, 0), (1, 1)}


@pytest.mark.parametrize("k", [4, 8, 16])
def test_ambiguity_contains_naive_span(k):
    amb = ambiguity(2, 3, k, N)
    from betadc.modular.divided import DividedCongruence
    from betadc.modular.forms import modular_alphabet

    A = modular_alphabet(3)
    for i, j in weight_monomials(3, k):
        f = DividedCongruence.from_poly(A.monomial({"a1": i, "a3": j}), 2, 3)
        s = f.reduce(N)
        s = s - ResidueSeries.constant(s[0], 2, N)
        assert amb.contains(s)
    assert amb.size == 1 + len(amb.reductions)


@pytest.mark.parametrize("k", [4, 8, 16])
def test_structured_ambiguity_misses_kervaire_coefficient(k):
    amb = ambiguity(2, 3, k, N)
    inter = amb.structured_intersection(k + 4)
    assert all(not f.get((k // 2, 0)) for f in inter)


def test_ambiguity_correction_is_integral():
    amb = ambiguity(2, 3, 4, N)
    from betadc.modular.divided import evaluate_components
    from betadc.modular.forms import modular_alphabet

    A = modular_alphabet(3)
    a1, a3 = A.gen("a1"), A.gen("a3")
    re, im = evaluate_components((a1**4 - a1 * a3) / 2, 3, N)
    fixed, lam = amb.correct(re)
    assert all(mpq(x).denominator % 2 for x in fixed[1:])
