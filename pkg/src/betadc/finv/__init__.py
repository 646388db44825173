"""f-invariants of Adams-Novikov 2-line elements."""

from .ambiguity import Ambiguity, ambiguity, saturate, weight_monomials
from .invariant import (
    Ext2Generator,
    FClass,
    PipelineError,
    beta_degree,
    closed_form_alpha1_alpha,
    closed_form_beta_t,
    closed_form_kervaire_family,
    ext2_catalog,
    f_invariant,
    kervaire_family_form,
    kervaire_projection,
)
