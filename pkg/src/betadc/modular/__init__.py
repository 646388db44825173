"""Modular forms, q-expansions, divided congruences and the Igusa tower."""

from .divided import (
    DEFAULT_PRECISION,
    DividedCongruence,
    T,
    default_precision,
    diamond,
    evaluate,
    hasse_check,
    iota2,
    katz_d,
    rho,
)
from .forms import (
    FormalGroupError,
    FormalLogData,
    Orientation,
    UnsupportedOrientation,
    WeierstrassModel,
    formal_log,
    formal_log_data,
    level1_model,
    level3_model,
    modular_alphabet,
    orientation,
    q0,
)
from .igusa import (
    FpSpan,
    IgusaClass,
    ResidueSeries,
    a3_series,
    igusa_express,
    structured_series,
    structured_str,
    t_series,
)
from .qexp import QExpansion, eisenstein, q_expansions, sigma_chi, sigma_chi_table
