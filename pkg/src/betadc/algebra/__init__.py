from .cyclotomic import CyclotomicValue, ResidueValue, reduce_scalar, scalar_valuation
from .poly import Alphabet, AlphabetMismatch, DegreeError, GradedPolynomial
from .rational import INF, NonIntegralError, Q, fractional_part, mod_pk, padic_valuation, split_p
from .series import SeriesError, TruncatedSeries

__all__ = [
    "Alphabet",
    "AlphabetMismatch",
    "CyclotomicValue",
    "DegreeError",
    "GradedPolynomial",
    "INF",
    "NonIntegralError",
    "Q",
    "ResidueValue",
    "SeriesError",
    "TruncatedSeries",
    "fractional_part",
    "mod_pk",
    "padic_valuation",
    "reduce_scalar",
    "scalar_valuation",
    "split_p",
]
