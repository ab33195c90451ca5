"""Exact-arithmetic toolkit for heights, local Weil functions, and
dynamical degree experiments on projective space over Q and real
quadratic fields.

The package keeps every height and local-height value as an exact
logarithm of a rational (LogMag) whenever possible and falls back to
certified interval enclosures only where exactness is impossible, so
identities like the product formula and the global height decomposition
can be checked with equality rather than tolerances.
"""

from .exactnum import (
    ExactnumError,
    FieldMismatch,
    LogMag,
    Place,
    PrecisionExhausted,
    QuadElem,
    QuadField,
    UndecidableComparison,
    ValuationOfZero,
    abs_value,
    factorize,
    integer_nth_root,
    is_prime,
    legendre,
    logmag_max,
    logmag_min,
    logmag_sum,
    padic_valuation,
    places_above,
    rational_support,
    sqrt_mod,
)
from .polydyn import (
    HomogPoly,
    IndeterminatePoint,
    Morphism,
    OrbitRecord,
    OrbitStep,
    ProjPoint,
    WellformedReport,
    ZeroPoint,
    evaluate,
    extend_orbit,
    height,
    height_twisted,
    iterate,
    pullback,
    wellformed_check,
)
from .weil import (
    DivisorPresentation,
    ExactnessLost,
    SupportHit,
    galois_symmetrized,
    monomials_of_degree,
    weil_all_places,
    weil_global,
    weil_local,
    weil_sum,
)
from .singular import (
    EfdEstimate,
    EfdResult,
    ExponentMatrix,
    LctResult,
    M0Report,
    MonomialIdeal,
    MonomialValuation,
    NewtonPolyhedron,
    cn_calculator,
    efd_estimate,
    efd_monomial_exact,
    family_ord,
    lct_form_interval,
    lct_lower_bound_canonical,
    lct_monomial,
    lct_snc,
    lct_valuation_search,
    max_ord_over_family,
    ord_pullback_hyperplane,
    remark44_m0,
)
from .degree import (
    AlphaEstimate,
    GrowthFit,
    RatioBoundReport,
    alpha_estimate,
    default_window,
    growth_fit,
    ratio_bound_check,
)
from .labcli import (
    AuditFailure,
    CacheInvalid,
    ConfigError,
    ExperimentConfig,
    OrbitCache,
    load_config,
    parse_config,
    run_gap_experiment,
    run_ratio_experiment,
    thm14_hypothesis_report,
    thm17_set_membership,
)

__version__ = "0.1.0"

__all__ = [
    "AlphaEstimate",
    "AuditFailure",
    "CacheInvalid",
    "ConfigError",
    "DivisorPresentation",
    "EfdEstimate",
    "EfdResult",
    "ExactnessLost",
    "ExactnumError",
    "ExperimentConfig",
    "ExponentMatrix",
    "FieldMismatch",
    "GrowthFit",
    "HomogPoly",
    "IndeterminatePoint",
    "LctResult",
    "LogMag",
    "M0Report",
    "MonomialIdeal",
    "MonomialValuation",
    "Morphism",
    "NewtonPolyhedron",
    "OrbitCache",
    "OrbitRecord",
    "OrbitStep",
    "Place",
    "PrecisionExhausted",
    "ProjPoint",
    "QuadElem",
    "QuadField",
    "RatioBoundReport",
    "SupportHit",
    "UndecidableComparison",
    "ValuationOfZero",
    "WellformedReport",
    "ZeroPoint",
    "abs_value",
    "alpha_estimate",
    "cn_calculator",
    "default_window",
    "efd_estimate",
    "efd_monomial_exact",
    "evaluate",
    "extend_orbit",
    "factorize",
    "family_ord",
    "galois_symmetrized",
    "growth_fit",
    "height",
    "height_twisted",
    "integer_nth_root",
    "is_prime",
    "iterate",
    "lct_form_interval",
    "lct_lower_bound_canonical",
    "lct_monomial",
    "lct_snc",
    "lct_valuation_search",
    "legendre",
    "load_config",
    "logmag_max",
    "logmag_min",
    "logmag_sum",
    "max_ord_over_family",
    "monomials_of_degree",
    "ord_pullback_hyperplane",
    "padic_valuation",
    "parse_config",
    "places_above",
    "pullback",
    "ratio_bound_check",
    "rational_support",
    "remark44_m0",
    "run_gap_experiment",
    "run_ratio_experiment",
    "sqrt_mod",
    "thm14_hypothesis_report",
    "thm17_set_membership",
    "weil_all_places",
    "weil_global",
    "weil_local",
    "weil_sum",
    "wellformed_check",
]
