"""Weighted Poincare inequalities for global sensitivity analysis.

Thin python layer over the C++ core: input measures, weight construction,
Sturm-Liouville eigenbases, DGSM upper bounds and Poincare chaos
approximations of total Sobol indices.
"""

from pgsa._core import (  # noqa: F401
    IntertwiningProfile,
    LimitQuotientFamily,
    MainEffectFit,
    Measure,
    Model,
    SobolEstimate,
    SpectralBasis,
    WeightCurve,
    build_report,
    builtin_model,
    data_driven_weight,
    estimate_main_effect_reference,
    fit_main_effect_monotone,
    flood_model_c,
    flood_model_s,
    intertwining_bound,
    intertwining_profile_eps,
    intertwining_profile_h,
    limit_quotient_family,
    poincare_constant,
    rayleigh_quotient,
    reference_weight,
    sobol_total_reference,
    solve_eigenbasis,
    toy1_model,
    toy1_sobol_oracle,
    toy2_model,
    toy2_sobol_oracle,
    weight_from_g,
    weight_lin_closed_form,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
