# app/solver/__init__.py
from app.solver.binomial import (BinomialShape, ConeSeriesSpec, UnitSquareTable,
                                 binomial_candidate_factors, binomial_zeta, cone_series_sum,
                                 perturbed_binomial_zeta, ray_series, split_binomial_shape)
from app.solver.normalize import (NormalizationState, normalize_binomial_tail, pull_up_roots,
                                  require_supported_character)
from app.solver.superelliptic import (SolverTrace, form_zeta, superelliptic_candidate_factors,
                                      superelliptic_zeta)

__all__ = [
    "BinomialShape",
    "ConeSeriesSpec",
    "NormalizationState",
    "SolverTrace",
    "UnitSquareTable",
    "binomial_candidate_factors",
    "binomial_zeta",
    "cone_series_sum",
    "form_zeta",
    "normalize_binomial_tail",
    "perturbed_binomial_zeta",
    "pull_up_roots",
    "ray_series",
    "require_supported_character",
    "split_binomial_shape",
    "superelliptic_candidate_factors",
    "superelliptic_zeta",
]
