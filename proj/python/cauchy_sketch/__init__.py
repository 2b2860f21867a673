"""Cauchy-transform sketches, l1 conditioning and coreset regression."""

from ._core import (
    ArgumentError,
    ContractViolation,
    DimensionError,
    NumericalError,
    SingularityError,
    fast_l1_basis,
    fast_lp_basis,
    fwht,
    gen_matrix,
    kappa_bar_1,
    l1_regression,
    leverage_scores,
    round_lp_ball,
    sketch,
    solve_weighted_l1,
    subspace_approx_l1,
)

__all__ = [
    "ArgumentError",
    "ContractViolation",
    "DimensionError",
    "NumericalError",
    "SingularityError",
    "fast_l1_basis",
    "fast_lp_basis",
    "fwht",
    "gen_matrix",
    "kappa_bar_1",
    "l1_regression",
    "leverage_scores",
    "round_lp_ball",
    "sketch",
    "solve_weighted_l1",
    "subspace_approx_l1",
]
