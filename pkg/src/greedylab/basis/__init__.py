"""Basis models, the greedy algorithm and best m-term errors."""

from greedylab.basis.approximation import BestTermError, SigmaConfig, sigma, sigma_tilde
from greedylab.basis.greedy import (
    GreedyTrace,
    all_greedy_sets,
    coefficients_of,
    enumerate_greedy_sets,
    greedy_order,
    greedy_projection,
    greedy_set,
    greedy_trace,
    is_greedy_set,
    magnitude_levels,
    nested_greedy_pairs,
    residual,
    strictly_greedy_sets,
    truncation_T,
    truncation_U,
)
from greedylab.basis.models import BasisModel, LatticeModel, MatrixModel, ModelLike, as_model

__all__ = [
    "BasisModel",
    "BestTermError",
    "GreedyTrace",
    "LatticeModel",
    "MatrixModel",
    "ModelLike",
    "SigmaConfig",
    "all_greedy_sets",
    "as_model",
    "coefficients_of",
    "enumerate_greedy_sets",
    "greedy_order",
    "greedy_projection",
    "greedy_set",
    "greedy_trace",
    "is_greedy_set",
    "magnitude_levels",
    "nested_greedy_pairs",
    "residual",
    "sigma",
    "sigma_tilde",
    "strictly_greedy_sets",
    "truncation_T",
    "truncation_U",
]
