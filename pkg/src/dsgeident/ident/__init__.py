from .globl import (
    CrossModelReport,
    KLOptions,
    KLReport,
    empirical_distance,
    empirical_distance_map,
    kl_distance,
    lr_variance,
    mc_rejection_rate,
    minimize_kl_constrained,
    minimize_kl_cross_model,
)
from .local import EigenAnalysisRow, GMatrix, eigen_analysis, g_matrix

__all__ = [
    "CrossModelReport",
    "KLOptions",
    "KLReport",
    "empirical_distance",
    "empirical_distance_map",
    "kl_distance",
    "lr_variance",
    "mc_rejection_rate",
    "minimize_kl_constrained",
    "minimize_kl_cross_model",
    "EigenAnalysisRow",
    "GMatrix",
    "eigen_analysis",
    "g_matrix",
]
