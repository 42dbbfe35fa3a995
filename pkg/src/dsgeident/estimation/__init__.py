from .data import Dataset, load_observables
from .kalman import StateSpace, kalman_loglik, stacked_gaussian_loglik, stationary_covariance
from .models import SmallScaleLikelihood, small_posterior, smc_estimate_small
from .priors import Beta, Gamma, InvGamma, Normal, PriorSpec, TruncatedPrior, small_scale_priors
from .smc import (
    ParticleSystem,
    SMCSettings,
    TemperedPosterior,
    posterior_summary,
    smc_sample,
    weighted_quantile,
)

__all__ = [
    "Dataset",
    "load_observables",
    "StateSpace",
    "kalman_loglik",
    "stacked_gaussian_loglik",
    "stationary_covariance",
    "SmallScaleLikelihood",
    "small_posterior",
    "smc_estimate_small",
    "Beta",
    "Gamma",
    "InvGamma",
    "Normal",
    "PriorSpec",
    "TruncatedPrior",
    "small_scale_priors",
    "ParticleSystem",
    "SMCSettings",
    "TemperedPosterior",
    "posterior_summary",
    "smc_sample",
    "weighted_quantile",
]
