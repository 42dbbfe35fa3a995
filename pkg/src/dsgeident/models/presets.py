"""Bundled benchmark parameter sets.

These are the estimated posterior means shipped with the toolkit as
evaluation points for identification and distance exercises: the
small-scale model under diagnostic and rational expectations (determinacy
sample), an alternative small-scale posterior from a slice-sampling run,
the dovish-policy posterior estimated in the indeterminacy regime, and the
medium-scale posterior.  All shock standard deviations are percent.
"""

from __future__ import annotations

from .params import MediumCalibration, MediumScaleParams, SmallScaleParams

SMALL_DE = SmallScaleParams(
    theta=0.57, phi_y=0.11, phi_pi=1.15, beta=0.99, kappa=0.12,
    rho_a=0.77, rho_g=0.93, sigma_a=0.61, sigma_g=1.79, sigma_m=0.38,
)

SMALL_RE = SmallScaleParams(
    theta=0.0, phi_y=0.08, phi_pi=1.21, beta=0.99, kappa=0.15,
    rho_a=0.56, rho_g=0.95, sigma_a=0.91, sigma_g=1.54, sigma_m=0.39,
)

#: Alternative small-scale DE posterior from a slice-sampling MCMC run.
SMALL_DE_MCMC = SmallScaleParams(
    theta=0.56, phi_y=0.10, phi_pi=1.14, beta=0.99, kappa=0.13,
    rho_a=0.80, rho_g=0.94, sigma_a=0.55, sigma_g=1.77, sigma_m=0.38,
)

#: Dovish-policy posterior estimated under indeterminacy, including the
#: sunspot projection block.
SMALL_INDET = SmallScaleParams(
    theta=0.54, phi_y=0.28, phi_pi=0.36, beta=0.99, kappa=0.06,
    rho_a=0.98, rho_g=0.78, sigma_a=0.90, sigma_g=2.08, sigma_m=0.30,
    m_a_eps=0.58, m_g_eps=0.21, m_m_eps=-1.61, sigma_sun=0.34,
)

#: Closest rational-expectations counterpart to SMALL_DE (the
#: cross-model KL minimizer), bundled for impulse-response comparisons.
SMALL_RE_CLOSEST_TO_DE = SmallScaleParams(
    theta=0.0, phi_y=0.09, phi_pi=1.19, beta=0.999, kappa=0.16,
    rho_a=0.66, rho_g=0.94, sigma_a=0.79, sigma_g=1.41, sigma_m=0.37,
)

MEDIUM_CAL = MediumCalibration()

MEDIUM_DE = MediumScaleParams(
    theta=0.72, alpha=0.13, h=0.72, chi_ratio=5.09,
    psi_p=122.47, psi_w=507.44, nu=3.71, s_dd=6.93,
    rho_r=0.58, phi_pi=1.54, phi_x=0.006,
    rho=0.85, sigma_a=1.43, sigma_s=0.29,
    rho_mu=0.31, sigma_mu=18.63,
    rho_p=0.88, phi_p=0.58, sigma_p=0.16,
    rho_w=0.997, phi_w=0.54, sigma_w=0.44,
    rho_mp=0.03, sigma_mp=0.38,
    rho_g=0.94, sigma_g=0.37,
    sigma_me_ygr=0.50, sigma_me_cgr=0.41, sigma_me_igr=1.44,
    sigma_me_pi=0.27, sigma_me_i=0.16,
)

PRESETS = {
    "small-de": SMALL_DE,
    "small-re": SMALL_RE,
    "small-de-mcmc": SMALL_DE_MCMC,
    "small-indet": SMALL_INDET,
    "small-re-closest": SMALL_RE_CLOSEST_TO_DE,
    "medium-de": MEDIUM_DE,
}
