"""Bridges from model parameter draws to state-space likelihoods."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import ToolkitError
from ..lre import Verdict, solve_linear_re
from ..models.params import SmallScaleParams
from ..models.small import build_small_scale_estimation, estimation_selection
from ..spectrum import compose_shock_covariance
from .data import Dataset
from .kalman import StateSpace, kalman_loglik
from .priors import PriorSpec, small_scale_priors
from .smc import SMCSettings, TemperedPosterior, smc_sample


@dataclass(frozen=True)
class SmallScaleLikelihood:
    """Likelihood of the augmented small-scale state space (picklable).

    ``regime`` gates the solution type: a determinacy-regime run assigns
    -inf to indeterminate draws and vice versa, mirroring the separate
    estimation regimes.  The measurement vector is (YGR, INFL, INT) with
    no measurement error.
    """

    base: SmallScaleParams
    names: tuple[str, ...]
    regime: str = "determinacy"
    data: np.ndarray = field(default=None, repr=False)

    def params(self, gamma) -> SmallScaleParams:
        return self.base.replace(**dict(zip(self.names, map(float, gamma))))

    def state_space(self, gamma) -> StateSpace:
        p = self.params(gamma)
        cf = build_small_scale_estimation(p, "DE" if p.theta != 0 else "RE")
        sol = solve_linear_re(cf)
        indet = self.regime == "indeterminacy"
        want = Verdict.INDETERMINATE if indet else Verdict.DETERMINATE
        if sol.determinacy.verdict is not want or (indet and sol.q != 1):
            raise ToolkitError(
                f"draw solves as {sol.classification}, run requires "
                f"{'Indeterminate(1)' if indet else 'Determinate'}"
            )
        sigma_eps = np.diag([p.sigma_a**2, p.sigma_g**2, p.sigma_m**2])
        if indet:
            cov = compose_shock_covariance(
                sigma_eps, m=p.projection, sigma_sun=[[p.sigma_sun**2]]
            )
            sigma = cov.sigma
        else:
            sigma = sigma_eps
        return StateSpace(
            transition=sol.theta1,
            loading=sol.loadings,
            selection=estimation_selection(),
            shock_cov=sigma,
        )

    def __call__(self, gamma) -> float:
        try:
            ss = self.state_space(gamma)
        except (ToolkitError, np.linalg.LinAlgError):
            return -np.inf
        return kalman_loglik(ss, self.data)


def small_posterior(
    data: Dataset,
    regime: str = "determinacy",
    base: SmallScaleParams | None = None,
    priors: PriorSpec | None = None,
) -> TemperedPosterior:
    """Tempered posterior for the small-scale model on a dataset."""
    from ..models.presets import SMALL_DE, SMALL_INDET

    indet = regime == "indeterminacy"
    base = base or (SMALL_INDET if indet else SMALL_DE)
    priors = priors or small_scale_priors(indeterminacy=indet)
    lik = SmallScaleLikelihood(
        base=base, names=priors.names, regime=regime, data=data.values
    )
    return TemperedPosterior(priors, lik)


def smc_estimate_small(
    data: Dataset,
    regime: str = "determinacy",
    settings: SMCSettings | None = None,
    seed: int = 0,
    progress=None,
):
    """SMC posterior for the small-scale model; returns the particle system."""
    posterior = small_posterior(data, regime=regime)
    return smc_sample(posterior, settings=settings, seed=seed, progress=progress)
