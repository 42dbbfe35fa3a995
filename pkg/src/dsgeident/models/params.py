"""Parameter containers and JSON loading for the bundled models."""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass

import numpy as np

from ..errors import CalibrationInconsistentError, InvalidParamsError


@dataclass(frozen=True)
class SmallScaleParams:
    """Parameters of the small-scale New Keynesian model.

    ``theta`` is the diagnosticity of belief distortions (0 recovers
    rational expectations).  Shock standard deviations are in percent.
    The optional projection block (``m_a_eps`` ... ``sigma_sun``) describes
    the sunspot shock under indeterminacy: its projection coefficients on
    the three structural shocks and the residual sunspot standard
    deviation.  Leave the block unset for determinacy-regime work.
    """

    theta: float
    phi_y: float
    phi_pi: float
    beta: float
    kappa: float
    rho_a: float
    rho_g: float
    sigma_a: float
    sigma_g: float
    sigma_m: float
    nu: float = 2.0
    m_a_eps: float | None = None
    m_g_eps: float | None = None
    m_m_eps: float | None = None
    sigma_sun: float | None = None

    def __post_init__(self):
        if self.theta < 0:
            raise InvalidParamsError("theta must be >= 0")
        if not 0 < self.beta <= 1:
            raise InvalidParamsError("beta must lie in (0, 1]")
        if self.kappa <= 0:
            raise InvalidParamsError("kappa must be > 0")
        if self.nu <= 0:
            raise InvalidParamsError("nu must be > 0")
        for name in ("rho_a", "rho_g"):
            v = getattr(self, name)
            if not 0 <= v < 1:
                raise InvalidParamsError(f"{name} must lie in [0, 1)")
        for name in ("sigma_a", "sigma_g", "sigma_m"):
            if getattr(self, name) <= 0:
                raise InvalidParamsError(f"{name} must be > 0")
        block = (self.m_a_eps, self.m_g_eps, self.m_m_eps, self.sigma_sun)
        present = [v is not None for v in block]
        if any(present) and not all(present):
            raise InvalidParamsError(
                "projection block must be supplied completely or not at all"
            )
        if self.sigma_sun is not None and self.sigma_sun <= 0:
            raise InvalidParamsError("sigma_sun must be > 0")

    @property
    def psi_g(self) -> float:
        """Composite fiscal slope 1/(1+nu) entering the Phillips curve."""
        return 1.0 / (1.0 + self.nu)

    @property
    def has_sunspot_block(self) -> bool:
        return self.sigma_sun is not None

    @property
    def projection(self) -> np.ndarray:
        """Sunspot projection matrix M (1 x 3) on (eps_a, eps_g, eps_m)."""
        if not self.has_sunspot_block:
            raise InvalidParamsError("no projection block on these parameters")
        return np.array([[self.m_a_eps, self.m_g_eps, self.m_m_eps]])

    def replace(self, **kw) -> "SmallScaleParams":
        return dataclasses.replace(self, **kw)


@dataclass(frozen=True)
class MediumCalibration:
    """Calibrated steady-state objects of the medium-scale model.

    Only ratios and gross rates appear in the loglinear system.  The
    rental rate ``r_k`` and the great ratios are derived from
    (beta, delta_k, growth, government share, capital share, markup) when
    not supplied, and consistency with the capital Euler steady state is
    asserted either way.
    """

    beta: float = 0.99
    delta_k: float = 0.025
    g_a: float = 1.005
    lambda_g: float = 1.25
    epsilon_p: float = 6.0
    epsilon_w: float = 6.0
    omega_wage: float = 1.0
    labor: float = 1.0
    iota_p: float = 0.0
    iota_w: float = 0.0

    def __post_init__(self):
        for name in ("beta", "delta_k", "g_a", "lambda_g", "epsilon_p",
                     "epsilon_w", "omega_wage", "labor"):
            if getattr(self, name) <= 0:
                raise InvalidParamsError(f"{name} must be > 0")
        if not 0 < self.beta < self.g_a:
            raise CalibrationInconsistentError(
                "need beta < g_a for a positive steady-state rental rate"
            )

    @property
    def r_k(self) -> float:
        """Rental rate from the capital Euler steady state."""
        return self.g_a / self.beta - (1.0 - self.delta_k)

    @property
    def i_over_ku(self) -> float:
        return 1.0 - (1.0 - self.delta_k) / self.g_a

    def ratios(self, alpha: float) -> dict[str, float]:
        """Great ratios implied by the capital share ``alpha``."""
        mc = (self.epsilon_p - 1.0) / self.epsilon_p
        k_over_y = alpha * mc / self.r_k
        ku_over_y = self.g_a * k_over_y
        i_over_y = self.i_over_ku * ku_over_y
        c_over_y = 1.0 / self.lambda_g - i_over_y
        if c_over_y <= 0:
            raise CalibrationInconsistentError(
                f"consumption share nonpositive ({c_over_y:.4f}); "
                "check lambda_g / alpha / delta_k"
            )
        return {
            "k_over_y": k_over_y,
            "ku_over_y": ku_over_y,
            "i_over_y": i_over_y,
            "c_over_y": c_over_y,
            "chi1": self.r_k,  # utilization FOC at u = 1
        }


@dataclass(frozen=True)
class MediumScaleParams:
    """Estimated parameters of the medium-scale model.

    Price and wage rigidity may be supplied either as adjustment-cost
    scales (``psi_p``, ``psi_w``) or as slopes (``kappa_p``, ``kappa_w``);
    the slopes satisfy kappa_p = (epsilon_p - 1)/psi_p and
    kappa_w = omega * epsilon_w / psi_w under the bundled calibration.
    Measurement-error standard deviations enter the likelihood only, never
    the identification spectra.
    """

    theta: float
    alpha: float
    h: float
    chi_ratio: float
    psi_p: float
    psi_w: float
    nu: float
    s_dd: float
    rho_r: float
    phi_pi: float
    phi_x: float
    rho: float
    sigma_a: float
    sigma_s: float
    rho_mu: float
    sigma_mu: float
    rho_p: float
    phi_p: float
    sigma_p: float
    rho_w: float
    phi_w: float
    sigma_w: float
    rho_mp: float
    sigma_mp: float
    rho_g: float
    sigma_g: float
    sigma_me_ygr: float = 0.0
    sigma_me_cgr: float = 0.0
    sigma_me_igr: float = 0.0
    sigma_me_pi: float = 0.0
    sigma_me_i: float = 0.0

    def __post_init__(self):
        if self.theta < 0:
            raise InvalidParamsError("theta must be >= 0")
        if not 0 < self.alpha < 1:
            raise InvalidParamsError("alpha must lie in (0, 1)")
        if not 0 <= self.h < 1:
            raise InvalidParamsError("h must lie in [0, 1)")
        for name in ("psi_p", "psi_w", "nu", "s_dd", "chi_ratio"):
            if getattr(self, name) <= 0:
                raise InvalidParamsError(f"{name} must be > 0")
        for name in ("rho_r", "rho", "rho_mu", "rho_p", "rho_w", "rho_mp", "rho_g"):
            v = getattr(self, name)
            if not 0 <= v < 1:
                raise InvalidParamsError(f"{name} must lie in [0, 1)")
        for name in ("sigma_a", "sigma_s", "sigma_mu", "sigma_p", "sigma_w",
                     "sigma_mp", "sigma_g"):
            if getattr(self, name) <= 0:
                raise InvalidParamsError(f"{name} must be > 0")

    def kappa_p(self, cal: MediumCalibration) -> float:
        return (cal.epsilon_p - 1.0) / self.psi_p

    def kappa_w(self, cal: MediumCalibration) -> float:
        return cal.omega_wage * cal.epsilon_w / self.psi_w

    @classmethod
    def from_slopes(cls, kappa_p: float, kappa_w: float,
                    cal: MediumCalibration | None = None, **kw) -> "MediumScaleParams":
        cal = cal or MediumCalibration()
        return cls(
            psi_p=(cal.epsilon_p - 1.0) / kappa_p,
            psi_w=cal.omega_wage * cal.epsilon_w / kappa_w,
            **kw,
        )

    def replace(self, **kw) -> "MediumScaleParams":
        return dataclasses.replace(self, **kw)


def load_params_json(path, cls):
    """Read a parameter JSON file into ``cls``.

    The object must be keyed by the dataclass field names; unknown keys are
    an error.  An optional ``fixed`` array names parameters to hold
    constant in optimization and estimation; it is returned separately.
    """
    with open(path) as fh:
        raw = json.load(fh)
    if not isinstance(raw, dict):
        raise InvalidParamsError(f"{path}: expected a JSON object")
    fixed = raw.pop("fixed", [])
    if not isinstance(fixed, list) or not all(isinstance(s, str) for s in fixed):
        raise InvalidParamsError(f"{path}: 'fixed' must be an array of names")
    known = {f.name for f in dataclasses.fields(cls)}
    unknown = set(raw) - known
    if unknown:
        raise InvalidParamsError(
            f"{path}: unknown parameter keys {sorted(unknown)}"
        )
    bad_fixed = set(fixed) - known
    if bad_fixed:
        raise InvalidParamsError(f"{path}: 'fixed' names unknown keys {sorted(bad_fixed)}")
    return cls(**raw), list(fixed)
