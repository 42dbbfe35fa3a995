"""Canonical-form builders for the small-scale New Keynesian model.

The model consists of a dynamic IS curve with diagnostic belief
distortions, a Phillips curve, a Taylor rule, and AR(1) technology and
government-spending processes.  Diagnostic expectations are expanded into
rational-expectations form, which introduces lagged expectations: the
state vector carries four auxiliary expectation states

    P_t = E_t[y_{t+1}],  X_t = E_t[pi_{t+1}],
    Q_t = E_t[y_{t+2}],  Y_t = E_t[pi_{t+2}],

tied down by the four auxiliary equations y_t = P_{t-1} + eta^y_t,
pi_t = X_{t-1} + eta^pi_t, P_t = Q_{t-1} + eta^P_t, X_t = Y_{t-1} + eta^X_t.

State ordering: (y, pi, P, X, Q, Y, i, a, g); shocks (eps_a, eps_g, eps_m);
expectation errors (eta_y, eta_pi, eta_P, eta_X).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParamsError, SingularDenominatorError
from ..lre import CanonicalForm
from .params import SmallScaleParams

STATE_LABELS = ("y", "pi", "P", "X", "Q", "Y", "i", "a", "g")
SHOCK_LABELS = ("eps_a", "eps_g", "eps_m")
OBSERVABLE_LABELS = ("y", "pi", "i")

_IY, _IPI, _IP, _IX, _IQ, _IYY, _II, _IA, _IG = range(9)


def _check_regime(p: SmallScaleParams, regime: str) -> SmallScaleParams:
    regime = regime.upper()
    if regime not in ("DE", "RE"):
        raise InvalidParamsError(f"regime must be 'DE' or 'RE', got {regime!r}")
    if regime == "RE" and p.theta != 0.0:
        p = p.replace(theta=0.0)
    return p


def build_small_scale(p: SmallScaleParams, regime: str = "DE") -> CanonicalForm:
    """Build the 9-state canonical form (3 shocks, 4 expectation errors).

    Under regime "RE" the diagnosticity is forced to zero, so the RE build
    is exactly the DE build evaluated at theta = 0.
    """
    p = _check_regime(p, regime)
    th = p.theta
    n, k, m = 9, 3, 4
    g0 = np.zeros((n, n))
    g1 = np.zeros((n, n))
    psi = np.zeros((n, k))
    pi = np.zeros((n, m))

    # IS curve. Lagged expectations of (y_{t+1}, pi_{t+1}, pi_t, g_{t+1})
    # sit in gamma1 through the auxiliary states and the AR structure of g.
    r = 0
    g0[r, _IY] = -1.0
    g0[r, _IPI] = th
    g0[r, _IP] = 1.0 + th
    g0[r, _IX] = 1.0 + th
    g0[r, _II] = -1.0
    g0[r, _IG] = 1.0 - (1.0 + th) * p.rho_g
    g1[r, _IX] = th
    g1[r, _IQ] = th
    g1[r, _IYY] = th
    g1[r, _IG] = -th * p.rho_g**2

    # Phillips curve.
    r = 1
    g0[r, _IY] = -p.kappa
    g0[r, _IPI] = 1.0
    g0[r, _IX] = -p.beta * (1.0 + th)
    g0[r, _IA] = p.kappa
    g0[r, _IG] = p.kappa * p.psi_g
    g1[r, _IYY] = -p.beta * th

    # Taylor rule.
    r = 2
    g0[r, _IY] = -p.phi_y
    g0[r, _IPI] = -p.phi_pi
    g0[r, _II] = 1.0
    g0[r, _IA] = p.phi_y
    psi[r, 2] = 1.0

    # Shock processes.
    g0[3, _IA] = 1.0
    g1[3, _IA] = p.rho_a
    psi[3, 0] = 1.0
    g0[4, _IG] = 1.0
    g1[4, _IG] = p.rho_g
    psi[4, 1] = 1.0

    # Auxiliary expectation equations.
    g0[5, _IY] = 1.0
    g1[5, _IP] = 1.0
    pi[5, 0] = 1.0
    g0[6, _IPI] = 1.0
    g1[6, _IX] = 1.0
    pi[6, 1] = 1.0
    g0[7, _IP] = 1.0
    g1[7, _IQ] = 1.0
    pi[7, 2] = 1.0
    g0[8, _IX] = 1.0
    g1[8, _IYY] = 1.0
    pi[8, 3] = 1.0

    return CanonicalForm(
        gamma0=g0, gamma1=g1, psi=psi, pi=pi,
        state_labels=STATE_LABELS, shock_labels=SHOCK_LABELS,
    )


def level_selection() -> np.ndarray:
    """Selection matrix mapping the 9 states to (y, pi, i) levels."""
    sel = np.zeros((3, 9))
    sel[0, _IY] = 1.0
    sel[1, _IPI] = 1.0
    sel[2, _II] = 1.0
    return sel


ESTIMATION_STATE_LABELS = STATE_LABELS + ("y_lag",)
ESTIMATION_OBSERVABLES = ("YGR", "INFL", "INT")


def build_small_scale_estimation(p: SmallScaleParams, regime: str = "DE") -> CanonicalForm:
    """10-state variant with lagged output appended via an identity row.

    The extra state makes output growth a contemporaneous selection, which
    is the form the Kalman filter consumes.  The first nine states solve
    identically to :func:`build_small_scale`.
    """
    base = build_small_scale(p, regime)
    n = 10
    g0 = np.zeros((n, n))
    g1 = np.zeros((n, n))
    g0[:9, :9] = base.gamma0
    g1[:9, :9] = base.gamma1
    psi = np.vstack([base.psi, np.zeros((1, base.k))])
    pi = np.vstack([base.pi, np.zeros((1, base.m))])
    # y_lag_t = y_{t-1}
    g0[9, 9] = 1.0
    g1[9, _IY] = 1.0
    return CanonicalForm(
        gamma0=g0, gamma1=g1, psi=psi, pi=pi,
        state_labels=ESTIMATION_STATE_LABELS, shock_labels=SHOCK_LABELS,
    )


def estimation_selection() -> np.ndarray:
    """Selection A mapping the 10 states to (YGR, INFL, INT)."""
    sel = np.zeros((3, 10))
    sel[0, _IY] = 1.0
    sel[0, 9] = -1.0
    sel[1, _IPI] = 1.0
    sel[2, _II] = 1.0
    return sel


REDUCED_STATE_LABELS = ("y", "pi", "P", "X", "Q", "Y", "a", "g")
REDUCED_SHOCK_LABELS = ("eps_a", "eps_g")


def build_reduced_two_equation(p: SmallScaleParams, regime: str = "DE") -> CanonicalForm:
    """Two-equation variant: no policy rule, constant interest rate.

    Drops the Taylor rule and the interest-rate state, leaving 8 states,
    2 shocks and the same 4 expectation errors.  This is the system the
    closed-form solution of :func:`analytic_reduced_solution` describes.
    """
    p = _check_regime(p, regime)
    full = build_small_scale(p, regime="DE")  # theta already forced if RE
    keep = [_IY, _IPI, _IP, _IX, _IQ, _IYY, _IA, _IG]
    rows = [0, 1, 3, 4, 5, 6, 7, 8]  # all equations except the policy rule
    g0 = full.gamma0[np.ix_(rows, keep)]
    g1 = full.gamma1[np.ix_(rows, keep)]
    # With the nominal rate pegged at zero the IS curve loses its -i term,
    # which the column selection above already removed.
    psi = full.psi[np.ix_(rows, [0, 1])]
    pi = full.pi[rows]
    return CanonicalForm(
        gamma0=g0, gamma1=g1, psi=psi, pi=pi,
        state_labels=REDUCED_STATE_LABELS, shock_labels=REDUCED_SHOCK_LABELS,
    )


@dataclass(frozen=True)
class AnalyticReducedSolution:
    """Closed-form coefficients of the reduced two-equation model.

    The lagged-state coefficients ``alpha_ij`` do not depend on the
    diagnosticity; only the impact coefficients ``mu_ij`` do.
    """

    alpha11: float
    alpha12: float
    alpha21: float
    alpha22: float
    mu11: float
    mu12: float
    mu21: float
    mu22: float

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        alpha = np.array([[self.alpha11, self.alpha12], [self.alpha21, self.alpha22]])
        mu = np.array([[self.mu11, self.mu12], [self.mu21, self.mu22]])
        return alpha, mu


def analytic_reduced_solution(p: SmallScaleParams) -> AnalyticReducedSolution:
    """Evaluate the guess-and-verify solution of the reduced model.

    Output and inflation load on lagged exogenous states through the
    ``alpha`` coefficients and on current innovations through ``mu``:

        y_t  = a11 a_{t-1} + a12 g_{t-1} + m11 eps_a + m12 eps_g
        pi_t = a21 a_{t-1} + a22 g_{t-1} + m21 eps_a + m22 eps_g
    """
    th, beta, kappa = p.theta, p.beta, p.kappa
    psi = p.psi_g

    def denom(rho: float, tag: str) -> float:
        d = 1.0 - rho * (1.0 + beta + kappa) + beta * rho**2
        if abs(d) < 1e-12:
            raise SingularDenominatorError(
                f"1 - {tag}(1 + beta + kappa) + beta {tag}^2 vanishes"
            )
        return d

    d_a = denom(p.rho_a, "rho_a")
    d_g = denom(p.rho_g, "rho_g")
    one_m_kth = 1.0 - kappa * th
    if abs(one_m_kth) < 1e-12:
        raise SingularDenominatorError("1 - kappa * theta vanishes")

    ra, rg = p.rho_a, p.rho_g
    alpha11 = -kappa * ra**2 / d_a
    alpha21 = -kappa * (1.0 - ra) * ra / d_a
    alpha12 = rg * (1.0 - rg * (1.0 + beta + kappa * psi) + beta * rg**2) / d_g
    alpha22 = kappa * rg * (1.0 - psi) * (1.0 - rg) / d_g

    mu11 = -kappa * (ra + th * (1.0 - kappa * ra) + beta * ra * th**2 * (1.0 - ra)) / (
        d_a * one_m_kth
    )
    mu21 = -kappa * ((1.0 - ra) + ra * th * (kappa + beta * (1.0 - ra))) / (
        d_a * one_m_kth
    )
    mu22 = (
        (1.0 + th) * (beta * alpha22 + kappa * (alpha12 + alpha22 - rg))
        + kappa * (1.0 - psi)
    ) / one_m_kth
    mu12 = (1.0 + th) * (alpha12 + alpha22 - rg) + th * mu22 + 1.0

    return AnalyticReducedSolution(
        alpha11=alpha11, alpha12=alpha12, alpha21=alpha21, alpha22=alpha22,
        mu11=mu11, mu12=mu12, mu21=mu21, mu22=mu22,
    )


def reduced_equation_residuals(p: SmallScaleParams, sol: AnalyticReducedSolution) -> np.ndarray:
    """Residuals of the reduced-model equations at a candidate solution.

    Substitutes the guessed law of motion into the IS and Phillips curves
    and collects coefficients on (a_{t-1}, g_{t-1}, eps_a, eps_g); all
    eight must vanish for a valid solution.  Used as an independent check
    that the closed-form coefficients satisfy the model.
    """
    th, beta, kappa, psi = p.theta, p.beta, p.kappa, p.psi_g
    ra, rg = p.rho_a, p.rho_g
    a11, a12, a21, a22 = sol.alpha11, sol.alpha12, sol.alpha21, sol.alpha22
    m11, m12, m21, m22 = sol.mu11, sol.mu12, sol.mu21, sol.mu22

    is_res = np.array([
        ra * (a11 + a21) - a11,
        rg * (a12 + a22) - a12 + rg * (1.0 - rg),
        (1.0 + th) * (a11 + a21) - m11 + th * m21,
        (1.0 + th) * (a12 + a22 - rg) - m12 + 1.0 + th * m22,
    ])
    pc_res = np.array([
        -a21 + beta * ra * a21 + kappa * a11 - kappa * ra,
        -a22 + beta * rg * a22 + kappa * a12 - kappa * psi * rg,
        -m21 + beta * (1.0 + th) * a21 + kappa * m11 - kappa,
        -m22 + beta * (1.0 + th) * a22 + kappa * m12 - kappa * psi,
    ])
    return np.concatenate([is_res, pc_res])
