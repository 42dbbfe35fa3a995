"""Canonical-form builder for the medium-scale model.

The model features habit formation, investment adjustment costs, variable
capital utilization, Rotemberg price and wage rigidity, a Taylor rule,
ARMA(1,1) markup shocks, and imperfect information about productivity
growth.  The productivity block enters through its innovations
representation: the steady-state signal filter of
:mod:`dsgeident.models.signal` supplies the law of motion of the filtered
states and the two observation innovations (productivity growth and the
growth signal) act as structural shocks, which keeps the 7-observable
spectral density nonsingular with exactly 7 shocks.

Diagnostic expectations are expanded as E^theta_t[.] =
(1 + theta) E_t[.] - theta E_{t-1}[.], applied to the composite argument
of each expectational equation (current-dated terms inside the operator
generate news terms).  Lagged expectations of the six forward-looking
endogenous variables (marginal utility, price and wage inflation, the
rental rate, Tobin's q, investment) require one pair of auxiliary
expectation states each, mirroring the small-scale construction.

MA(1) markup components are carried by lagged-innovation states so the
system stays first-order.
"""

from __future__ import annotations

import numpy as np

from ..errors import InvalidParamsError
from ..lre import CanonicalForm
from ..spectrum import ShockCovariance, compose_shock_covariance
from .params import MediumCalibration, MediumScaleParams
from .signal import SignalFilter, steady_state_kalman_gain

STATE_LABELS = (
    "lam", "c", "pi", "piw", "w", "mc", "labor", "ku", "inv", "q", "rk",
    "k", "u", "y", "i", "ga",
    "mu", "mp", "g", "pstar", "wstar", "eps_p_lag", "eps_w_lag",
    "dxf", "zf", "zlagf",
    "P_lam", "Q_lam", "P_pi", "Q_pi", "P_piw", "Q_piw",
    "P_rk", "Q_rk", "P_q", "Q_q", "P_inv", "Q_inv",
)
SHOCK_LABELS = ("e_a", "e_s", "eps_mu", "eps_p", "eps_w", "eps_mp", "eps_g")
OBSERVABLE_LABELS = ("y", "c", "inv", "w", "labor", "pi", "i")

_IX = {name: i for i, name in enumerate(STATE_LABELS)}
_IZ = {name: i for i, name in enumerate(SHOCK_LABELS)}

#: (variable, its P state, its Q state, eta pair) for forward-looking vars.
_FORWARD = ("lam", "pi", "piw", "rk", "q", "inv")


def _filter_for(p: MediumScaleParams) -> SignalFilter:
    return steady_state_kalman_gain(p.rho, p.sigma_a, p.sigma_s)


def medium_shock_covariance(p: MediumScaleParams) -> ShockCovariance:
    """Structural shock covariance with the filter innovation block."""
    sf = _filter_for(p)
    sigma = np.zeros((7, 7))
    sigma[:2, :2] = sf.innovation_cov
    sigma[2, 2] = p.sigma_mu**2
    sigma[3, 3] = p.sigma_p**2
    sigma[4, 4] = p.sigma_w**2
    sigma[5, 5] = p.sigma_mp**2
    sigma[6, 6] = p.sigma_g**2
    return compose_shock_covariance(sigma)


def build_medium_scale(
    p: MediumScaleParams,
    cal: MediumCalibration | None = None,
    regime: str = "DE",
) -> CanonicalForm:
    """Build the 38-state canonical form (7 shocks, 12 expectation errors)."""
    cal = cal or MediumCalibration()
    regime = regime.upper()
    if regime not in ("DE", "RE"):
        raise InvalidParamsError(f"regime must be 'DE' or 'RE', got {regime!r}")
    if regime == "RE" and p.theta != 0.0:
        p = p.replace(theta=0.0)
    th = p.theta

    sf = _filter_for(p)
    rho = p.rho
    # Expectations of productivity growth through the filtered states:
    # E_t[ga_{t+1}] = a1f . xf_t and E_{t-1}[ga_{t+1}] = a1f2 . xf_{t-1}.
    a1f = sf.a[0] @ sf.f
    a1f2 = a1f @ sf.f

    ratios = cal.ratios(p.alpha)
    g_a, h, beta = cal.g_a, p.h, cal.beta
    iota_p, iota_w = cal.iota_p, cal.iota_w
    kappa_p = p.kappa_p(cal)
    wsl = cal.epsilon_w * cal.omega_wage * cal.labor ** (1.0 + p.nu) / p.psi_w
    r_k = cal.r_k
    rk_c = r_k / (r_k + 1.0 - cal.delta_k)
    qq_c = (1.0 - cal.delta_k) / (r_k + 1.0 - cal.delta_k)
    ik = cal.i_over_ku
    gk = (1.0 - cal.delta_k) / g_a
    sdd = p.s_dd
    hab = h / (g_a - h)
    hab_c = g_a / (g_a - h)

    n, k, m = 38, 7, 12
    g0 = np.zeros((n, n))
    g1 = np.zeros((n, n))
    psi = np.zeros((n, k))
    pim = np.zeros((n, m))
    ix, iz = _IX, _IZ
    xf = [ix["dxf"], ix["zf"], ix["zlagf"]]

    def put(mat, row, name, val):
        mat[row, ix[name]] += val

    def put_xf(mat, row, vec, scale=1.0):
        for j, col in enumerate(xf):
            mat[row, col] += scale * vec[j]

    # 0: consumption Euler
    r = 0
    put(g0, r, "lam", 1.0)
    put(g0, r, "ga", th)
    put(g0, r, "pi", th)
    put(g0, r, "i", -1.0)
    put(g0, r, "P_lam", -(1.0 + th))
    put(g0, r, "P_pi", 1.0 + th)
    put_xf(g0, r, a1f, 1.0 + th)
    put(g1, r, "Q_lam", -th)
    put(g1, r, "P_pi", th)
    put(g1, r, "Q_pi", th)
    put_xf(g1, r, a1f + a1f2, th)

    # 1: marginal utility with habits
    r = 1
    put(g0, r, "lam", 1.0)
    put(g0, r, "c", hab_c)
    put(g0, r, "ga", hab)
    put(g1, r, "c", hab)

    # 2: price Phillips curve
    r = 2
    put(g0, r, "pi", 1.0 + beta * (1.0 + th) * iota_p)
    put(g0, r, "P_pi", -beta * (1.0 + th))
    put(g0, r, "mc", -kappa_p)
    put(g0, r, "pstar", -1.0)
    put(g1, r, "pi", iota_p)
    put(g1, r, "Q_pi", -beta * th)
    put(g1, r, "P_pi", beta * th * iota_p)

    # 3: wage Phillips curve
    r = 3
    put(g0, r, "piw", 1.0)
    put(g0, r, "P_piw", -beta * (1.0 + th))
    put(g0, r, "pi", beta * (1.0 + th) * iota_w)
    put_xf(g0, r, a1f, beta * (1.0 + th) * iota_w)
    put(g0, r, "ga", -iota_w)
    put(g0, r, "labor", -wsl * p.nu)
    put(g0, r, "w", wsl)
    put(g0, r, "lam", wsl)
    put(g0, r, "wstar", -1.0)
    put(g1, r, "pi", iota_w)
    put(g1, r, "Q_piw", -beta * th)
    put(g1, r, "P_pi", beta * th * iota_w)
    put_xf(g1, r, a1f2, beta * th * iota_w)

    # 4: capital accumulation (dated t; predetermined stock)
    r = 4
    put(g0, r, "ku", 1.0)
    put(g1, r, "inv", ik)
    put(g1, r, "mu", ik)
    put(g1, r, "ku", gk)
    put(g1, r, "ga", -gk)

    # 5: capital Euler
    r = 5
    put(g0, r, "q", 1.0)
    put(g0, r, "lam", 1.0)
    put(g0, r, "ga", th)
    put(g0, r, "P_lam", -(1.0 + th))
    put_xf(g0, r, a1f, 1.0 + th)
    put(g0, r, "P_rk", -(1.0 + th) * rk_c)
    put(g0, r, "P_q", -(1.0 + th) * qq_c)
    put(g1, r, "Q_lam", -th)
    put_xf(g1, r, a1f + a1f2, th)
    put(g1, r, "Q_rk", -th * rk_c)
    put(g1, r, "Q_q", -th * qq_c)

    # 6: investment FOC
    r = 6
    put(g0, r, "q", 1.0)
    put(g0, r, "mu", 1.0)
    put(g0, r, "inv", -sdd - beta * sdd * (1.0 + th))
    put(g0, r, "ga", -sdd)
    put(g0, r, "P_inv", beta * sdd * (1.0 + th))
    put_xf(g0, r, a1f, beta * sdd * (1.0 + th))
    put(g1, r, "inv", -sdd)
    put(g1, r, "Q_inv", beta * sdd * th)
    put(g1, r, "P_inv", -beta * sdd * th)
    put_xf(g1, r, a1f2, beta * sdd * th)

    # 7: effective capital
    r = 7
    put(g0, r, "k", 1.0)
    put(g0, r, "u", -1.0)
    put(g0, r, "ku", -1.0)
    put(g0, r, "ga", 1.0)

    # 8: utilization FOC
    r = 8
    put(g0, r, "rk", 1.0)
    put(g0, r, "u", -p.chi_ratio)

    # 9: production
    r = 9
    put(g0, r, "y", 1.0)
    put(g0, r, "k", -p.alpha)
    put(g0, r, "labor", -(1.0 - p.alpha))

    # 10: factor price ratio
    r = 10
    put(g0, r, "rk", 1.0)
    put(g0, r, "w", -1.0)
    put(g0, r, "labor", -1.0)
    put(g0, r, "k", 1.0)

    # 11: marginal cost
    r = 11
    put(g0, r, "mc", 1.0)
    put(g0, r, "rk", -p.alpha)
    put(g0, r, "w", -(1.0 - p.alpha))

    # 12: policy rule
    r = 12
    put(g0, r, "i", 1.0)
    put(g0, r, "pi", -(1.0 - p.rho_r) * p.phi_pi)
    put(g0, r, "y", -(1.0 - p.rho_r) * p.phi_x)
    put(g0, r, "mp", -1.0)
    put(g1, r, "i", p.rho_r)

    # 13: resource constraint
    r = 13
    put(g0, r, "y", 1.0 / cal.lambda_g)
    put(g0, r, "c", -ratios["c_over_y"])
    put(g0, r, "inv", -ratios["i_over_y"])
    put(g0, r, "u", -ratios["chi1"] * ratios["k_over_y"])
    put(g0, r, "g", -1.0 / cal.lambda_g)

    # 14: real wage identity
    r = 14
    put(g0, r, "w", 1.0)
    put(g0, r, "piw", -1.0)
    put(g0, r, "pi", 1.0)
    put(g0, r, "ga", 1.0)
    put(g1, r, "w", 1.0)

    # 15: productivity growth from the filter innovations representation
    r = 15
    put(g0, r, "ga", 1.0)
    put_xf(g1, r, a1f)
    psi[r, iz["e_a"]] = 1.0

    # 16-18: AR(1) shock states
    for r, (name, rho_s, shock) in zip(
        (16, 17, 18),
        (("mu", p.rho_mu, "eps_mu"), ("mp", p.rho_mp, "eps_mp"), ("g", p.rho_g, "eps_g")),
    ):
        put(g0, r, name, 1.0)
        put(g1, r, name, rho_s)
        psi[r, iz[shock]] = 1.0

    # 19-20: ARMA(1,1) markup shocks
    r = 19
    put(g0, r, "pstar", 1.0)
    put(g1, r, "pstar", p.rho_p)
    put(g1, r, "eps_p_lag", -p.phi_p)
    psi[r, iz["eps_p"]] = 1.0
    r = 20
    put(g0, r, "wstar", 1.0)
    put(g1, r, "wstar", p.rho_w)
    put(g1, r, "eps_w_lag", -p.phi_w)
    psi[r, iz["eps_w"]] = 1.0

    # 21-22: lagged markup innovations carried as states
    r = 21
    put(g0, r, "eps_p_lag", 1.0)
    psi[r, iz["eps_p"]] = 1.0
    r = 22
    put(g0, r, "eps_w_lag", 1.0)
    psi[r, iz["eps_w"]] = 1.0

    # 23-25: filtered-state recursion xf_t = F xf_{t-1} + K e_t
    for j in range(3):
        r = 23 + j
        g0[r, xf[j]] = 1.0
        for jj in range(3):
            g1[r, xf[jj]] = sf.f[j, jj]
        psi[r, iz["e_a"]] = sf.k[j, 0]
        psi[r, iz["e_s"]] = sf.k[j, 1]

    # 26-37: auxiliary expectation equations
    for idx, name in enumerate(_FORWARD):
        r = 26 + 2 * idx
        put(g0, r, name, 1.0)
        put(g1, r, f"P_{name}", 1.0)
        pim[r, 2 * idx] = 1.0
        r += 1
        put(g0, r, f"P_{name}", 1.0)
        put(g1, r, f"Q_{name}", 1.0)
        pim[r, 2 * idx + 1] = 1.0

    return CanonicalForm(
        gamma0=g0, gamma1=g1, psi=psi, pi=pim,
        state_labels=STATE_LABELS, shock_labels=SHOCK_LABELS,
    )


def medium_selection() -> np.ndarray:
    """Selection matrix mapping states to the 7 level observables."""
    sel = np.zeros((7, len(STATE_LABELS)))
    for i, name in enumerate(OBSERVABLE_LABELS):
        sel[i, _IX[name]] = 1.0
    return sel
