"""Steady-state signal extraction for the productivity block.

Productivity growth decomposes into a persistent growth component and a
transitory level component sharing one persistence parameter:

    dx_t = rho dx_{t-1} + e_x,   var(e_x) = (1 - rho)^2 sigma_a^2
    z_t  = rho z_{t-1}  + e_z,   var(e_z) = rho sigma_a^2

Agents observe total productivity growth da_t = dx_t + z_t - z_{t-1} and a
noisy signal s_t = dx_t + e_s about the growth component.  Their beliefs
follow a time-invariant Kalman filter whose gain solves the steady-state
Riccati fixed point; the filter recursion, its innovation covariance, and
the filtered-state transition are what the medium-scale builder embeds in
the equilibrium system.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from ..errors import InvalidParamsError, NoConvergenceError

Array = NDArray[np.float64]

RICCATI_TOL = 1e-12
RICCATI_MAX_ITER = 10_000


@dataclass(frozen=True)
class SignalFilter:
    """Steady-state filter for the productivity signal problem.

    ``f`` is the 3x3 state transition on (dx, z, z_lag), ``a`` the 2x3
    observation map onto (da, s), and ``k`` the 3x2 steady-state Kalman
    gain applied to observation innovations.  ``p_pred`` is the converged
    one-step-ahead state covariance and ``innovation_cov`` the implied
    2x2 innovation covariance a P a' + R.
    """

    f: Array
    a: Array
    k: Array
    sigma_x2: float
    sigma_z2: float
    sigma_s2: float
    p_pred: Array
    innovation_cov: Array
    iterations: int

    def riccati_residual(self) -> float:
        """Max-abs one-step change of the predicted covariance at the fix point."""
        q = np.diag([self.sigma_x2, self.sigma_z2, 0.0])
        r = np.diag([0.0, self.sigma_s2])
        p = self.p_pred
        s = self.a @ p @ self.a.T + r
        gain = p @ self.a.T @ np.linalg.inv(s)
        p_next = self.f @ (p - gain @ self.a @ p) @ self.f.T + q
        return float(np.abs(p_next - p).max())

    @property
    def filtered_transition(self) -> Array:
        """(I - K A) F, the transition of filtered states absent news."""
        return (np.eye(3) - self.k @ self.a) @ self.f


def steady_state_kalman_gain(rho: float, sigma_a: float, sigma_s: float) -> SignalFilter:
    """Iterate the Riccati recursion to its fixed point.

    Raises NoConvergenceError with iterate diagnostics if the recursion
    has not settled to RICCATI_TOL within RICCATI_MAX_ITER sweeps.
    """
    if not 0.0 <= rho < 1.0:
        raise InvalidParamsError("rho must lie in [0, 1)")
    if sigma_a <= 0 or sigma_s <= 0:
        raise InvalidParamsError("sigma_a and sigma_s must be > 0")

    sigma_x2 = (1.0 - rho) ** 2 * sigma_a**2
    sigma_z2 = rho * sigma_a**2
    f = np.array([[rho, 0.0, 0.0], [0.0, rho, 0.0], [0.0, 1.0, 0.0]])
    a = np.array([[1.0, 1.0, -1.0], [1.0, 0.0, 0.0]])
    q = np.diag([sigma_x2, sigma_z2, 0.0])
    r = np.diag([0.0, sigma_s**2])

    p = q.copy()
    for it in range(1, RICCATI_MAX_ITER + 1):
        s = a @ p @ a.T + r
        gain = p @ a.T @ np.linalg.inv(s)
        p_next = f @ (p - gain @ a @ p) @ f.T + q
        delta = float(np.abs(p_next - p).max())
        p = p_next
        if delta < RICCATI_TOL:
            break
    else:
        raise NoConvergenceError(
            f"Riccati recursion did not converge: last change {delta:.3e} "
            f"after {RICCATI_MAX_ITER} iterations (rho={rho}, sigma_s={sigma_s})"
        )

    s = a @ p @ a.T + r
    k = p @ a.T @ np.linalg.inv(s)
    return SignalFilter(
        f=f,
        a=a,
        k=k,
        sigma_x2=sigma_x2,
        sigma_z2=sigma_z2,
        sigma_s2=sigma_s**2,
        p_pred=p,
        innovation_cov=s,
        iterations=it,
    )
